#include "weldcreep/ritz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weldcreep {

StressState FieldSolution::evaluate(double r, double z, Side side) const {
  if (!basis) throw std::logic_error("FieldSolution: no basis");
  StressState out;
  for (std::size_t i = 0; i < basis->fields.size(); ++i) {
    const double c = coefficients[static_cast<Eigen::Index>(i)];
    if (c == 0.0) continue;
    out += c * basis->fields[i].stress(r, z, side);
  }
  if (baseline) out += baseline_stress(*baseline, r);
  return out;
}

Eigen::MatrixXd assemble_gram(const BasisTables& tables, const PipeConfig& config, const QuadratureGrid& grid,
                              double* asymmetry) {
  const Eigen::Index N = tables.radial[0].rows();
  const auto Qr = static_cast<Eigen::Index>(grid.r_rule.size());
  const auto Qz = static_cast<Eigen::Index>(grid.z_rule.size());

  Eigen::VectorXd wr(Qr), wz(Qz);
  for (Eigen::Index q = 0; q < Qr; ++q) {
    const double r = grid.r_rule.nodes[q];
    wr[q] = grid.r_rule.weights[q] * r * compliance_at(config, r).prefactor;
  }
  for (Eigen::Index q = 0; q < Qz; ++q) wz[q] = grid.z_rule.weights[q];

  const Mat4 shape = compliance_shape(config);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd radial(N, N), axial(N, N);
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      if (shape(k, l) == 0.0) continue;
      radial.noalias() = (tables.radial[k] * wr.asDiagonal()) * tables.radial[l].transpose();
      axial.noalias() = (tables.axial[k] * wz.asDiagonal()) * tables.axial[l].transpose();
      K += shape(k, l) * radial.cwiseProduct(axial);
    }
  }

  if (asymmetry) {
    const double norm = K.norm();
    *asymmetry = norm > 0.0 ? (K - K.transpose()).norm() / norm : 0.0;
  }
  // Average in place; the lower triangle is read from the upper.
  for (Eigen::Index j = 0; j < N; ++j)
    for (Eigen::Index i = 0; i < j; ++i) K(i, j) = K(j, i) = 0.5 * (K(i, j) + K(j, i));
  return K;
}

Eigen::MatrixXd assemble_gram(const Basis& basis, const PipeConfig& config, const QuadratureGrid& grid,
                              double* asymmetry) {
  return assemble_gram(tabulate(basis, grid), config, grid, asymmetry);
}

namespace {

bool is_interface(const PipeConfig& config, double z) {
  const double tol = 1e-12 * config.H;
  return std::any_of(config.layup.interfaces.begin(), config.layup.interfaces.end(),
                     [&](double h) { return std::abs(h - z) <= tol; });
}

}  // namespace

Eigen::VectorXd assemble_rhs(const Basis& basis, const PipeConfig& config, const QuadratureGrid& grid, double z_star,
                             double weight) {
  if (!is_interface(config, z_star)) {
    throw std::invalid_argument("assemble_rhs: z = " + std::to_string(z_star) + " is not a material interface");
  }
  const double c = jump_constant(config);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  if (c == 0.0 || weight == 0.0) return f;

  const QuadratureRule& rr = grid.r_rule;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisField& field = basis.fields[i];
    if (field.potential() != Potential::psi) continue;
    // sigma_rz is continuous at every interface for all families.
    const double axial = field.axial_factor(3, z_star);
    if (axial == 0.0) continue;
    double radial = 0.0;
    for (std::size_t q = 0; q < rr.size(); ++q) radial += rr.weights[q] * field.radial_factor(3, rr.nodes[q]);
    f[static_cast<Eigen::Index>(i)] = -weight * c * radial * axial;
  }
  return f;
}

LinearCorrectionProblem assemble_problem(const PipeConfig& config, std::shared_ptr<const Basis> basis,
                                         int quad_order) {
  if (!basis || basis->size() == 0) throw std::invalid_argument("assemble_problem: empty basis");
  LinearCorrectionProblem pb;
  pb.basis = basis;

  std::vector<double> splits = config.layup.interfaces;
  splits.insert(splits.end(), basis->spec.interfaces.begin(), basis->spec.interfaces.end());
  std::sort(splits.begin(), splits.end());
  pb.grid = make_grid(config, {quad_order, basis->spec.n_radial, basis->spec.n_axial}, splits);
  pb.K = assemble_gram(*basis, config, pb.grid, &pb.asymmetry);

  const NormalizedLayup norm = normalize_layup(config.layup);
  if (!norm.homogeneous()) {
    pb.interfaces = norm.interfaces;
    pb.alphas = norm.alphas;
    for (double z : pb.interfaces) pb.rhs.push_back(assemble_rhs(*basis, config, pb.grid, z));
  }
  return pb;
}

std::vector<FieldSolution> solve_per_interface(const LinearCorrectionProblem& problem, SolverOptions opts) {
  std::vector<FieldSolution> out;
  const Eigen::Index N = static_cast<Eigen::Index>(problem.basis->size());
  const bool trivial = std::all_of(problem.rhs.begin(), problem.rhs.end(),
                                   [](const Eigen::VectorXd& f) { return f.isZero(0.0); });

  std::optional<SymmetricSolver> solver;
  if (!trivial) solver.emplace(problem.K, opts);
  for (std::size_t j = 0; j < problem.rhs.size(); ++j) {
    FieldSolution sol;
    sol.basis = problem.basis;
    sol.kind = FieldKind::correction_single;
    sol.interface = problem.interfaces[j];
    if (problem.rhs[j].isZero(0.0)) {
      sol.coefficients = Eigen::VectorXd::Zero(N);
      sol.report.method = "zero-load";
    } else {
      sol.coefficients = solver->solve(problem.rhs[j], &sol.report);
    }
    out.push_back(std::move(sol));
  }
  return out;
}

FieldSolution combine_interfaces(const std::vector<FieldSolution>& parts, const std::vector<double>& alphas) {
  if (parts.empty()) throw std::invalid_argument("combine_interfaces: no solutions");
  if (parts.size() != alphas.size()) throw std::invalid_argument("combine_interfaces: one weight per solution");
  FieldSolution out;
  out.basis = parts.front().basis;
  out.kind = FieldKind::correction_combined;
  out.coefficients = Eigen::VectorXd::Zero(parts.front().coefficients.size());
  out.report = parts.front().report;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const FieldSolution& p = parts[j];
    if (!p.basis || !p.basis->same_space(*out.basis) || p.coefficients.size() != out.coefficients.size()) {
      throw std::invalid_argument("combine_interfaces: solutions live on different bases");
    }
    out.coefficients += alphas[j] * p.coefficients;
    out.report.relative_residual = std::max(out.report.relative_residual, p.report.relative_residual);
  }
  return out;
}

FieldSolution solve_correction(const LinearCorrectionProblem& problem, SolverOptions opts) {
  if (problem.rhs.empty()) {
    FieldSolution zero;
    zero.basis = problem.basis;
    zero.coefficients = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.basis->size()));
    zero.report.method = "homogeneous";
    return zero;
  }
  return combine_interfaces(solve_per_interface(problem, opts), problem.alphas);
}

StressState first_order_field(const PipeConfig& config, const FieldSolution& sigma1, double s, double r, double z,
                              Side side) {
  StressState out = baseline_stress(config, r);
  if (s != 0.0) out += s * sigma1.evaluate(r, z, side);
  return out;
}

}  // namespace weldcreep
