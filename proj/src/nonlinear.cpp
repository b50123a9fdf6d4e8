#include "weldcreep/nonlinear.hpp"

#include "weldcreep/kernels.hpp"
#include "weldcreep/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace weldcreep {

double complementary_potential(const StressState& sigma, double A, double n) {
  return 2.0 * A / (3.0 * (n + 1.0)) * std::pow(von_mises(sigma), n + 1.0);
}

PotentialAssembler::PotentialAssembler(const PipeConfig& config, const NormalizedLayup& layup,
                                       std::shared_ptr<const Basis> basis, int quad_order)
    : config_(config), basis_(std::move(basis)) {
  if (!basis_ || basis_->size() == 0) throw std::invalid_argument("PotentialAssembler: empty basis");
  std::vector<double> splits = config.layup.interfaces;
  splits.insert(splits.end(), layup.interfaces.begin(), layup.interfaces.end());
  splits.insert(splits.end(), basis_->spec.interfaces.begin(), basis_->spec.interfaces.end());
  std::sort(splits.begin(), splits.end());
  grid_ = make_grid(config, {quad_order, basis_->spec.n_radial, basis_->spec.n_axial}, splits);
  tables_ = tabulate(*basis_, grid_);

  const auto Qz = static_cast<Eigen::Index>(grid_.z_rule.size());
  prefactor_.resize(Qz);
  for (Eigen::Index q = 0; q < Qz; ++q) {
    prefactor_[q] = layup.prefactor_at(grid_.z_rule.nodes[q]);
    if (!(prefactor_[q] > 0.0)) {
      throw NumericalError("PotentialAssembler: Norton prefactor A(z) is not positive at z = " +
                           std::to_string(grid_.z_rule.nodes[q]));
    }
  }
  const auto Qr = static_cast<Eigen::Index>(grid_.r_rule.size());
  for (auto& b : baseline_) b.resize(Qr);
  const BaselineCoefficients k = baseline_coefficients(config);
  for (Eigen::Index q = 0; q < Qr; ++q) {
    const StressState s0 = baseline_stress(config, k, grid_.r_rule.nodes[q]);
    for (int c = 0; c < 4; ++c) baseline_[c][q] = s0[c];
  }
}

std::array<Eigen::MatrixXd, 4> PotentialAssembler::point_stresses(const Eigen::VectorXd& c) const {
  std::array<Eigen::MatrixXd, 4> S;
  for (int k = 0; k < 4; ++k) {
    S[k].noalias() = tables_.radial[k].transpose() * (c.asDiagonal() * tables_.axial[k]);
    S[k].colwise() += baseline_[k];
  }
  return S;
}

double PotentialAssembler::potential(const Eigen::VectorXd& c) const {
  if (c.size() != static_cast<Eigen::Index>(size())) throw std::invalid_argument("potential: coefficient size");
  const auto S = point_stresses(c);
  const double n = config_.n;
  double acc = 0.0;
  for (Eigen::Index iz = 0; iz < S[0].cols(); ++iz) {
    double col = 0.0;
    for (Eigen::Index ir = 0; ir < S[0].rows(); ++ir) {
      const double r = grid_.r_rule.nodes[ir];
      const StressState s{S[0](ir, iz), S[1](ir, iz), S[2](ir, iz), S[3](ir, iz)};
      col += grid_.r_rule.weights[ir] * r * complementary_potential(s, 1.0, n);
    }
    acc += grid_.z_rule.weights[iz] * prefactor_[iz] * col;
  }
  return acc;
}

double PotentialAssembler::evaluate(const Eigen::VectorXd& c, Eigen::VectorXd* gradient,
                                    Eigen::MatrixXd* hessian) const {
  const auto N = static_cast<Eigen::Index>(size());
  if (c.size() != N) throw std::invalid_argument("evaluate: coefficient size");
  const double n = config_.n;
  const auto Qr = static_cast<Eigen::Index>(grid_.r_rule.size());
  const auto Qz = static_cast<Eigen::Index>(grid_.z_rule.size());

  if (!hessian) {
    // Gradient through dense products: g = sum_k rowsum((R_k E_k) .* Z_k).
    const auto S = point_stresses(c);
    std::array<Eigen::MatrixXd, 4> E;
    for (auto& e : E) e.resize(Qr, Qz);
    double pi = 0.0;
    for (Eigen::Index iz = 0; iz < Qz; ++iz) {
      for (Eigen::Index ir = 0; ir < Qr; ++ir) {
        const double w = grid_.r_rule.weights[ir] * grid_.r_rule.nodes[ir] * grid_.z_rule.weights[iz] * prefactor_[iz];
        const StressState s{S[0](ir, iz), S[1](ir, iz), S[2](ir, iz), S[3](ir, iz)};
        pi += w * complementary_potential(s, 1.0, n);
        const Vec4 rate = norton_strain_rate(s, 1.0, n).vec();
        for (int k = 0; k < 4; ++k) E[k](ir, iz) = w * rate[k];
      }
    }
    if (gradient) {
      gradient->setZero(N);
      for (int k = 0; k < 4; ++k) {
        const Eigen::MatrixXd RE = tables_.radial[k] * E[k];
        *gradient += RE.cwiseProduct(tables_.axial[k]).rowwise().sum();
      }
    }
    return pi;
  }

  // Pointwise pass: tangent rows of every quadrature point are stacked in
  // blocks and folded into the Hessian by symmetric rank updates.
  const kernels::KernelTable& kt = kernels::active();
  const auto un = static_cast<std::size_t>(N);
  Eigen::MatrixXd s_buf(N, 4);
  const double* s_ptr[4] = {s_buf.col(0).data(), s_buf.col(1).data(), s_buf.col(2).data(), s_buf.col(3).data()};
  constexpr Eigen::Index batch = 256;
  Eigen::MatrixXd rows(N, 3 * batch);
  Eigen::Index filled = 0;

  hessian->setZero(N, N);
  if (gradient) gradient->setZero(N);
  auto flush = [&] {
    if (filled == 0) return;
    kt.rank_update(un, static_cast<std::size_t>(3 * filled), rows.data(), hessian->data());
    filled = 0;
  };

  const double delta = std::sqrt(n) - 1.0;
  double pi = 0.0;
  for (Eigen::Index iz = 0; iz < Qz; ++iz) {
    for (Eigen::Index ir = 0; ir < Qr; ++ir) {
      const double r = grid_.r_rule.nodes[ir];
      const double w = grid_.r_rule.weights[ir] * r * grid_.z_rule.weights[iz] * prefactor_[iz];
      for (int k = 0; k < 4; ++k) {
        kt.separable_product(un, tables_.radial[k].col(ir).data(), tables_.axial[k].col(iz).data(),
                             s_buf.col(k).data());
      }
      double sig[4];
      kt.contract(un, c.data(), s_ptr, sig);
      const StressState s{sig[0] + baseline_[0][ir], sig[1] + baseline_[1][ir], sig[2] + baseline_[2][ir],
                          sig[3] + baseline_[3][ir]};
      const double vm = von_mises(s);
      pi += w * complementary_potential(s, 1.0, n);

      if (gradient) {
        const Vec4 rate = norton_strain_rate(s, 1.0, n).vec();
        const double e[4] = {w * rate[0], w * rate[1], w * rate[2], w * rate[3]};
        kt.accumulate_work(un, e, s_ptr, gradient->data());
      }

      kernels::TangentFrame f;
      const double y[3] = {(s.sigma_r - s.sigma_theta) / std::sqrt(2.0),
                           (s.sigma_r + s.sigma_theta - 2.0 * s.sigma_z) / std::sqrt(6.0), std::sqrt(2.0) * s.sigma_rz};
      const double ny = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
      if (ny > 0.0) {
        f.scale = std::sqrt(w * std::pow(vm, n - 1.0));
        f.delta = delta;
        for (int m = 0; m < 3; ++m) f.yhat[m] = y[m] / ny;
      } else if (n == 1.0) {
        f.scale = std::sqrt(w);
      } else {
        continue;  // zero tangent
      }
      double* out[3] = {rows.col(3 * filled).data(), rows.col(3 * filled + 1).data(),
                        rows.col(3 * filled + 2).data()};
      kt.tangent_rows(un, s_ptr, f, out);
      if (++filled == batch) flush();
    }
  }
  flush();
  hessian->triangularView<Eigen::StrictlyUpper>() = hessian->transpose();
  return pi;
}

NonlinearResult solve_nonlinear(const NonlinearProblem& problem) {
  const NormalizedLayup layup = problem.layup ? *problem.layup : normalize_layup(problem.config.layup);
  const PotentialAssembler assembler(problem.config, layup, problem.basis, problem.quad_order);
  const NewtonOptions& opt = problem.options;
  const auto N = static_cast<Eigen::Index>(assembler.size());

  Eigen::VectorXd c = problem.initial.size() ? problem.initial : Eigen::VectorXd::Zero(N);
  if (c.size() != N) throw std::invalid_argument("solve_nonlinear: initial guess size mismatch");

  NonlinearResult res;
  NewtonDiagnostics& d = res.diagnostics;
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  double pi = assembler.evaluate(c, &g, &H);
  d.potential_history.push_back(pi);
  d.gradient_history.push_back(g.lpNorm<Eigen::Infinity>());

  const double eps = std::numeric_limits<double>::epsilon();
  for (;;) {
    d.gradient_norm = g.lpNorm<Eigen::Infinity>();
    d.potential = pi;
    if (d.gradient_norm < opt.gradient_tol * (1.0 + std::abs(pi))) {
      d.converged = true;
      break;
    }
    if (d.iterations >= opt.max_iterations) {
      d.message = "no convergence in " + std::to_string(opt.max_iterations) + " iterations";
      break;
    }

    Eigen::VectorXd p;
    try {
      p = -SymmetricSolver(H).solve(g);
    } catch (const NumericalError&) {
      p.resize(0);
    }
    double slope = p.size() ? g.dot(p) : 0.0;
    if (!(slope < 0.0)) {
      // Indefinite or singular Hessian: diagonally scaled steepest descent.
      const Eigen::VectorXd diag = H.diagonal().cwiseMax(1e-300);
      p = -g.cwiseQuotient(diag);
      slope = g.dot(p);
      ++d.fallback_steps;
    }

    // Backtracking on Pi, evaluated on one code path for comparability.
    const double pi0 = assembler.potential(c);
    double t = 1.0;
    bool accepted = false;
    for (int b = 0; b <= opt.max_backtracks; ++b, t *= opt.backtrack) {
      const double pt = assembler.potential(c + t * p);
      if (pt <= pi0 + opt.armijo * t * slope) {
        accepted = true;
        break;
      }
      // Predicted decrease below what Pi can resolve: take the full step.
      if (b == 0 && -slope <= 1e3 * eps * std::abs(pi0) && pt - pi0 <= 1e2 * eps * std::abs(pi0)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      d.message = "line search failed";
      break;
    }
    c += t * p;
    ++d.iterations;
    d.step_lengths.push_back(t);
    pi = assembler.evaluate(c, &g, &H);
    d.potential_history.push_back(pi);
    d.gradient_history.push_back(g.lpNorm<Eigen::Infinity>());
  }
  if (d.converged && d.message.empty()) {
    std::ostringstream os;
    os << "converged in " << d.iterations << " iterations";
    d.message = os.str();
  }

  res.solution.basis = problem.basis;
  res.solution.coefficients = c;
  res.solution.kind = FieldKind::nonlinear;
  res.solution.s = layup.s;
  res.solution.baseline = problem.config;
  return res;
}

ErrorReport perturbation_error(const PipeConfig& config, double s, const FieldSolution& sigma1,
                               const FieldSolution& nonlinear, double r, const std::vector<double>& z) {
  ErrorReport rep;
  rep.s = s;
  rep.r = r;
  rep.z = z;
  for (double zz : z) {
    const StressState fo = first_order_field(config, sigma1, s, r, zz);
    const StressState nl = nonlinear.evaluate(r, zz);
    const StressState diff = nl - fo;
    rep.first_order.push_back(fo);
    rep.nonlinear.push_back(nl);
    rep.difference.push_back(diff);
    for (int k = 0; k < 4; ++k) rep.max_abs[k] = std::max(rep.max_abs[k], std::abs(diff[k]));
  }
  rep.max_norm = *std::max_element(rep.max_abs.begin(), rep.max_abs.end());
  return rep;
}

}  // namespace weldcreep
