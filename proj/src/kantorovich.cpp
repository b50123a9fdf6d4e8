#include "weldcreep/kantorovich.hpp"

#include "weldcreep/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weldcreep {

TrialFunction sine_trial(const PipeConfig& config) {
  const double r_i = config.r_i;
  const double k = std::numbers::pi / config.wall();
  return {[=](double r) { return std::sin(k * (r - r_i)); },
          [=](double r) { return k * std::cos(k * (r - r_i)); },
          [=](double r) { return -k * k * std::sin(k * (r - r_i)); }};
}

namespace {

QuadratureRule wall_rule(const PipeConfig& config) {
  const std::vector<double> edges = partition(config.r_i, config.r_o, config.wall() / 4.0);
  return composite_rule(12, edges);
}

void check_trial(const PipeConfig& config, const TrialFunction& f, const char* name) {
  const double scale = std::max({1.0, std::abs(f.value(0.5 * (config.r_i + config.r_o)))});
  if (std::abs(f.value(config.r_i)) > 1e-12 * scale || std::abs(f.value(config.r_o)) > 1e-12 * scale) {
    throw std::invalid_argument(std::string("compute_constants: ") + name + " must vanish at r_i and r_o");
  }
}

}  // namespace

KantorovichConstants compute_constants(const PipeConfig& config, const TrialFunction& phi1,
                                       const TrialFunction& psi1) {
  check_trial(config, phi1, "phi1");
  check_trial(config, psi1, "psi1");

  // Stress shapes multiplying phi2, psi2, psi2' and psi2'':
  //   u = (phi1, (r phi1)', 0, 0)   v = (0, 0, -psi1'/r, 0)
  //   w = (0, 0, 0, psi1/r)         q = (0, psi1, 0, 0)
  double uu = 0, uv = 0, uq = 0, vv = 0, vq = 0, ww = 0, qq = 0;
  const QuadratureRule rule = wall_rule(config);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    const Mat4 C = compliance_at(config, r).matrix;
    const double f = phi1.value(r);
    const double g = psi1.value(r);
    const Vec4 u{f, f + r * phi1.d1(r), 0.0, 0.0};
    const Vec4 v{0.0, 0.0, -psi1.d1(r) / r, 0.0};
    const Vec4 w{0.0, 0.0, 0.0, g / r};
    const Vec4 q{0.0, g, 0.0, 0.0};
    const double wt = rule.weights[i] * r;
    uu += wt * u.dot(C * u);
    uv += wt * u.dot(C * v);
    uq += wt * u.dot(C * q);
    vv += wt * v.dot(C * v);
    vq += wt * v.dot(C * q);
    ww += wt * w.dot(C * w);
    qq += wt * q.dot(C * q);
  }

  KantorovichConstants k;
  k.a1 = uu;
  k.a2 = uv;
  k.a3 = uq;
  k.b1 = uv;
  k.b2 = uq;
  k.b3 = vv;
  k.b4 = 2.0 * vq - ww;
  k.b5 = qq;
  if (k.a1 == 0.0) throw NumericalError("compute_constants: a1 = 0 (zero compliance)");
  k.k1 = k.b3 - k.a2 * k.a2 / k.a1;
  k.k2 = k.b4 - 2.0 * k.a2 * k.a3 / k.a1;
  k.k3 = k.b5 - k.a3 * k.a3 / k.a1;
  k.g1 = vq - k.a2 * k.a3 / k.a1;
  k.g2 = k.k3;
  k.e1 = ww - k.g1;
  k.e2 = 0.0;
  k.e3 = -k.g2;
  return k;
}

double interface_load(const PipeConfig& config, const TrialFunction& psi1) {
  const double c = jump_constant(config);
  const QuadratureRule rule = wall_rule(config);
  return rule.integrate([&](double r) { return c * psi1.value(r) / r; });
}

CharacteristicRoots characteristic_roots(double k1, double k2, double k3) {
  if (k3 == 0.0) throw NumericalError("characteristic_roots: k3 = 0, the equation is not fourth order");
  using cd = std::complex<double>;
  const cd disc = std::sqrt(cd(k2 * k2 - 4.0 * k1 * k3));
  const cd mu1 = (-k2 + disc) / (2.0 * k3);
  const cd mu2 = (-k2 - disc) / (2.0 * k3);
  const cd l1 = std::sqrt(mu1);
  const cd l2 = std::sqrt(mu2);

  CharacteristicRoots out;
  out.roots = {l1, -l1, l2, -l2};
  std::sort(out.roots.begin(), out.roots.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  out.canonical = out.roots[0];
  for (const cd& x : out.roots) {
    if (x.real() > 0.0 && x.imag() >= 0.0) {
      out.canonical = x;
      break;
    }
  }
  return out;
}

namespace {

// Values of the four fundamental functions (d-th derivative) on [lo, hi].
Eigen::Vector4d fundamental(std::complex<double> lam, double z, double lo, double hi, int d) {
  const std::complex<double> up = std::pow(lam, d) * std::exp(lam * (z - hi));
  const std::complex<double> down = std::pow(-lam, d) * std::exp(-lam * (z - lo));
  return {up.real(), up.imag(), down.real(), down.imag()};
}

struct Functionals {
  const KantorovichConstants& k;
  std::complex<double> lam;
  Eigen::Vector4d value(double z, double lo, double hi, int d) const { return fundamental(lam, z, lo, hi, d); }
  Eigen::Vector4d e(double z, double lo, double hi) const {
    return k.e1 * value(z, lo, hi, 1) + k.e2 * value(z, lo, hi, 2) + k.e3 * value(z, lo, hi, 3);
  }
  Eigen::Vector4d g(double z, double lo, double hi) const {
    return k.g1 * value(z, lo, hi, 0) + k.g2 * value(z, lo, hi, 2);
  }
};

}  // namespace

std::size_t OdePiecewiseSolution::interval(double z, Side side) const {
  const std::size_t m = coefficients.size();
  std::size_t j = 0;
  while (j + 1 < m && (z > breaks[j + 1] || (z == breaks[j + 1] && side == Side::above))) ++j;
  return j;
}

double OdePiecewiseSolution::psi(double z, int d, Side side) const {
  const std::size_t j = interval(z, side);
  return coefficients[j].dot(fundamental(lambda, z, breaks[j], breaks[j + 1], d));
}

double OdePiecewiseSolution::phi(double z, int d, Side side) const {
  return -(constants.a2 * psi(z, d, side) + constants.a3 * psi(z, d + 2, side)) / constants.a1;
}

double OdePiecewiseSolution::e_functional(double z, Side side) const {
  return constants.e1 * psi(z, 1, side) + constants.e2 * psi(z, 2, side) + constants.e3 * psi(z, 3, side);
}

double OdePiecewiseSolution::g_functional(double z, Side side) const {
  return constants.g1 * psi(z, 0, side) + constants.g2 * psi(z, 2, side);
}

OdePiecewiseSolution solve_bvp(const KantorovichConstants& constants, double H,
                               const std::vector<InterfaceLoad>& loads) {
  OdePiecewiseSolution sol;
  sol.constants = constants;
  sol.lambda = characteristic_roots(constants.k1, constants.k2, constants.k3).canonical;
  sol.breaks.push_back(0.0);
  for (const InterfaceLoad& l : loads) {
    if (!(l.z > sol.breaks.back() && l.z < H)) {
      throw std::invalid_argument("solve_bvp: interfaces must be increasing inside (0, H)");
    }
    sol.breaks.push_back(l.z);
  }
  sol.breaks.push_back(H);

  const std::size_t m = loads.size() + 1;  // intervals
  const auto n = static_cast<Eigen::Index>(4 * m);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  const Functionals F{constants, sol.lambda};
  const auto& zb = sol.breaks;

  // Ends: psi' = 0 and the e-functional vanishes.
  Eigen::Index row = 0;
  A.block<1, 4>(row++, 0) = F.value(0.0, zb[0], zb[1], 1).transpose();
  A.block<1, 4>(row++, 0) = F.e(0.0, zb[0], zb[1]).transpose();
  const auto last = static_cast<Eigen::Index>(4 * (m - 1));
  A.block<1, 4>(row++, last) = F.value(H, zb[m - 1], zb[m], 1).transpose();
  A.block<1, 4>(row++, last) = F.e(H, zb[m - 1], zb[m]).transpose();

  // Interfaces: psi, psi' and e continuous; g jumps by the load.
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double z = zb[j + 1];
    const auto lo = static_cast<Eigen::Index>(4 * j);
    const auto hi = lo + 4;
    const Eigen::Vector4d below[4] = {F.value(z, zb[j], zb[j + 1], 0), F.value(z, zb[j], zb[j + 1], 1),
                                      F.e(z, zb[j], zb[j + 1]), F.g(z, zb[j], zb[j + 1])};
    const Eigen::Vector4d above[4] = {F.value(z, zb[j + 1], zb[j + 2], 0), F.value(z, zb[j + 1], zb[j + 2], 1),
                                      F.e(z, zb[j + 1], zb[j + 2]), F.g(z, zb[j + 1], zb[j + 2])};
    for (int c = 0; c < 4; ++c) {
      A.block<1, 4>(row, lo) = -below[c].transpose();
      A.block<1, 4>(row, hi) = above[c].transpose();
      if (c == 3) b[row] = loads[j].jump;
      ++row;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  sol.rank = static_cast<int>(lu.rank());
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  sol.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
  if (sol.rank < n) {
    throw NumericalError("solve_bvp: boundary-value system is singular (rank " + std::to_string(sol.rank) + " of " +
                         std::to_string(n) + ")");
  }
  const Eigen::VectorXd x = lu.solve(b);
  const double bn = b.norm();
  sol.residual = bn > 0.0 ? (A * x - b).norm() / bn : (A * x).norm();
  for (std::size_t j = 0; j < m; ++j) sol.coefficients.emplace_back(x.segment<4>(static_cast<Eigen::Index>(4 * j)));
  return sol;
}

OdePiecewiseSolution solve_bvp(const KantorovichConstants& constants, const PipeConfig& config,
                               const TrialFunction& psi1) {
  const NormalizedLayup norm = normalize_layup(config.layup);
  std::vector<InterfaceLoad> loads;
  if (!norm.homogeneous()) {
    const double G = interface_load(config, psi1);
    for (std::size_t j = 0; j < norm.interfaces.size(); ++j) loads.push_back({norm.interfaces[j], norm.alphas[j] * G});
  }
  return solve_bvp(constants, config.H, loads);
}

StressState reconstruct_stress(const OdePiecewiseSolution& sol, const TrialFunction& phi1, const TrialFunction& psi1,
                               double r, double z, Side side) {
  const double f = phi1.value(r);
  const double g = psi1.value(r);
  PotentialDerivatives d;
  const double p2 = sol.phi(z, 0, side);
  d.phi = f * p2;
  d.d_rphi_dr = (f + r * phi1.d1(r)) * p2;
  d.psi_zz = g * sol.psi(z, 2, side);
  d.psi_r = psi1.d1(r) * sol.psi(z, 0, side);
  d.psi_z = g * sol.psi(z, 1, side);
  return stress_from_potentials(d, r);
}

StressGradient reconstruct_gradient(const OdePiecewiseSolution& sol, const TrialFunction& phi1,
                                    const TrialFunction& psi1, double r, double z, Side side) {
  const double f = phi1.value(r), f1 = phi1.d1(r), f2 = phi1.d2(r);
  const double g = psi1.value(r), g1 = psi1.d1(r), g2 = psi1.d2(r);
  double P[4], Q[2];
  for (int d = 0; d < 4; ++d) P[d] = sol.psi(z, d, side);
  for (int d = 0; d < 2; ++d) Q[d] = sol.phi(z, d, side);

  StressGradient out;
  out.d_dr = {f1 * Q[0], (2.0 * f1 + r * f2) * Q[0] + g1 * P[2], (-g2 / r + g1 / (r * r)) * P[0],
              (g1 / r - g / (r * r)) * P[1]};
  out.d_dz = {f * Q[1], (f + r * f1) * Q[1] + g * P[3], -g1 / r * P[1], g / r * P[2]};
  return out;
}

}  // namespace weldcreep
