#include "weldcreep/baseline.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace weldcreep {

BaselineCoefficients baseline_coefficients(const PipeConfig& config) {
  const double e = 2.0 / config.n;
  const double ri = std::pow(config.r_i, e);
  const double ro = std::pow(config.r_o, e);
  BaselineCoefficients k;
  k.a = config.p * ri / (ro - ri);
  k.a_r = -config.p * ri * ro / (ro - ri);
  k.a_theta = (config.n - 2.0) / config.n * k.a_r;
  k.a_z = (config.n - 1.0) / config.n * k.a_r;
  return k;
}

StressState baseline_stress(const PipeConfig& config, const BaselineCoefficients& k, double r) {
  if (r < config.r_i || r > config.r_o) {
    throw std::out_of_range("baseline_stress: r outside [r_i, r_o]");
  }
  const double g = std::pow(r, -2.0 / config.n);
  return {k.a + k.a_r * g, k.a + k.a_theta * g, k.a + k.a_z * g, 0.0};
}

StressState baseline_stress(const PipeConfig& config, double r) {
  return baseline_stress(config, baseline_coefficients(config), r);
}

Mat4 compliance_shape(const PipeConfig& config) {
  // Tangent of Norton's law at sigma0, whose deviator is
  // (a_r/n) r^(-2/n) (1, -1, 0, 0).
  Mat4 shape = deviator_matrix();
  const double d = 0.5 * (config.n - 1.0);
  shape(0, 0) += d;
  shape(1, 1) += d;
  shape(0, 1) -= d;
  shape(1, 0) -= d;
  return shape;
}

ComplianceMatrix compliance_at(const PipeConfig& config, double r) {
  const double n = config.n;
  const BaselineCoefficients k = baseline_coefficients(config);
  const double vm = std::sqrt(3.0) * std::abs(k.a_r) / n * std::pow(r, -2.0 / n);

  ComplianceMatrix c;
  c.prefactor = std::pow(vm, n - 1.0);
  c.matrix = c.prefactor * compliance_shape(config);
  return c;
}

double jump_constant(const PipeConfig& config) {
  const double n = config.n;
  const double ar = baseline_coefficients(config).a_r;
  return std::pow(3.0, 0.5 * (n - 1.0)) * ar * std::pow(std::abs(ar), n - 1.0) / std::pow(n, n);
}

double displacement_jump(const PipeConfig& config, double r) { return jump_constant(config) / r; }

StressJump stress_jump(const PipeConfig& config, double r) {
  const double n = config.n;
  const double ar = baseline_coefficients(config).a_r;
  const double j = -ar / (n * n) * std::pow(r, -2.0 / n);
  return {j, -j};
}

StressJump stress_jump_via_compliance(const PipeConfig& config, double r) {
  const double c = jump_constant(config);
  if (c == 0.0) return {};
  const Mat4 C = compliance_at(config, r).matrix;
  Eigen::Matrix2d block = C.topLeftCorner<2, 2>();
  const Eigen::Vector2d eps{-c / (r * r), c / (r * r)};
  const Eigen::Vector2d sig = block.partialPivLu().solve(eps);
  return {sig[0], sig[1]};
}

}  // namespace weldcreep
