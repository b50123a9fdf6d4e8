#pragma once

// Closed-form creep solution of the homogeneous pipe, its linearized
// compliance, and the exact interface jumps of the first-order correction.

#include "weldcreep/core.hpp"

namespace weldcreep {

// sigma_k(r) = a + a_k * r^(-2/n), sigma_rz = 0.
struct BaselineCoefficients {
  double a = 0.0;
  double a_r = 0.0;
  double a_theta = 0.0;
  double a_z = 0.0;
};

BaselineCoefficients baseline_coefficients(const PipeConfig& config);

// Throws std::out_of_range outside [r_i, r_o].
StressState baseline_stress(const PipeConfig& config, double r);
StressState baseline_stress(const PipeConfig& config, const BaselineCoefficients& k, double r);

struct ComplianceMatrix {
  Mat4 matrix = Mat4::Zero();
  // sigma_vM(sigma0)^(n-1) = (sqrt(3)|a_r|/n * r^(-2/n))^(n-1); the spectrum
  // of `matrix` is {0, 1, 2, n} times this.
  double prefactor = 0.0;
};

ComplianceMatrix compliance_at(const PipeConfig& config, double r);

// The r-independent factor: compliance_at(r).matrix = prefactor(r) * shape.
Mat4 compliance_shape(const PipeConfig& config);

// c = 3^((n-1)/2) a_r |a_r|^(n-1) / n^n; the radial displacement jump is c/r.
double jump_constant(const PipeConfig& config);
double displacement_jump(const PipeConfig& config, double r);

struct StressJump {
  double sigma_r = 0.0;
  double sigma_theta = 0.0;
};

// [sigma1_r] = -a_r/n^2 r^(-2/n) = -[sigma1_theta], [sigma1_z] = [sigma1_rz] = 0.
StressJump stress_jump(const PipeConfig& config, double r);

// Same jump from C [sigma] = [eps] with [eps_r] = -c/r^2, [eps_theta] = c/r^2
// and [sigma_z] = [sigma_rz] = 0.
StressJump stress_jump_via_compliance(const PipeConfig& config, double r);

}  // namespace weldcreep
