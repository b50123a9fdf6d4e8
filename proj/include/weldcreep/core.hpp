#pragma once

// Problem definition, Norton's creep law and the layup normalization.
//
// Vector convention used throughout the library:
//   stress      (sigma_r, sigma_theta, sigma_z, sigma_rz)
//   strain rate (eps_r, eps_theta, eps_z, 2*eps_rz)
// so that the plain dot product of the two vectors equals the tensor
// contraction eps : sigma.

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace weldcreep {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StressState {
  double sigma_r = 0.0;
  double sigma_theta = 0.0;
  double sigma_z = 0.0;
  double sigma_rz = 0.0;

  Vec4 vec() const { return {sigma_r, sigma_theta, sigma_z, sigma_rz}; }
  static StressState from(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  double operator[](int k) const;

  StressState& operator+=(const StressState& o);
  StressState& operator-=(const StressState& o);
  StressState& operator*=(double a);
  friend StressState operator+(StressState a, const StressState& b) { return a += b; }
  friend StressState operator-(StressState a, const StressState& b) { return a -= b; }
  friend StressState operator*(double a, StressState s) { return s *= a; }
};

// Strain rate with the engineering shear 2*eps_rz in the last slot.
struct StrainRateState {
  double eps_r = 0.0;
  double eps_theta = 0.0;
  double eps_z = 0.0;
  double gamma_rz = 0.0;

  Vec4 vec() const { return {eps_r, eps_theta, eps_z, gamma_rz}; }
  static StrainRateState from(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  double trace() const { return eps_r + eps_theta + eps_z; }
};

// Piecewise constant Norton prefactor along z: layer j spans
// [interfaces[j-1], interfaces[j]] with interfaces[-1] = 0 and
// interfaces[m-1] = H.
struct MaterialLayup {
  std::vector<double> interfaces;
  std::vector<double> coefficients;

  void validate(double length) const;
  // Prefactor in the layer containing z; z exactly on an interface belongs
  // to the layer above it.
  double prefactor_at(double z) const;
};

struct PipeConfig {
  double r_i = 1.0;
  double r_o = 2.0;
  double H = 1.0;
  double p = 0.0;
  double n = 1.0;
  MaterialLayup layup;

  void validate() const;
  double wall() const { return r_o - r_i; }
};

// A(z)/A_m = 1 - s * sum_j alpha_j * Heaviside(z_{j+1} - z), alpha_{m-1} = 1.
// Layers with equal prefactors are merged first, so `interfaces` lists only
// the positions where A actually jumps.
struct NormalizedLayup {
  double s = 0.0;
  std::vector<double> alphas;
  std::vector<double> interfaces;
  // |s| > 0.5: the first-order expansion is known to degrade there.
  bool large_perturbation = false;

  bool homogeneous() const { return interfaces.empty() || s == 0.0; }
  double prefactor_at(double z) const;
  // Same interfaces and weights with a different perturbation parameter.
  NormalizedLayup with_s(double new_s) const;
};

NormalizedLayup normalize_layup(const MaterialLayup& layup);

double von_mises(const StressState& sigma);

// A * dev(sigma) * sigma_vM^(n-1), shear slot holds 2*eps_rz.
StrainRateState norton_strain_rate(const StressState& sigma, double A, double n);

// d(eps)/d(sigma) of Norton's law in the vector convention above.
Mat4 norton_tangent(const StressState& sigma, double A, double n);

// The constant matrix M with dev(sigma) (engineering shear) = M * sigma.
const Mat4& deviator_matrix();

}  // namespace weldcreep
