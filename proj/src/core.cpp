#include "weldcreep/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace weldcreep {

double StressState::operator[](int k) const {
  switch (k) {
    case 0: return sigma_r;
    case 1: return sigma_theta;
    case 2: return sigma_z;
    case 3: return sigma_rz;
    default: throw std::out_of_range("stress component index " + std::to_string(k));
  }
}

StressState& StressState::operator+=(const StressState& o) {
  sigma_r += o.sigma_r;
  sigma_theta += o.sigma_theta;
  sigma_z += o.sigma_z;
  sigma_rz += o.sigma_rz;
  return *this;
}

StressState& StressState::operator-=(const StressState& o) {
  sigma_r -= o.sigma_r;
  sigma_theta -= o.sigma_theta;
  sigma_z -= o.sigma_z;
  sigma_rz -= o.sigma_rz;
  return *this;
}

StressState& StressState::operator*=(double a) {
  sigma_r *= a;
  sigma_theta *= a;
  sigma_z *= a;
  sigma_rz *= a;
  return *this;
}

void MaterialLayup::validate(double length) const {
  if (coefficients.empty()) {
    throw std::invalid_argument("layup: at least one Norton coefficient A is required");
  }
  if (interfaces.size() + 1 != coefficients.size()) {
    throw std::invalid_argument("layup: expected " + std::to_string(coefficients.size() - 1) +
                                " interfaces for " + std::to_string(coefficients.size()) +
                                " coefficients, got " + std::to_string(interfaces.size()));
  }
  for (double a : coefficients) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("layup: Norton coefficients A must be positive");
    }
  }
  double prev = 0.0;
  for (double z : interfaces) {
    if (!(z > prev) || !(z < length)) {
      throw std::invalid_argument("layup: interfaces must be strictly increasing inside (0, H)");
    }
    prev = z;
  }
}

double MaterialLayup::prefactor_at(double z) const {
  const auto it = std::upper_bound(interfaces.begin(), interfaces.end(), z);
  return coefficients[static_cast<std::size_t>(it - interfaces.begin())];
}

void PipeConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(r_i) || !(r_i > 0.0)) throw std::invalid_argument("r_i must be positive");
  if (!finite(r_o) || !(r_o > r_i)) throw std::invalid_argument("r_o must exceed r_i");
  if (!finite(H) || !(H > 0.0)) throw std::invalid_argument("H must be positive");
  if (!finite(p) || p < 0.0) throw std::invalid_argument("p must be non-negative");
  if (!finite(n) || n < 1.0) throw std::invalid_argument("n must be at least 1");
  layup.validate(H);
}

double NormalizedLayup::prefactor_at(double z) const {
  double a = 1.0;
  for (std::size_t j = 0; j < interfaces.size(); ++j) {
    if (z < interfaces[j]) a -= s * alphas[j];
  }
  return a;
}

NormalizedLayup NormalizedLayup::with_s(double new_s) const {
  NormalizedLayup out = *this;
  out.s = new_s;
  out.large_perturbation = std::abs(new_s) > 0.5;
  return out;
}

NormalizedLayup normalize_layup(const MaterialLayup& layup) {
  if (layup.coefficients.empty() || layup.interfaces.size() + 1 != layup.coefficients.size()) {
    throw std::invalid_argument("normalize_layup: inconsistent layup");
  }
  // Merge neighbours with identical A.
  std::vector<double> coeff{layup.coefficients.front()};
  std::vector<double> where;
  for (std::size_t j = 1; j < layup.coefficients.size(); ++j) {
    if (layup.coefficients[j] != coeff.back()) {
      coeff.push_back(layup.coefficients[j]);
      where.push_back(layup.interfaces[j - 1]);
    }
  }

  NormalizedLayup out;
  if (coeff.size() == 1) return out;

  const double a_top = coeff.back();
  const std::size_t m = coeff.size();
  out.s = 1.0 - coeff[m - 2] / a_top;
  out.interfaces = where;
  out.alphas.resize(m - 1);
  // A_j - A_{j+1} = -s * alpha_j * A_m
  for (std::size_t j = 0; j + 1 < m; ++j) {
    out.alphas[j] = (coeff[j + 1] - coeff[j]) / (a_top * out.s);
  }
  out.alphas.back() = 1.0;
  out.large_perturbation = std::abs(out.s) > 0.5;
  return out;
}

const Mat4& deviator_matrix() {
  static const Mat4 m = [] {
    Mat4 d = Mat4::Zero();
    d.topLeftCorner<3, 3>().setConstant(-1.0 / 3.0);
    d.topLeftCorner<3, 3>().diagonal().setConstant(2.0 / 3.0);
    d(3, 3) = 2.0;
    return d;
  }();
  return m;
}

double von_mises(const StressState& sigma) {
  const double mean = (sigma.sigma_r + sigma.sigma_theta + sigma.sigma_z) / 3.0;
  const double sr = sigma.sigma_r - mean;
  const double st = sigma.sigma_theta - mean;
  const double sz = sigma.sigma_z - mean;
  const double ss = sr * sr + st * st + sz * sz + 2.0 * sigma.sigma_rz * sigma.sigma_rz;
  return std::sqrt(1.5 * ss);
}

StrainRateState norton_strain_rate(const StressState& sigma, double A, double n) {
  const double vm = von_mises(sigma);
  if (vm == 0.0 && n > 1.0) return {};
  const double scale = A * std::pow(vm, n - 1.0);
  const Vec4 dev = deviator_matrix() * sigma.vec();
  return StrainRateState::from(scale * dev);
}

Mat4 norton_tangent(const StressState& sigma, double A, double n) {
  const double vm = von_mises(sigma);
  const Mat4& M = deviator_matrix();
  if (vm == 0.0) {
    return n == 1.0 ? Mat4(A * M) : Mat4(Mat4::Zero());
  }
  const Vec4 m = M * sigma.vec();
  const double base = A * std::pow(vm, n - 1.0);
  return base * (M + (1.5 * (n - 1.0) / (vm * vm)) * (m * m.transpose()));
}

}  // namespace weldcreep
