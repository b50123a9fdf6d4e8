#pragma once

// Equilibrated stress fields generated from a pair of stress functions
// (phi, psi):
//
//   sigma_r     = phi
//   sigma_theta = d(r phi)/dr + d2 psi/dz2
//   sigma_z     = -(1/r) d psi/dr
//   sigma_rz    =  (1/r) d psi/dz
//
// Both equilibrium equations of the axisymmetric problem hold identically
// for any (phi, psi). The Ritz basis below uses separable pairs
// R(r) Z(z) whose radial factor sin(i pi (r - r_i)/(r_o - r_i)) makes
// sigma_r and sigma_rz vanish on both pipe walls.

#include "weldcreep/core.hpp"
#include "weldcreep/quadrature.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace weldcreep {

// Which one-sided limit to take on a discontinuity of an axial profile.
enum class Side { below, above };

struct PotentialDerivatives {
  double phi = 0.0;
  double d_rphi_dr = 0.0;  // d(r phi)/dr
  double psi_zz = 0.0;
  double psi_r = 0.0;
  double psi_z = 0.0;
};

// Throws std::invalid_argument for r <= 0.
StressState stress_from_potentials(const PotentialDerivatives& d, double r);

// A general (phi, psi) pair with closed-form derivatives.
struct PotentialPair {
  std::function<PotentialDerivatives(double r, double z)> derivatives;
  bool continuous = true;
};

StressState stress_from_potentials(const PotentialPair& pair, double r, double z);

// Partial derivatives of a stress field.
struct StressGradient {
  StressState d_dr;
  StressState d_dz;
};

// Residuals of the two axisymmetric equilibrium equations.
std::array<double, 2> equilibrium_residual(const StressState& s, const StressGradient& g, double r);

enum class Potential { phi, psi };

enum class Family {
  phi_cosine,       // sin(i..) cos(j pi z / H),   j = 0..N_z
  phi_half_cosine,  // sin(i..) cos(pi z / 2H)
  phi_half_sine,    // sin(i..) sin(pi z / 2H)
  psi_cosine,       // sin(n..) cos(k pi z / H),   k = 0..N_z
  phi_step,         // sin(i..) Heaviside(z - h)
  psi_ramp,         // sin(n..) piecewise quadratic with a kink in curvature at h
};

std::string family_name(Family f);

class AxialProfile {
 public:
  enum class Kind { cosine, half_cosine, half_sine, step, ramp };

  static AxialProfile cosine(int k, double length) { return {Kind::cosine, k, length, 0.0}; }
  static AxialProfile half_cosine(double length) { return {Kind::half_cosine, 0, length, 0.0}; }
  static AxialProfile half_sine(double length) { return {Kind::half_sine, 0, length, 0.0}; }
  static AxialProfile step(double h, double length) { return {Kind::step, 0, length, h}; }
  static AxialProfile ramp(double h, double length) { return {Kind::ramp, 0, length, h}; }

  // d-th derivative (0 <= d <= 3); delta functions from jumps are dropped.
  double eval(double z, int d, Side side = Side::above) const;

  Kind kind() const { return kind_; }
  int wavenumber() const { return k_; }
  double break_point() const { return h_; }

 private:
  AxialProfile(Kind kind, int k, double length, double h) : kind_(kind), k_(k), length_(length), h_(h) {}

  Kind kind_;
  int k_;
  double length_;
  double h_;
};

class BasisField {
 public:
  BasisField(Family family, int radial_mode, AxialProfile axial, double r_i, double wall);

  Family family() const { return family_; }
  Potential potential() const { return potential_; }
  int radial_mode() const { return mode_; }
  const AxialProfile& axial() const { return axial_; }

  // Stress component k factors as radial_factor(k, r) * axial_factor(k, z).
  double radial_factor(int k, double r) const;
  double radial_factor_dr(int k, double r) const;
  double axial_factor(int k, double z, Side side = Side::above) const;
  double axial_factor_dz(int k, double z, Side side = Side::above) const;

  PotentialDerivatives potentials(double r, double z, Side side = Side::above) const;
  StressState stress(double r, double z, Side side = Side::above) const;
  StressGradient stress_gradient(double r, double z, Side side = Side::above) const;

 private:
  std::array<double, 3> radial(double r) const;  // S, S', S''

  Family family_;
  Potential potential_;
  int mode_;
  AxialProfile axial_;
  double r_i_;
  double wall_;
};

struct BasisSpec {
  int n_radial = 25;
  int n_axial = 25;
  bool discontinuous = true;
  // Interfaces carrying the step / ramp families.
  std::vector<double> interfaces;
};

struct Basis {
  BasisSpec spec;
  double r_i = 0.0;
  double r_o = 0.0;
  double H = 0.0;
  std::vector<BasisField> fields;

  std::size_t size() const { return fields.size(); }
  bool same_space(const Basis& other) const;
};

// Enumerates the continuous families and, when requested, one step and one
// ramp family per interface. Throws for interfaces outside (0, H).
std::shared_ptr<const Basis> enumerate_basis(const PipeConfig& config, const BasisSpec& spec);

// Tensor-product Gauss grid over [r_i, r_o] x [0, H]; z cells are split at
// every interface so no cell straddles a material jump.
struct QuadratureGrid {
  QuadratureRule r_rule;
  QuadratureRule z_rule;
  std::vector<double> r_edges;
  std::vector<double> z_edges;
  int order = 12;

  std::size_t points() const { return r_rule.size() * z_rule.size(); }
};

struct GridResolution {
  int order = 12;
  int n_radial = 25;
  int n_axial = 25;
};

QuadratureGrid make_grid(const PipeConfig& config, const GridResolution& res, std::span<const double> interfaces);

// Integral over the meridian section with d(Omega) = r dr dz.
double integrate(const QuadratureGrid& grid, const std::function<double(double r, double z)>& f);

using StressField = std::function<StressState(double r, double z)>;
using BilinearForm = std::function<double(const StressState&, const StressState&)>;

double integrate_bilinear(const QuadratureGrid& grid, const StressField& a, const StressField& b,
                          const BilinearForm& form);

// Radial and axial factors of every basis field at the grid nodes,
// column q of radial[k] holds radial_factor(k, r_q) over all fields.
struct BasisTables {
  std::array<Eigen::MatrixXd, 4> radial;  // N x Qr
  std::array<Eigen::MatrixXd, 4> axial;   // N x Qz
};

BasisTables tabulate(const Basis& basis, const QuadratureGrid& grid);

}  // namespace weldcreep
