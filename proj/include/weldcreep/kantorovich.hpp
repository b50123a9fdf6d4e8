#pragma once

// Separated solution of the auxiliary problem: phi = phi1(r) phi2(z),
// psi = psi1(r) psi2(z) with fixed radial trial functions. Integrating the
// compatibility conditions over r leaves the ODE
//   k3 psi2'''' + k2 psi2'' + k1 psi2 = 0
// on every interval between interfaces, with phi2 = -(a2 psi2 + a3 psi2'')/a1.

#include "weldcreep/baseline.hpp"
#include "weldcreep/stressfn.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace weldcreep {

struct TrialFunction {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

// sin(pi (r - r_i) / (r_o - r_i))
TrialFunction sine_trial(const PipeConfig& config);

struct KantorovichConstants {
  double a1 = 0, a2 = 0, a3 = 0;
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0;
  double k1 = 0, k2 = 0, k3 = 0;
  double e1 = 0, e2 = 0, e3 = 0;
  double g1 = 0, g2 = 0;
};

// Throws std::invalid_argument when a trial function does not vanish on
// both walls.
KantorovichConstants compute_constants(const PipeConfig& config, const TrialFunction& phi1,
                                       const TrialFunction& psi1);

// int c psi1(r) / r dr: the jump of the g-functional carried by a unit-weight
// interface.
double interface_load(const PipeConfig& config, const TrialFunction& psi1);

struct CharacteristicRoots {
  std::array<std::complex<double>, 4> roots;
  std::complex<double> canonical;  // Re > 0, Im >= 0
};

// Roots of k3 x^4 + k2 x^2 + k1. Throws NumericalError for k3 = 0.
CharacteristicRoots characteristic_roots(double k1, double k2, double k3);

class OdePiecewiseSolution {
 public:
  KantorovichConstants constants;
  std::complex<double> lambda;
  std::vector<double> breaks;               // 0, z_1, ..., z_m, H
  std::vector<Eigen::Vector4d> coefficients;  // one 4-vector per interval
  int rank = 0;
  double condition = 0.0;
  double residual = 0.0;  // relative residual of the linear system

  // d-th derivative of psi2; on a break point `side` picks the interval.
  double psi(double z, int d = 0, Side side = Side::above) const;
  double phi(double z, int d = 0, Side side = Side::above) const;
  // e1 psi' + e2 psi'' + e3 psi'''
  double e_functional(double z, Side side = Side::above) const;
  // g1 psi + g2 psi''
  double g_functional(double z, Side side = Side::above) const;

 private:
  std::size_t interval(double z, Side side) const;
};

struct InterfaceLoad {
  double z = 0.0;
  double jump = 0.0;  // required jump of the g-functional
};

// Fundamental system per interval: Re/Im of exp(lambda (z - z_hi)) and
// exp(-lambda (z - z_lo)), so every exponential is at most 1 on its own
// interval. Throws NumericalError when the system is rank deficient.
OdePiecewiseSolution solve_bvp(const KantorovichConstants& constants, double H,
                               const std::vector<InterfaceLoad>& loads);

// Layup-driven version: one load per interface, weighted by alpha_j.
OdePiecewiseSolution solve_bvp(const KantorovichConstants& constants, const PipeConfig& config,
                               const TrialFunction& psi1);

StressState reconstruct_stress(const OdePiecewiseSolution& sol, const TrialFunction& phi1, const TrialFunction& psi1,
                               double r, double z, Side side = Side::above);
StressGradient reconstruct_gradient(const OdePiecewiseSolution& sol, const TrialFunction& phi1,
                                    const TrialFunction& psi1, double r, double z, Side side = Side::above);

}  // namespace weldcreep
