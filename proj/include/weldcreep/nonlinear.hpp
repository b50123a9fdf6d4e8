#pragma once

// Direct steady-state solve on the equilibrated space: minimize
//   Pi(c) = int A(z) W*(sigma0 + sum_i c_i sigma_i) dOmega
// with W* = 2/(3(n+1)) sigma_vM^(n+1), whose stationarity is the weak
// compatibility condition of the full nonlinear problem.

#include "weldcreep/ritz.hpp"
#include "weldcreep/stressfn.hpp"

#include <Eigen/Core>

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace weldcreep {

// dW*/dsigma = norton_strain_rate(sigma, A, n).
double complementary_potential(const StressState& sigma, double A, double n);

struct NewtonOptions {
  double gradient_tol = 1e-10;  // on ||g||_inf / (1 + |Pi|)
  int max_iterations = 30;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
};

struct NewtonDiagnostics {
  bool converged = false;
  int iterations = 0;  // Newton (or fallback) steps taken
  int fallback_steps = 0;
  double potential = 0.0;
  double gradient_norm = 0.0;  // ||g||_inf at exit
  std::vector<double> potential_history;  // at every accepted iterate, start included
  std::vector<double> gradient_history;
  std::vector<double> step_lengths;
  std::string message;
};

struct NonlinearProblem {
  PipeConfig config;
  // Normalized A(z); defaults to normalize_layup(config.layup) when empty.
  std::optional<NormalizedLayup> layup;
  std::shared_ptr<const Basis> basis;
  Eigen::VectorXd initial;  // empty means c = 0
  NewtonOptions options;
  int quad_order = 12;
};

// Potential, gradient and Hessian of Pi on a fixed grid.
class PotentialAssembler {
 public:
  PotentialAssembler(const PipeConfig& config, const NormalizedLayup& layup, std::shared_ptr<const Basis> basis,
                     int quad_order = 12);

  double potential(const Eigen::VectorXd& c) const;
  // Fills whichever of gradient / hessian is non-null; returns Pi.
  double evaluate(const Eigen::VectorXd& c, Eigen::VectorXd* gradient, Eigen::MatrixXd* hessian) const;

  const QuadratureGrid& grid() const { return grid_; }
  std::size_t size() const { return basis_->size(); }

 private:
  // Stress component k at all grid points, Qr x Qz.
  std::array<Eigen::MatrixXd, 4> point_stresses(const Eigen::VectorXd& c) const;

  PipeConfig config_;
  std::shared_ptr<const Basis> basis_;
  QuadratureGrid grid_;
  BasisTables tables_;
  Eigen::VectorXd prefactor_;          // A at z nodes
  std::array<Eigen::VectorXd, 4> baseline_;  // sigma0 components at r nodes
};

struct NonlinearResult {
  FieldSolution solution;  // kind nonlinear, includes sigma0
  NewtonDiagnostics diagnostics;
};

// Newton with exact Hessian and backtracking on Pi. Throws NumericalError
// when A(z) is not positive; non-convergence is reported through the
// diagnostics, not thrown.
NonlinearResult solve_nonlinear(const NonlinearProblem& problem);

struct ErrorReport {
  double s = 0.0;
  double r = 0.0;
  std::vector<double> z;
  std::vector<StressState> first_order;
  std::vector<StressState> nonlinear;
  std::vector<StressState> difference;  // nonlinear - first_order
  std::array<double, 4> max_abs{};
  double max_norm = 0.0;
  NewtonDiagnostics diagnostics;
};

// Samples sigma(s) and sigma0 + s sigma1 on the same z points along r.
ErrorReport perturbation_error(const PipeConfig& config, double s, const FieldSolution& sigma1,
                               const FieldSolution& nonlinear, double r, const std::vector<double>& z);

}  // namespace weldcreep
