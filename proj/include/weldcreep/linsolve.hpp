#pragma once

// Dense symmetric positive semidefinite solves for the Ritz and Newton
// systems.

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace weldcreep {

struct SolveReport {
  std::string method;  // "ldlt" or "eigen-truncated"
  double condition = 0.0;  // estimate after Jacobi scaling
  double relative_residual = 0.0;
  int discarded = 0;  // eigen-directions dropped by the fallback
};

struct SolverOptions {
  double max_condition = 1e12;
  double eigen_cutoff = 1e-12;  // relative to the largest eigenvalue
};

// Factors K once, Jacobi scaled; solve() may be called for many right-hand
// sides. Falls back to a truncated eigendecomposition when the LDLT
// condition estimate exceeds max_condition or the factorization fails.
class SymmetricSolver {
 public:
  explicit SymmetricSolver(Eigen::MatrixXd K, SolverOptions opts = {});

  Eigen::VectorXd solve(const Eigen::VectorXd& f, SolveReport* report = nullptr) const;
  const SolveReport& factor_report() const { return factor_; }
  Eigen::Index size() const { return K_.rows(); }

 private:
  Eigen::MatrixXd K_;
  Eigen::VectorXd scale_;
  std::optional<Eigen::LDLT<Eigen::MatrixXd>> ldlt_;
  // Kept eigenpairs of the scaled matrix for the fallback.
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd values_;
  SolveReport factor_;
};

}  // namespace weldcreep
