#include "weldcreep/linsolve.hpp"

#include "weldcreep/core.hpp"

#include <cmath>

namespace weldcreep {

SymmetricSolver::SymmetricSolver(Eigen::MatrixXd K, SolverOptions opts) : K_(std::move(K)) {
  const Eigen::Index n = K_.rows();
  if (K_.cols() != n) throw std::invalid_argument("SymmetricSolver: matrix is not square");

  scale_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = K_(i, i);
    // A zero diagonal means a null basis member (e.g. C = 0 pointwise);
    // leave it unscaled and let the eigen fallback drop it.
    scale_[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  const Eigen::MatrixXd S = scale_.asDiagonal() * K_ * scale_.asDiagonal();

  Eigen::LDLT<Eigen::MatrixXd> f(S);
  if (f.info() == Eigen::Success && f.isPositive()) {
    const double rc = f.rcond();
    factor_.condition = rc > 0.0 ? 1.0 / rc : INFINITY;
    if (factor_.condition <= opts.max_condition) {
      factor_.method = "ldlt";
      ldlt_ = std::move(f);
      return;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  if (eig.info() != Eigen::Success) throw NumericalError("SymmetricSolver: eigendecomposition failed");
  const Eigen::VectorXd& w = eig.eigenvalues();
  const double top = w.size() ? w.maxCoeff() : 0.0;
  if (!(top > 0.0)) throw NumericalError("SymmetricSolver: matrix has no positive eigenvalue");
  const double cut = opts.eigen_cutoff * top;
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) keep += w[i] > cut;
  // Eigen sorts ascending, the kept ones are the tail.
  values_ = w.tail(keep);
  vectors_ = eig.eigenvectors().rightCols(keep);
  factor_.method = "eigen-truncated";
  factor_.discarded = static_cast<int>(n - keep);
  factor_.condition = top / values_[0];
}

Eigen::VectorXd SymmetricSolver::solve(const Eigen::VectorXd& f, SolveReport* report) const {
  if (f.size() != K_.rows()) throw std::invalid_argument("SymmetricSolver: right-hand side size mismatch");
  const Eigen::VectorXd fs = scale_.cwiseProduct(f);
  Eigen::VectorXd y;
  if (ldlt_) {
    y = ldlt_->solve(fs);
  } else {
    y = vectors_ * ((vectors_.transpose() * fs).cwiseQuotient(values_));
  }
  Eigen::VectorXd c = scale_.cwiseProduct(y);
  if (!c.allFinite()) throw NumericalError("SymmetricSolver: non-finite solution");

  if (report) {
    *report = factor_;
    const double fn = f.norm();
    report->relative_residual = fn > 0.0 ? (K_ * c - f).norm() / fn : (K_ * c).norm();
  }
  return c;
}

}  // namespace weldcreep
