#include "weldcreep/core.hpp"
#include "weldcreep/linsolve.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace weldcreep;

namespace {

Eigen::MatrixXd spd(int n, double spread, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd Q = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return g(rng); });
  Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = std::pow(spread, -double(i) / (n - 1));
  return Q * d.asDiagonal() * Q.transpose();
}

}  // namespace

TEST(SymmetricSolver, WellConditionedUsesLdlt) {
  const Eigen::MatrixXd K = spd(40, 1e3, 1);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(40, -1, 1);
  const SymmetricSolver s(K);
  SolveReport rep;
  const Eigen::VectorXd y = s.solve(K * x, &rep);
  EXPECT_EQ(rep.method, "ldlt");
  EXPECT_LT((y - x).norm(), 1e-10 * x.norm());
  EXPECT_LT(rep.relative_residual, 1e-13);
  EXPECT_EQ(rep.discarded, 0);
}

TEST(SymmetricSolver, BadlyScaledDiagonalIsHandledByJacobi) {
  Eigen::MatrixXd K = spd(30, 10.0, 2);
  Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(30, 0, 14).unaryExpr([](double e) { return std::pow(10.0, e); });
  K = d.asDiagonal() * K * d.asDiagonal();
  const SymmetricSolver s(K);
  EXPECT_EQ(s.factor_report().method, "ldlt");
  EXPECT_LT(s.factor_report().condition, 1e4);
}

TEST(SymmetricSolver, SingularFallsBackToTruncatedEigen) {
  // Rank-deficient PSD matrix: range-consistent right-hand side.
  Eigen::MatrixXd B = Eigen::MatrixXd::Random(20, 12);
  const Eigen::MatrixXd K = B * B.transpose();
  const Eigen::VectorXd f = K * Eigen::VectorXd::Random(20);
  const SymmetricSolver s(K);
  SolveReport rep;
  const Eigen::VectorXd c = s.solve(f, &rep);
  EXPECT_EQ(rep.method, "eigen-truncated");
  EXPECT_EQ(rep.discarded, 8);
  EXPECT_LT(rep.relative_residual, 1e-10);
  EXPECT_LT((K * c - f).norm(), 1e-10 * f.norm());
}

TEST(SymmetricSolver, InconsistentRhsReportsResidual) {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3, 3);
  K(0, 0) = 1.0;
  K(1, 1) = 2.0;
  const SymmetricSolver s(K);
  SolveReport rep;
  s.solve(Eigen::Vector3d(1.0, 1.0, 1.0), &rep);
  EXPECT_NEAR(rep.relative_residual, 1.0 / std::sqrt(3.0), 1e-14);
}

TEST(SymmetricSolver, ConditionThresholdIsConfigurable) {
  const Eigen::MatrixXd K = spd(10, 1e8, 3);
  EXPECT_EQ(SymmetricSolver(K).factor_report().method, "ldlt");
  EXPECT_EQ(SymmetricSolver(K, {1e4, 1e-12}).factor_report().method, "eigen-truncated");
}

TEST(SymmetricSolver, Errors) {
  EXPECT_THROW(SymmetricSolver(Eigen::MatrixXd::Zero(3, 3)), NumericalError);
  EXPECT_THROW(SymmetricSolver(Eigen::MatrixXd::Identity(2, 3)), std::invalid_argument);
  const SymmetricSolver s(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(s.solve(Eigen::VectorXd::Ones(3)), std::invalid_argument);
}
