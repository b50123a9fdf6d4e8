#include "oracles.hpp"

#include "weldcreep/baseline.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace weldcreep;

namespace {

PipeConfig pipe(double n, double p = 1.0) {
  PipeConfig c = oracle::welded_config();
  c.n = n;
  c.p = p;
  return c;
}

std::vector<double> radii(const PipeConfig& c, int count) {
  std::vector<double> r;
  for (int k = 0; k < count; ++k) r.push_back(c.r_i + (c.r_o - c.r_i) * k / (count - 1.0));
  return r;
}

}  // namespace

TEST(Baseline, ExampleCoefficients) {
  const BaselineCoefficients k = baseline_coefficients(pipe(3.0));
  EXPECT_NEAR(k.a, 1.70241, 5e-6);
  EXPECT_NEAR(k.a_r, -2.70241, 5e-6);
  EXPECT_NEAR(k.a_theta, -0.90080, 5e-6);
  EXPECT_NEAR(k.a_z, -1.80161, 5e-6);
}

TEST(Baseline, BoundaryValues) {
  for (double n : {1.0, 2.0, 3.0, 5.0, 7.5}) {
    for (double p : {0.0, 1.0, 3.2}) {
      const PipeConfig c = pipe(n, p);
      EXPECT_NEAR(baseline_stress(c, c.r_i).sigma_r, -p, 1e-13);
      EXPECT_NEAR(baseline_stress(c, c.r_o).sigma_r, 0.0, 1e-13);
      EXPECT_EQ(baseline_stress(c, 1.3).sigma_rz, 0.0);
    }
  }
}

TEST(Baseline, LinearMaterialIsLame) {
  const BaselineCoefficients k = baseline_coefficients(pipe(1.0));
  EXPECT_NEAR(k.a, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(k.a_r, -4.0 / 3.0, 1e-15);
}

TEST(Baseline, DeviatorIsRadialHoopOnly) {
  const PipeConfig c = pipe(3.0);
  const BaselineCoefficients k = baseline_coefficients(c);
  for (double r : radii(c, 11)) {
    const StressState s = baseline_stress(c, r);
    const double mean = (s.sigma_r + s.sigma_theta + s.sigma_z) / 3.0;
    const double g = k.a_r / c.n * std::pow(r, -2.0 / c.n);
    EXPECT_NEAR(s.sigma_r - mean, g, 1e-14);
    EXPECT_NEAR(s.sigma_theta - mean, -g, 1e-14);
    EXPECT_NEAR(s.sigma_z - mean, 0.0, 1e-14);
  }
}

TEST(Baseline, OutsideWallThrows) {
  const PipeConfig c = pipe(3.0);
  EXPECT_THROW(baseline_stress(c, 0.99), std::out_of_range);
  EXPECT_THROW(baseline_stress(c, 2.01), std::out_of_range);
}

TEST(Baseline, RadialEquilibriumByFiniteDifferences) {
  for (double n : {1.0, 3.0, 6.0}) {
    const PipeConfig c = pipe(n);
    for (int k = 0; k < 100; ++k) {
      const double r = 1.01 + 0.98 * k / 99.0;
      const double d = oracle::central4([&](double x) { return baseline_stress(c, x).sigma_r; }, r, 1e-3);
      const StressState s = baseline_stress(c, r);
      EXPECT_LT(std::abs(d + (s.sigma_r - s.sigma_theta) / r), 1e-8 * c.p);
    }
  }
}

TEST(Baseline, ZeroAxialCreepRate) {
  // Closed pipe in plane strain: eps_z of the Norton law vanishes at sigma0.
  const PipeConfig c = pipe(3.0);
  for (double r : radii(c, 7)) EXPECT_NEAR(norton_strain_rate(baseline_stress(c, r), 1.0, c.n).eps_z, 0.0, 1e-14);
}

TEST(Compliance, ShearEntryIsTwicePrefactor) {
  const PipeConfig c = pipe(3.0);
  for (double r : radii(c, 5)) {
    const ComplianceMatrix C = compliance_at(c, r);
    EXPECT_NEAR(C.matrix(3, 3), 2.0 * C.prefactor, 1e-14 * C.prefactor);
  }
}

TEST(Compliance, SpectrumIsZeroOneTwoN) {
  for (double n : {1.0, 2.0, 3.0, 4.5}) {
    const PipeConfig c = pipe(n);
    for (double r : radii(c, 9)) {
      const ComplianceMatrix C = compliance_at(c, r);
      Eigen::SelfAdjointEigenSolver<Mat4> es(C.matrix);
      std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + 4);
      std::vector<double> want{0.0, 1.0, 2.0, n};
      std::sort(want.begin(), want.end());
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(got[k] / C.prefactor, want[k], 1e-12) << "n=" << n << " r=" << r;
    }
  }
}

TEST(Compliance, HydrostaticNullDirection) {
  const ComplianceMatrix C = compliance_at(pipe(3.0), 1.4);
  EXPECT_LT((C.matrix * Vec4(1, 1, 1, 0)).norm(), 1e-14 * C.prefactor);
}

TEST(Compliance, NormalBlockRowsSumToZero) {
  const ComplianceMatrix C = compliance_at(pipe(3.0), 1.7);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(C.matrix.row(i).head<3>().sum(), 0.0, 1e-14 * C.prefactor);
}

TEST(Compliance, MatchesFiniteDifferenceJacobian) {
  for (double n : {1.0, 3.0, 5.0}) {
    const PipeConfig c = pipe(n);
    for (double r : radii(c, 6)) {
      const StressState s0 = baseline_stress(c, r);
      const Mat4 C = compliance_at(c, r).matrix;
      for (int k = 0; k < 4; ++k) {
        for (int m = 0; m < 4; ++m) {
          const double fd = oracle::central4(
              [&](double x) {
                Vec4 v = s0.vec();
                v[k] = x;
                return norton_strain_rate(StressState::from(v), 1.0, n).vec()[m];
              },
              s0.vec()[k], 1e-3);
          EXPECT_NEAR(fd, C(m, k), 1e-6 * C.cwiseAbs().maxCoeff()) << n << " " << r << " " << m << k;
        }
      }
    }
  }
}

TEST(Compliance, LinearMaterialIsConstantAndIsotropic) {
  const PipeConfig c = pipe(1.0);
  const ComplianceMatrix a = compliance_at(c, 1.1), b = compliance_at(c, 1.9);
  EXPECT_NEAR(a.prefactor, 1.0, 1e-15);
  EXPECT_LT((a.matrix - b.matrix).norm(), 1e-15);
  EXPECT_LT((a.matrix - deviator_matrix()).norm(), 1e-15);
}

TEST(Jumps, DisplacementJumpWeldedExample) {
  const PipeConfig c = pipe(3.0);
  const double ar = baseline_coefficients(c).a_r;
  const double c_hand = 3.0 * ar * ar * ar / 27.0;
  EXPECT_NEAR(jump_constant(c), c_hand, 1e-13);
  EXPECT_NEAR(jump_constant(c), -2.19287, 5e-6);
  EXPECT_NEAR(displacement_jump(c, 1.5), -1.4619, 5e-5);
  EXPECT_NEAR(displacement_jump(c, 1.2) * 1.2, displacement_jump(c, 1.8) * 1.8, 1e-14);
}

TEST(Jumps, ZeroPressureGivesNoJump) {
  const PipeConfig c = pipe(3.0, 0.0);
  EXPECT_EQ(displacement_jump(c, 1.5), 0.0);
  const StressJump j = stress_jump(c, 1.5);
  EXPECT_EQ(j.sigma_r, 0.0);
  EXPECT_EQ(j.sigma_theta, 0.0);
}

TEST(Jumps, StressJumpAntisymmetric) {
  const PipeConfig c = pipe(3.0);
  for (double r : radii(c, 20)) {
    const StressJump j = stress_jump(c, r);
    EXPECT_EQ(j.sigma_r + j.sigma_theta, 0.0);
  }
}

TEST(Jumps, ClosedFormAgreesWithComplianceRoute) {
  for (double n : {1.0, 2.0, 3.0, 5.0}) {
    for (double p : {0.5, 1.0, 2.0}) {
      const PipeConfig c = pipe(n, p);
      for (double r : radii(c, 50)) {
        const StressJump a = stress_jump(c, r), b = stress_jump_via_compliance(c, r);
        EXPECT_NEAR(a.sigma_r, b.sigma_r, 1e-12 * std::abs(a.sigma_r));
        EXPECT_NEAR(a.sigma_theta, b.sigma_theta, 1e-12 * std::abs(a.sigma_theta));
      }
    }
  }
}

TEST(Jumps, HandSolvedTwoByTwo) {
  // Pushing the stress jump back through C must give the strain jump
  // [eps_theta] = c/r^2 = -[eps_r], [eps_z] = 0.
  const PipeConfig c = pipe(3.0);
  const double r = 1.5;
  const StressJump j = stress_jump(c, r);
  const Mat4 C = compliance_at(c, r).matrix;
  const Vec4 eps = C * Vec4(j.sigma_r, j.sigma_theta, 0.0, 0.0);
  const double cc = jump_constant(c);
  EXPECT_NEAR(eps[0], -cc / (r * r), 1e-12);
  EXPECT_NEAR(eps[1], cc / (r * r), 1e-12);
  EXPECT_NEAR(eps[2], 0.0, 1e-12);
  EXPECT_NEAR(j.sigma_r, 0.229147573, 1e-8);
}
