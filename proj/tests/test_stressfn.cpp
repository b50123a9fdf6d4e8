#include "oracles.hpp"

#include "weldcreep/stressfn.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace weldcreep;

namespace {

const double pi = std::numbers::pi;

std::shared_ptr<const Basis> small_basis(const PipeConfig& c, int nr, int nz, bool disc = true) {
  BasisSpec spec{nr, nz, disc, c.layup.interfaces};
  return enumerate_basis(c, spec);
}

double field_scale(const BasisField& f, const PipeConfig& c) {
  double m = 0.0;
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; b <= 40; ++b) {
      const StressState s = f.stress(c.r_i + 0.1 * a * c.wall(), c.H * b / 40.0);
      for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(s[k]));
    }
  return m;
}

}  // namespace

TEST(Potentials, ZeroPairGivesZeroStress) {
  const StressState s = stress_from_potentials(PotentialDerivatives{}, 1.3);
  EXPECT_EQ(s.vec().norm(), 0.0);
}

TEST(Potentials, UniformAxialStress) {
  // psi = r^2/2: psi_r = r, everything else zero.
  PotentialPair pair{[](double r, double) { return PotentialDerivatives{0, 0, 0, r, 0}; }};
  const StressState s = stress_from_potentials(pair, 1.7, 0.3);
  EXPECT_NEAR(s.sigma_z, -1.0, 1e-15);
  EXPECT_EQ(s.sigma_r, 0.0);
  EXPECT_EQ(s.sigma_theta, 0.0);
  EXPECT_EQ(s.sigma_rz, 0.0);
}

TEST(Potentials, NonPositiveRadiusThrows) {
  EXPECT_THROW(stress_from_potentials(PotentialDerivatives{}, 0.0), std::invalid_argument);
  EXPECT_THROW(stress_from_potentials(PotentialDerivatives{}, -1.0), std::invalid_argument);
}

TEST(Potentials, SineCosinePhiIsEquilibrated) {
  const double ri = 1.0, ro = 2.0, H = 8.0;
  PotentialPair pair{[&](double r, double z) {
    const double x = pi * (r - ri) / (ro - ri);
    const double S = std::sin(x), dS = pi / (ro - ri) * std::cos(x);
    const double Z = std::cos(pi * z / H);
    return PotentialDerivatives{S * Z, (S + r * dS) * Z, 0, 0, 0};
  }};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(1.05, 1.95), uz(0.1, 7.9);
  for (int k = 0; k < 50; ++k) {
    const double r = ur(rng), z = uz(rng);
    const auto res = oracle::fd_equilibrium([&](double a, double b) { return stress_from_potentials(pair, a, b); }, r, z);
    EXPECT_LT(std::abs(res[0]), 1e-10);
    EXPECT_LT(std::abs(res[1]), 1e-10);
  }
}

TEST(Basis, CountsWithoutDiscontinuous) {
  const PipeConfig c = oracle::welded_config();
  EXPECT_EQ(small_basis(c, 1, 0, false)->size(), 4u);
}

TEST(Basis, DefaultSizeIs1400) {
  const PipeConfig c = oracle::welded_config();
  EXPECT_EQ(small_basis(c, 25, 25, true)->size(), 25u * 26 + 25 + 25 + 25 * 26 + 25 + 25);
  EXPECT_EQ(small_basis(c, 25, 25, true)->size(), 1400u);
}

TEST(Basis, FamilyOrderAndLabels) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 2, 1, true);
  std::vector<Family> seq;
  for (const auto& f : b->fields) seq.push_back(f.family());
  const std::vector<Family> want{Family::phi_cosine,      Family::phi_cosine,    Family::phi_cosine,
                                 Family::phi_cosine,      Family::phi_half_cosine, Family::phi_half_cosine,
                                 Family::phi_half_sine,   Family::phi_half_sine, Family::psi_cosine,
                                 Family::psi_cosine,      Family::psi_cosine,    Family::psi_cosine,
                                 Family::phi_step,        Family::phi_step,      Family::psi_ramp,
                                 Family::psi_ramp};
  EXPECT_EQ(seq, want);
  EXPECT_EQ(family_name(Family::psi_ramp), "psi_ramp");
}

TEST(Basis, InterfaceOutsidePipeThrows) {
  PipeConfig c = oracle::welded_config();
  EXPECT_THROW(enumerate_basis(c, {2, 2, true, {8.0}}), std::invalid_argument);
  EXPECT_THROW(enumerate_basis(c, {2, 2, true, {-1.0}}), std::invalid_argument);
  EXPECT_NO_THROW(enumerate_basis(c, {2, 2, false, {8.0}}));
  EXPECT_THROW(enumerate_basis(c, {0, 2, false, {}}), std::invalid_argument);
}

TEST(Basis, RampProfileBranches) {
  const double h = 0.5, H = 8.0;
  const AxialProfile p = AxialProfile::ramp(h, H);
  // value and slope continuous, slope 0 at both ends, curvature jumps
  EXPECT_NEAR(p.eval(h, 0, Side::below), p.eval(h, 0, Side::above), 1e-15);
  EXPECT_NEAR(p.eval(h, 1, Side::below), 1.0, 1e-15);
  EXPECT_NEAR(p.eval(h, 1, Side::above), 1.0, 1e-15);
  EXPECT_NEAR(p.eval(0.0, 1), 0.0, 1e-15);
  EXPECT_NEAR(p.eval(H, 1), 0.0, 1e-15);
  EXPECT_NEAR(p.eval(h, 2, Side::below), 1.0 / h, 1e-15);
  EXPECT_NEAR(p.eval(h, 2, Side::above), -1.0 / (H - h), 1e-15);
  // derivatives against finite differences on each branch
  for (double z : {0.2, 0.4, 1.0, 5.0, 7.7}) {
    for (int d = 0; d < 3; ++d) {
      const double fd = oracle::central4([&](double x) { return p.eval(x, d); }, z, 1e-3);
      EXPECT_NEAR(fd, p.eval(z, d + 1), 1e-9) << z << " " << d;
    }
  }
}

TEST(Basis, AxialProfilesMatchFiniteDifferences) {
  const double H = 8.0;
  for (const AxialProfile& p : {AxialProfile::cosine(0, H), AxialProfile::cosine(7, H), AxialProfile::half_cosine(H),
                                AxialProfile::half_sine(H), AxialProfile::step(0.5, H)}) {
    for (double z : {0.3, 1.1, 4.0, 7.5}) {
      for (int d = 0; d < 3; ++d) {
        const double fd = oracle::central4([&](double x) { return p.eval(x, d); }, z, 1e-3);
        EXPECT_NEAR(fd, p.eval(z, d + 1), 1e-8 * (1 + std::abs(p.eval(z, d + 1))));
      }
    }
  }
}

TEST(Basis, RadialFactorsMatchFiniteDifferences) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 3, 2, true);
  for (const BasisField& f : b->fields) {
    for (int k = 0; k < 4; ++k) {
      for (double r : {1.1, 1.45, 1.9}) {
        const double fd = oracle::central4([&](double x) { return f.radial_factor(k, x); }, r, 1e-4);
        EXPECT_NEAR(fd, f.radial_factor_dr(k, r), 1e-7 * (1 + std::abs(fd)));
      }
    }
  }
}

TEST(Basis, SeparableFactorsReproduceStress) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 3, 3, true);
  for (const BasisField& f : b->fields) {
    for (double r : {1.2, 1.7})
      for (double z : {0.25, 0.5, 3.3}) {
        const StressState s = f.stress(r, z);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(s[k], f.radial_factor(k, r) * f.axial_factor(k, z), 1e-13);
      }
  }
}

TEST(Basis, EveryFieldIsEquilibrated) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 6, 6, true);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ur(1.02, 1.98), uz(0.02, 7.98);
  for (const BasisField& f : b->fields) {
    const double scale = field_scale(f, c);
    for (int k = 0; k < 200; ++k) {
      const double r = ur(rng);
      double z = uz(rng);
      if (std::abs(z - 0.5) < 2e-3) z += 4e-3;  // finite differences must not straddle h
      const auto fd = oracle::fd_equilibrium([&](double a, double zz) { return f.stress(a, zz); }, r, z, 2e-4);
      EXPECT_LT(std::abs(fd[0]), 1e-6 * scale) << family_name(f.family());
      EXPECT_LT(std::abs(fd[1]), 1e-6 * scale) << family_name(f.family());
      // the analytic gradient is exact, so it must close to rounding
      const auto an = equilibrium_residual(f.stress(r, z), f.stress_gradient(r, z), r);
      EXPECT_LT(std::abs(an[0]), 1e-10 * scale);
      EXPECT_LT(std::abs(an[1]), 1e-10 * scale);
    }
  }
}

TEST(Basis, AnalyticGradientMatchesFiniteDifferences) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 3, 3, true);
  for (const BasisField& f : b->fields) {
    const double scale = field_scale(f, c);
    for (double r : {1.15, 1.6})
      for (double z : {0.3, 2.2, 6.1}) {
        const StressGradient g = f.stress_gradient(r, z);
        for (int k = 0; k < 4; ++k) {
          const double dr = oracle::central4([&](double x) { return f.stress(x, z)[k]; }, r, 1e-4);
          const double dz = oracle::central4([&](double x) { return f.stress(r, x)[k]; }, z, 1e-4);
          EXPECT_NEAR(g.d_dr[k], dr, 1e-7 * scale * 10);
          EXPECT_NEAR(g.d_dz[k], dz, 1e-7 * scale * 10);
        }
      }
  }
}

TEST(Basis, HomogeneousTractions) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 5, 5, true);
  for (const BasisField& f : b->fields) {
    const double scale = field_scale(f, c);
    for (double z : {0.1, 0.5, 2.0, 7.0}) {
      for (double r : {c.r_i, c.r_o}) {
        EXPECT_LT(std::abs(f.stress(r, z).sigma_r), 1e-13 * scale);
        EXPECT_LT(std::abs(f.stress(r, z).sigma_rz), 1e-13 * scale);
      }
    }
    for (double r : {1.1, 1.5, 1.9}) {
      EXPECT_LT(std::abs(f.stress(r, 0.0).sigma_rz), 1e-13 * scale) << family_name(f.family());
      EXPECT_LT(std::abs(f.stress(r, c.H).sigma_rz), 1e-13 * scale) << family_name(f.family());
    }
  }
}

TEST(Basis, DiscontinuousFamiliesJumpOnlyInNormalComponents) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 2, 0, true);
  for (const BasisField& f : b->fields) {
    if (f.family() != Family::phi_step && f.family() != Family::psi_ramp) continue;
    const StressState lo = f.stress(1.3, 0.5, Side::below), hi = f.stress(1.3, 0.5, Side::above);
    EXPECT_NEAR(lo.sigma_z, hi.sigma_z, 1e-14);
    EXPECT_NEAR(lo.sigma_rz, hi.sigma_rz, 1e-14);
    EXPECT_GT(std::abs(lo.sigma_theta - hi.sigma_theta), 1e-3);
    if (f.family() == Family::phi_step) {
      EXPECT_GT(std::abs(lo.sigma_r - hi.sigma_r), 1e-3);
    }
  }
}

TEST(Integration, VolumeAndSecondMoment) {
  const PipeConfig c = oracle::welded_config();
  const std::vector<double> none;
  const QuadratureGrid g = make_grid(c, {12, 5, 5}, none);
  EXPECT_NEAR(integrate(g, [](double, double) { return 1.0; }), 12.0, 1e-12);
  EXPECT_NEAR(integrate(g, [](double r, double) { return r * r; }), 30.0, 1e-12);
}

TEST(Integration, SplittingAtInterfaceIsNeutralForSmoothIntegrands) {
  const PipeConfig c = oracle::welded_config();
  const std::vector<double> none, split{0.5};
  const QuadratureGrid a = make_grid(c, {12, 5, 5}, none), b = make_grid(c, {12, 5, 5}, split);
  auto f = [](double r, double z) { return std::exp(-r) * std::cos(0.7 * z) + r * z; };
  EXPECT_NEAR(integrate(a, f), integrate(b, f), 1e-12);
}

TEST(Integration, NoCellStraddlesAnInterface) {
  const PipeConfig c = oracle::welded_config();
  const std::vector<double> split{0.5, 3.1};
  const QuadratureGrid g = make_grid(c, {12, 25, 25}, split);
  for (double s : split) EXPECT_NE(std::find(g.z_edges.begin(), g.z_edges.end(), s), g.z_edges.end());
  EXPECT_EQ(g.z_rule.size(), 12 * (g.z_edges.size() - 1));
}

TEST(Integration, BilinearMatchesIndependentQuadrature) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 3, 3, true);
  const std::vector<double> split{0.5};
  const QuadratureGrid g = make_grid(c, {12, 3, 3}, split);
  const BasisField& f1 = b->fields[5];
  const BasisField& f2 = b->fields.back();
  auto form = [](const StressState& x, const StressState& y) { return x.vec().dot(y.vec()); };
  const double got = integrate_bilinear(
      g, [&](double r, double z) { return f1.stress(r, z); }, [&](double r, double z) { return f2.stress(r, z); },
      form);
  const double want = oracle::area(
      c, [&](double r, double z) { return form(f1.stress(r, z), f2.stress(r, z)); }, 0.0, c.H, {0.5});
  EXPECT_NEAR(got, want, 1e-10 * (1 + std::abs(want)));
}

TEST(Integration, TablesMatchFieldFactors) {
  const PipeConfig c = oracle::welded_config();
  const auto b = small_basis(c, 3, 2, true);
  const std::vector<double> split{0.5};
  const QuadratureGrid g = make_grid(c, {6, 3, 2}, split);
  const BasisTables t = tabulate(*b, g);
  for (std::size_t i = 0; i < b->size(); ++i)
    for (int k = 0; k < 4; ++k) {
      for (std::size_t q = 0; q < g.r_rule.size(); ++q)
        EXPECT_EQ(t.radial[k](i, q), b->fields[i].radial_factor(k, g.r_rule.nodes[q]));
      for (std::size_t q = 0; q < g.z_rule.size(); ++q)
        EXPECT_EQ(t.axial[k](i, q), b->fields[i].axial_factor(k, g.z_rule.nodes[q]));
    }
}
