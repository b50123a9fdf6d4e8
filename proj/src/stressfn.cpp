#include "weldcreep/stressfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weldcreep {

namespace {
constexpr double pi = std::numbers::pi;
}

StressState stress_from_potentials(const PotentialDerivatives& d, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("stress_from_potentials: r must be positive");
  return {d.phi, d.d_rphi_dr + d.psi_zz, -d.psi_r / r, d.psi_z / r};
}

StressState stress_from_potentials(const PotentialPair& pair, double r, double z) {
  return stress_from_potentials(pair.derivatives(r, z), r);
}

std::array<double, 2> equilibrium_residual(const StressState& s, const StressGradient& g, double r) {
  // d(sigma_r)/dr + d(sigma_rz)/dz + (sigma_r - sigma_theta)/r
  // d(sigma_rz)/dr + d(sigma_z)/dz + sigma_rz/r
  return {g.d_dr.sigma_r + g.d_dz.sigma_rz + (s.sigma_r - s.sigma_theta) / r,
          g.d_dr.sigma_rz + g.d_dz.sigma_z + s.sigma_rz / r};
}

std::string family_name(Family f) {
  switch (f) {
    case Family::phi_cosine: return "phi_cosine";
    case Family::phi_half_cosine: return "phi_half_cosine";
    case Family::phi_half_sine: return "phi_half_sine";
    case Family::psi_cosine: return "psi_cosine";
    case Family::phi_step: return "phi_step";
    case Family::psi_ramp: return "psi_ramp";
  }
  return "?";
}

double AxialProfile::eval(double z, int d, Side side) const {
  if (d < 0 || d > 3) throw std::invalid_argument("AxialProfile: derivative order must be 0..3");
  switch (kind_) {
    case Kind::cosine:
    case Kind::half_cosine:
    case Kind::half_sine: {
      const double k = kind_ == Kind::cosine ? k_ * pi / length_ : pi / (2.0 * length_);
      const double phase = kind_ == Kind::half_sine ? -0.5 * pi : 0.0;
      // d-th derivative of cos(kz + phase) is k^d cos(kz + phase + d pi/2).
      return std::pow(k, d) * std::cos(k * z + phase + d * 0.5 * pi);
    }
    case Kind::step: {
      if (d > 0) return 0.0;
      const bool up = z > h_ || (z == h_ && side == Side::above);
      return up ? 1.0 : 0.0;
    }
    case Kind::ramp: {
      const bool lower = z < h_ || (z == h_ && side == Side::below);
      if (lower) {
        switch (d) {
          case 0: return z * z / (2.0 * h_);
          case 1: return z / h_;
          case 2: return 1.0 / h_;
          default: return 0.0;
        }
      }
      const double t = length_ - h_;
      switch (d) {
        case 0: return -z * z / (2.0 * t) + z * length_ / t - h_ * length_ / (2.0 * t);
        case 1: return (length_ - z) / t;
        case 2: return -1.0 / t;
        default: return 0.0;
      }
    }
  }
  return 0.0;
}

BasisField::BasisField(Family family, int radial_mode, AxialProfile axial, double r_i, double wall)
    : family_(family),
      potential_(family == Family::psi_cosine || family == Family::psi_ramp ? Potential::psi : Potential::phi),
      mode_(radial_mode),
      axial_(axial),
      r_i_(r_i),
      wall_(wall) {
  if (radial_mode < 1) throw std::invalid_argument("BasisField: radial mode must be >= 1");
}

std::array<double, 3> BasisField::radial(double r) const {
  const double k = mode_ * pi / wall_;
  const double x = k * (r - r_i_);
  const double s = std::sin(x);
  return {s, k * std::cos(x), -k * k * s};
}

double BasisField::radial_factor(int k, double r) const {
  const auto [S, dS, d2S] = radial(r);
  (void)d2S;
  if (potential_ == Potential::phi) {
    switch (k) {
      case 0: return S;
      case 1: return S + r * dS;
      default: return 0.0;
    }
  }
  switch (k) {
    case 1: return S;
    case 2: return -dS / r;
    case 3: return S / r;
    default: return 0.0;
  }
}

double BasisField::radial_factor_dr(int k, double r) const {
  const auto [S, dS, d2S] = radial(r);
  if (potential_ == Potential::phi) {
    switch (k) {
      case 0: return dS;
      case 1: return 2.0 * dS + r * d2S;
      default: return 0.0;
    }
  }
  switch (k) {
    case 1: return dS;
    case 2: return -d2S / r + dS / (r * r);
    case 3: return dS / r - S / (r * r);
    default: return 0.0;
  }
}

namespace {
// Axial derivative order carried by each stress component.
int axial_order(Potential p, int k) {
  if (p == Potential::phi) return 0;
  switch (k) {
    case 1: return 2;
    case 3: return 1;
    default: return 0;
  }
}
}  // namespace

double BasisField::axial_factor(int k, double z, Side side) const {
  return axial_.eval(z, axial_order(potential_, k), side);
}

double BasisField::axial_factor_dz(int k, double z, Side side) const {
  return axial_.eval(z, axial_order(potential_, k) + 1, side);
}

PotentialDerivatives BasisField::potentials(double r, double z, Side side) const {
  const auto [S, dS, d2S] = radial(r);
  (void)d2S;
  PotentialDerivatives d;
  if (potential_ == Potential::phi) {
    const double Z = axial_.eval(z, 0, side);
    d.phi = S * Z;
    d.d_rphi_dr = (S + r * dS) * Z;
  } else {
    d.psi_zz = S * axial_.eval(z, 2, side);
    d.psi_r = dS * axial_.eval(z, 0, side);
    d.psi_z = S * axial_.eval(z, 1, side);
  }
  return d;
}

StressState BasisField::stress(double r, double z, Side side) const {
  return stress_from_potentials(potentials(r, z, side), r);
}

StressGradient BasisField::stress_gradient(double r, double z, Side side) const {
  Vec4 dr, dz;
  for (int k = 0; k < 4; ++k) {
    dr[k] = radial_factor_dr(k, r) * axial_factor(k, z, side);
    dz[k] = radial_factor(k, r) * axial_factor_dz(k, z, side);
  }
  return {StressState::from(dr), StressState::from(dz)};
}

bool Basis::same_space(const Basis& other) const {
  if (this == &other) return true;
  if (fields.size() != other.fields.size() || r_i != other.r_i || r_o != other.r_o || H != other.H) return false;
  if (spec.interfaces != other.spec.interfaces) return false;
  for (std::size_t a = 0; a < fields.size(); ++a) {
    const auto& f = fields[a];
    const auto& g = other.fields[a];
    if (f.family() != g.family() || f.radial_mode() != g.radial_mode() ||
        f.axial().wavenumber() != g.axial().wavenumber() || f.axial().break_point() != g.axial().break_point()) {
      return false;
    }
  }
  return true;
}

std::shared_ptr<const Basis> enumerate_basis(const PipeConfig& config, const BasisSpec& spec) {
  if (spec.n_radial < 1) throw std::invalid_argument("enumerate_basis: N_r must be >= 1");
  if (spec.n_axial < 0) throw std::invalid_argument("enumerate_basis: N_z must be >= 0");
  const double H = config.H;
  if (spec.discontinuous) {
    for (double h : spec.interfaces) {
      if (!(h > 0.0 && h < H)) {
        throw std::invalid_argument("enumerate_basis: interface " + std::to_string(h) + " outside (0, H)");
      }
    }
  }

  auto basis = std::make_shared<Basis>();
  basis->spec = spec;
  basis->r_i = config.r_i;
  basis->r_o = config.r_o;
  basis->H = H;
  const double wall = config.wall();
  auto& out = basis->fields;

  for (int i = 1; i <= spec.n_radial; ++i)
    for (int j = 0; j <= spec.n_axial; ++j)
      out.emplace_back(Family::phi_cosine, i, AxialProfile::cosine(j, H), config.r_i, wall);
  for (int i = 1; i <= spec.n_radial; ++i)
    out.emplace_back(Family::phi_half_cosine, i, AxialProfile::half_cosine(H), config.r_i, wall);
  for (int i = 1; i <= spec.n_radial; ++i)
    out.emplace_back(Family::phi_half_sine, i, AxialProfile::half_sine(H), config.r_i, wall);
  for (int i = 1; i <= spec.n_radial; ++i)
    for (int k = 0; k <= spec.n_axial; ++k)
      out.emplace_back(Family::psi_cosine, i, AxialProfile::cosine(k, H), config.r_i, wall);

  if (spec.discontinuous) {
    for (double h : spec.interfaces) {
      for (int i = 1; i <= spec.n_radial; ++i)
        out.emplace_back(Family::phi_step, i, AxialProfile::step(h, H), config.r_i, wall);
      for (int i = 1; i <= spec.n_radial; ++i)
        out.emplace_back(Family::psi_ramp, i, AxialProfile::ramp(h, H), config.r_i, wall);
    }
  }
  return basis;
}

QuadratureGrid make_grid(const PipeConfig& config, const GridResolution& res, std::span<const double> interfaces) {
  const double wall = config.wall();
  // At most 5/k per cell for the highest wavenumber k in each direction;
  // with 12 points that resolves the products of two top modes to ~1e-12.
  const double k_r = std::max(res.n_radial, 1) * std::numbers::pi / wall;
  const double k_z = std::max(res.n_axial, 1) * std::numbers::pi / config.H;
  const int r_cells = std::max(1, static_cast<int>(std::ceil(wall / (5.0 / k_r) - 1e-12)));

  QuadratureGrid g;
  g.order = res.order;
  g.r_edges = partition(config.r_i, config.r_o, wall / r_cells);
  g.z_edges = partition(0.0, config.H, std::min(0.5 * wall, 5.0 / k_z), interfaces);
  g.r_rule = composite_rule(res.order, g.r_edges);
  g.z_rule = composite_rule(res.order, g.z_edges);
  return g;
}

double integrate(const QuadratureGrid& grid, const std::function<double(double, double)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.r_rule.size(); ++i) {
    const double r = grid.r_rule.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < grid.z_rule.size(); ++j) row += grid.z_rule.weights[j] * f(r, grid.z_rule.nodes[j]);
    acc += grid.r_rule.weights[i] * r * row;
  }
  return acc;
}

double integrate_bilinear(const QuadratureGrid& grid, const StressField& a, const StressField& b,
                          const BilinearForm& form) {
  return integrate(grid, [&](double r, double z) { return form(a(r, z), b(r, z)); });
}

BasisTables tabulate(const Basis& basis, const QuadratureGrid& grid) {
  const auto N = static_cast<Eigen::Index>(basis.size());
  const auto Qr = static_cast<Eigen::Index>(grid.r_rule.size());
  const auto Qz = static_cast<Eigen::Index>(grid.z_rule.size());
  BasisTables t;
  for (int k = 0; k < 4; ++k) {
    t.radial[k].setZero(N, Qr);
    t.axial[k].setZero(N, Qz);
  }
  for (Eigen::Index a = 0; a < N; ++a) {
    const BasisField& f = basis.fields[static_cast<std::size_t>(a)];
    for (int k = 0; k < 4; ++k) {
      for (Eigen::Index q = 0; q < Qr; ++q) t.radial[k](a, q) = f.radial_factor(k, grid.r_rule.nodes[q]);
      for (Eigen::Index q = 0; q < Qz; ++q) t.axial[k](a, q) = f.axial_factor(k, grid.z_rule.nodes[q]);
    }
  }
  return t;
}

}  // namespace weldcreep
