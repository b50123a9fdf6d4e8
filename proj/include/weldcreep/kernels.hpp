#pragma once

// Kernels of the nonlinear assembly. The pointwise ones work on the basis
// index at one quadrature point, where the stress of basis field i is
// s_k[i] = radial_k[i] * axial_k[i]. The scalar table is the reference;
// vector variants must agree with it to rounding.

#include <cstddef>
#include <optional>
#include <string_view>

namespace weldcreep::kernels {

enum class Isa { scalar, avx2, avx512 };

std::string_view isa_name(Isa isa);

// Norton tangent at a point factored as T = L L^T with
//   L^T s = scale * (I + delta * yhat yhat^T) * G^T s
// G^T s = ((s_r - s_theta)/sqrt2, (s_r + s_theta - 2 s_z)/sqrt6, sqrt2 s_rz).
struct TangentFrame {
  double scale = 0.0;
  double delta = 0.0;
  double yhat[3] = {0.0, 0.0, 0.0};
};

struct KernelTable {
  Isa isa;
  // out[i] = rad[i] * ax[i]
  void (*separable_product)(std::size_t n, const double* rad, const double* ax, double* out);
  // out[k] = sum_i c[i] * s[k][i], k = 0..3
  void (*contract)(std::size_t n, const double* c, const double* const* s, double* out);
  // rows[m][i] = (L^T s(i))_m, m = 0..2
  void (*tangent_rows)(std::size_t n, const double* const* s, const TangentFrame& f, double* const* rows);
  // g[i] += sum_k e[k] * s[k][i]
  void (*accumulate_work)(std::size_t n, const double* e, const double* const* s, double* g);
  // Lower triangle of h (n x n) += b b^T with b n x k; both column-major.
  // The strict upper triangle of h is left untouched.
  void (*rank_update)(std::size_t n, std::size_t k, const double* b, double* h);
};

bool supported(Isa isa);
// Throws std::invalid_argument when the variant is not compiled in or the
// CPU lacks it.
const KernelTable& table(Isa isa);
// Best supported variant unless force() has pinned one.
const KernelTable& active();
// Pin a variant (tests); std::nullopt restores automatic selection.
void force(std::optional<Isa> isa);

namespace detail {
extern const KernelTable scalar_table;
#ifdef WELDCREEP_BUILD_AVX2
extern const KernelTable avx2_table;
#endif
#ifdef WELDCREEP_BUILD_AVX512
extern const KernelTable avx512_table;
#endif
}  // namespace detail

}  // namespace weldcreep::kernels
