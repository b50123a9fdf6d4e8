#pragma once

// Blocked lower-triangle update h += b b^T shared by the vector variants.
// Columns of b are packed in chunks of KC into row panels; `Micro` computes
// one MR x NR tile over a chunk. Each ISA translation unit instantiates this
// with its own micro-kernel type.
//
// Only internal-linkage code and no standard-library templates here: an
// inline template instantiated under -mavx512f could otherwise be the copy
// the linker keeps for every caller.

#include <cstddef>
#include <cstring>

namespace weldcreep::kernels::detail {
namespace {

constexpr std::size_t min_size(std::size_t a, std::size_t b) { return a < b ? a : b; }

struct Buffer {
  explicit Buffer(std::size_t n) : data(new double[n]) {}
  ~Buffer() { delete[] data; }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  double* data;
};

// dst holds ceil(n/mr) panels of kc x mr values, zero padded past row n.
void pack_panels(std::size_t n, std::size_t kc, const double* b, std::size_t mr, double* dst) {
  const std::size_t panels = (n + mr - 1) / mr;
  for (std::size_t p = 0; p < panels; ++p) {
    const std::size_t i0 = p * mr;
    const std::size_t rows = min_size(mr, n - i0);
    for (std::size_t kk = 0; kk < kc; ++kk) {
      double* d = dst + (p * kc + kk) * mr;
      std::memcpy(d, b + kk * n + i0, rows * sizeof(double));
      for (std::size_t i = rows; i < mr; ++i) d[i] = 0.0;
    }
  }
}

template <class Micro>
void blocked_rank_update(std::size_t n, std::size_t k, const double* b, double* h) {
  constexpr std::size_t MR = Micro::mr;
  constexpr std::size_t NR = Micro::nr;
  constexpr std::size_t KC = 128;
  static_assert(MR % NR == 0, "row panel must be a multiple of the column panel");
  if (n == 0 || k == 0) return;

  const std::size_t a_panels = (n + MR - 1) / MR;
  const std::size_t b_panels = (n + NR - 1) / NR;
  Buffer pa(a_panels * KC * MR), pb(b_panels * KC * NR);
  alignas(64) double tile[MR * NR];

  for (std::size_t k0 = 0; k0 < k; k0 += KC) {
    const std::size_t kc = min_size(KC, k - k0);
    pack_panels(n, kc, b + k0 * n, MR, pa.data);
    pack_panels(n, kc, b + k0 * n, NR, pb.data);

    for (std::size_t jp = 0; jp < b_panels; ++jp) {
      const std::size_t jb = jp * NR;
      for (std::size_t ib = jb / MR * MR; ib < n; ib += MR) {
        Micro::run(kc, pa.data + (ib / MR) * kc * MR, pb.data + jp * kc * NR, tile);
        const bool interior = ib >= jb + NR && ib + MR <= n && jb + NR <= n;
        if (interior) {
          Micro::add_tile(tile, h + jb * n + ib, n);
          continue;
        }
        for (std::size_t j = 0; j < NR && jb + j < n; ++j) {
          for (std::size_t i = 0; i < MR && ib + i < n; ++i) {
            if (ib + i >= jb + j) h[(jb + j) * n + ib + i] += tile[j * MR + i];
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace weldcreep::kernels::detail
