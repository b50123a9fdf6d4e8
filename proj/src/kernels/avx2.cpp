// Compiled with -mavx2 -mfma; only reached after a cpuid check.
#include "weldcreep/kernels.hpp"

#include "rank_update.hpp"

#include <immintrin.h>

namespace weldcreep::kernels {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr double inv_sqrt6 = 0.40824829046386301637;
constexpr double sqrt2 = 1.41421356237309504880;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void separable_product(std::size_t n, const double* rad, const double* ax, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(rad + i), _mm256_loadu_pd(ax + i)));
  }
  for (; i < n; ++i) out[i] = rad[i] * ax[i];
}

void contract(std::size_t n, const double* c, const double* const* s, double* out) {
  __m256d a0 = _mm256_setzero_pd(), a1 = a0, a2 = a0, a3 = a0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ci = _mm256_loadu_pd(c + i);
    a0 = _mm256_fmadd_pd(ci, _mm256_loadu_pd(s[0] + i), a0);
    a1 = _mm256_fmadd_pd(ci, _mm256_loadu_pd(s[1] + i), a1);
    a2 = _mm256_fmadd_pd(ci, _mm256_loadu_pd(s[2] + i), a2);
    a3 = _mm256_fmadd_pd(ci, _mm256_loadu_pd(s[3] + i), a3);
  }
  double r0 = hsum(a0), r1 = hsum(a1), r2 = hsum(a2), r3 = hsum(a3);
  for (; i < n; ++i) {
    r0 += c[i] * s[0][i];
    r1 += c[i] * s[1][i];
    r2 += c[i] * s[2][i];
    r3 += c[i] * s[3][i];
  }
  out[0] = r0;
  out[1] = r1;
  out[2] = r2;
  out[3] = r3;
}

void tangent_rows(std::size_t n, const double* const* s, const TangentFrame& f, double* const* rows) {
  const __m256d h2 = _mm256_set1_pd(inv_sqrt2), h6 = _mm256_set1_pd(inv_sqrt6), q2 = _mm256_set1_pd(sqrt2);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d y0 = _mm256_set1_pd(f.yhat[0]), y1 = _mm256_set1_pd(f.yhat[1]), y2 = _mm256_set1_pd(f.yhat[2]);
  const __m256d dl = _mm256_set1_pd(f.delta), sc = _mm256_set1_pd(f.scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d sr = _mm256_loadu_pd(s[0] + i);
    const __m256d st = _mm256_loadu_pd(s[1] + i);
    const __m256d sz = _mm256_loadu_pd(s[2] + i);
    const __m256d t0 = _mm256_mul_pd(_mm256_sub_pd(sr, st), h2);
    const __m256d t1 = _mm256_mul_pd(_mm256_fnmadd_pd(two, sz, _mm256_add_pd(sr, st)), h6);
    const __m256d t2 = _mm256_mul_pd(_mm256_loadu_pd(s[3] + i), q2);
    __m256d p = _mm256_mul_pd(y0, t0);
    p = _mm256_fmadd_pd(y1, t1, p);
    p = _mm256_fmadd_pd(y2, t2, p);
    p = _mm256_mul_pd(dl, p);
    _mm256_storeu_pd(rows[0] + i, _mm256_mul_pd(sc, _mm256_fmadd_pd(p, y0, t0)));
    _mm256_storeu_pd(rows[1] + i, _mm256_mul_pd(sc, _mm256_fmadd_pd(p, y1, t1)));
    _mm256_storeu_pd(rows[2] + i, _mm256_mul_pd(sc, _mm256_fmadd_pd(p, y2, t2)));
  }
  if (i < n) {
    const double* tail[4] = {s[0] + i, s[1] + i, s[2] + i, s[3] + i};
    double* out[3] = {rows[0] + i, rows[1] + i, rows[2] + i};
    detail::scalar_table.tangent_rows(n - i, tail, f, out);
  }
}

void accumulate_work(std::size_t n, const double* e, const double* const* s, double* g) {
  const __m256d e0 = _mm256_set1_pd(e[0]), e1 = _mm256_set1_pd(e[1]);
  const __m256d e2 = _mm256_set1_pd(e[2]), e3 = _mm256_set1_pd(e[3]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(e0, _mm256_loadu_pd(s[0] + i));
    v = _mm256_fmadd_pd(e1, _mm256_loadu_pd(s[1] + i), v);
    v = _mm256_fmadd_pd(e2, _mm256_loadu_pd(s[2] + i), v);
    v = _mm256_fmadd_pd(e3, _mm256_loadu_pd(s[3] + i), v);
    _mm256_storeu_pd(g + i, _mm256_add_pd(_mm256_loadu_pd(g + i), v));
  }
  for (; i < n; ++i) g[i] += e[0] * s[0][i] + e[1] * s[1][i] + e[2] * s[2][i] + e[3] * s[3][i];
}

// 8 x 4 tile in eight ymm accumulators.
struct Micro {
  static constexpr std::size_t mr = 8;
  static constexpr std::size_t nr = 4;

  static void run(std::size_t kc, const double* a, const double* b, double* tile) {
    __m256d c[8];
    for (auto& v : c) v = _mm256_setzero_pd();
    for (std::size_t kk = 0; kk < kc; ++kk) {
      const __m256d a0 = _mm256_loadu_pd(a + kk * 8);
      const __m256d a1 = _mm256_loadu_pd(a + kk * 8 + 4);
      const double* bk = b + kk * 4;
#pragma GCC unroll 4
      for (int j = 0; j < 4; ++j) {
        const __m256d bj = _mm256_broadcast_sd(bk + j);
        c[2 * j] = _mm256_fmadd_pd(a0, bj, c[2 * j]);
        c[2 * j + 1] = _mm256_fmadd_pd(a1, bj, c[2 * j + 1]);
      }
    }
    for (int j = 0; j < 4; ++j) {
      _mm256_store_pd(tile + j * 8, c[2 * j]);
      _mm256_store_pd(tile + j * 8 + 4, c[2 * j + 1]);
    }
  }

  static void add_tile(const double* tile, double* h, std::size_t ld) {
    for (std::size_t j = 0; j < 4; ++j) {
      double* col = h + j * ld;
      _mm256_storeu_pd(col, _mm256_add_pd(_mm256_loadu_pd(col), _mm256_load_pd(tile + j * 8)));
      _mm256_storeu_pd(col + 4, _mm256_add_pd(_mm256_loadu_pd(col + 4), _mm256_load_pd(tile + j * 8 + 4)));
    }
  }
};

void rank_update(std::size_t n, std::size_t k, const double* b, double* h) {
  detail::blocked_rank_update<Micro>(n, k, b, h);
}

}  // namespace

const KernelTable detail::avx2_table{Isa::avx2,     separable_product, contract,
                                     tangent_rows,  accumulate_work,   rank_update};

}  // namespace weldcreep::kernels
