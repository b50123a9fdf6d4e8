// Compiled with -mavx512f -mfma. Tails use masked loads instead of a
// scalar loop.
#include "weldcreep/kernels.hpp"

#include "rank_update.hpp"

#include <immintrin.h>

namespace weldcreep::kernels {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr double inv_sqrt6 = 0.40824829046386301637;
constexpr double sqrt2 = 1.41421356237309504880;

inline __mmask8 tail_mask(std::size_t left) {
  return left >= 8 ? __mmask8(0xFF) : static_cast<__mmask8>((1u << left) - 1u);
}

void separable_product(std::size_t n, const double* rad, const double* ax, double* out) {
  for (std::size_t i = 0; i < n; i += 8) {
    const __mmask8 m = tail_mask(n - i);
    const __m512d v = _mm512_mul_pd(_mm512_maskz_loadu_pd(m, rad + i), _mm512_maskz_loadu_pd(m, ax + i));
    _mm512_mask_storeu_pd(out + i, m, v);
  }
}

void contract(std::size_t n, const double* c, const double* const* s, double* out) {
  __m512d a0 = _mm512_setzero_pd(), a1 = a0, a2 = a0, a3 = a0;
  for (std::size_t i = 0; i < n; i += 8) {
    const __mmask8 m = tail_mask(n - i);
    const __m512d ci = _mm512_maskz_loadu_pd(m, c + i);
    a0 = _mm512_fmadd_pd(ci, _mm512_maskz_loadu_pd(m, s[0] + i), a0);
    a1 = _mm512_fmadd_pd(ci, _mm512_maskz_loadu_pd(m, s[1] + i), a1);
    a2 = _mm512_fmadd_pd(ci, _mm512_maskz_loadu_pd(m, s[2] + i), a2);
    a3 = _mm512_fmadd_pd(ci, _mm512_maskz_loadu_pd(m, s[3] + i), a3);
  }
  out[0] = _mm512_reduce_add_pd(a0);
  out[1] = _mm512_reduce_add_pd(a1);
  out[2] = _mm512_reduce_add_pd(a2);
  out[3] = _mm512_reduce_add_pd(a3);
}

void tangent_rows(std::size_t n, const double* const* s, const TangentFrame& f, double* const* rows) {
  const __m512d h2 = _mm512_set1_pd(inv_sqrt2), h6 = _mm512_set1_pd(inv_sqrt6), q2 = _mm512_set1_pd(sqrt2);
  const __m512d two = _mm512_set1_pd(2.0);
  const __m512d y0 = _mm512_set1_pd(f.yhat[0]), y1 = _mm512_set1_pd(f.yhat[1]), y2 = _mm512_set1_pd(f.yhat[2]);
  const __m512d dl = _mm512_set1_pd(f.delta), sc = _mm512_set1_pd(f.scale);
  for (std::size_t i = 0; i < n; i += 8) {
    const __mmask8 m = tail_mask(n - i);
    const __m512d sr = _mm512_maskz_loadu_pd(m, s[0] + i);
    const __m512d st = _mm512_maskz_loadu_pd(m, s[1] + i);
    const __m512d sz = _mm512_maskz_loadu_pd(m, s[2] + i);
    const __m512d t0 = _mm512_mul_pd(_mm512_sub_pd(sr, st), h2);
    const __m512d t1 = _mm512_mul_pd(_mm512_fnmadd_pd(two, sz, _mm512_add_pd(sr, st)), h6);
    const __m512d t2 = _mm512_mul_pd(_mm512_maskz_loadu_pd(m, s[3] + i), q2);
    __m512d p = _mm512_mul_pd(y0, t0);
    p = _mm512_fmadd_pd(y1, t1, p);
    p = _mm512_fmadd_pd(y2, t2, p);
    p = _mm512_mul_pd(dl, p);
    _mm512_mask_storeu_pd(rows[0] + i, m, _mm512_mul_pd(sc, _mm512_fmadd_pd(p, y0, t0)));
    _mm512_mask_storeu_pd(rows[1] + i, m, _mm512_mul_pd(sc, _mm512_fmadd_pd(p, y1, t1)));
    _mm512_mask_storeu_pd(rows[2] + i, m, _mm512_mul_pd(sc, _mm512_fmadd_pd(p, y2, t2)));
  }
}

void accumulate_work(std::size_t n, const double* e, const double* const* s, double* g) {
  const __m512d e0 = _mm512_set1_pd(e[0]), e1 = _mm512_set1_pd(e[1]);
  const __m512d e2 = _mm512_set1_pd(e[2]), e3 = _mm512_set1_pd(e[3]);
  for (std::size_t i = 0; i < n; i += 8) {
    const __mmask8 m = tail_mask(n - i);
    __m512d v = _mm512_mul_pd(e0, _mm512_maskz_loadu_pd(m, s[0] + i));
    v = _mm512_fmadd_pd(e1, _mm512_maskz_loadu_pd(m, s[1] + i), v);
    v = _mm512_fmadd_pd(e2, _mm512_maskz_loadu_pd(m, s[2] + i), v);
    v = _mm512_fmadd_pd(e3, _mm512_maskz_loadu_pd(m, s[3] + i), v);
    _mm512_mask_storeu_pd(g + i, m, _mm512_add_pd(_mm512_maskz_loadu_pd(m, g + i), v));
  }
}

// 16 x 8 tile in sixteen zmm accumulators.
struct Micro {
  static constexpr std::size_t mr = 16;
  static constexpr std::size_t nr = 8;

  static void run(std::size_t kc, const double* a, const double* b, double* tile) {
    __m512d c[16];
    for (auto& v : c) v = _mm512_setzero_pd();
    for (std::size_t kk = 0; kk < kc; ++kk) {
      const __m512d a0 = _mm512_loadu_pd(a + kk * 16);
      const __m512d a1 = _mm512_loadu_pd(a + kk * 16 + 8);
      const double* bk = b + kk * 8;
#pragma GCC unroll 8
      for (int j = 0; j < 8; ++j) {
        const __m512d bj = _mm512_set1_pd(bk[j]);
        c[2 * j] = _mm512_fmadd_pd(a0, bj, c[2 * j]);
        c[2 * j + 1] = _mm512_fmadd_pd(a1, bj, c[2 * j + 1]);
      }
    }
    for (int j = 0; j < 8; ++j) {
      _mm512_store_pd(tile + j * 16, c[2 * j]);
      _mm512_store_pd(tile + j * 16 + 8, c[2 * j + 1]);
    }
  }

  static void add_tile(const double* tile, double* h, std::size_t ld) {
    for (std::size_t j = 0; j < 8; ++j) {
      double* col = h + j * ld;
      _mm512_storeu_pd(col, _mm512_add_pd(_mm512_loadu_pd(col), _mm512_load_pd(tile + j * 16)));
      _mm512_storeu_pd(col + 8, _mm512_add_pd(_mm512_loadu_pd(col + 8), _mm512_load_pd(tile + j * 16 + 8)));
    }
  }
};

void rank_update(std::size_t n, std::size_t k, const double* b, double* h) {
  detail::blocked_rank_update<Micro>(n, k, b, h);
}

}  // namespace

const KernelTable detail::avx512_table{Isa::avx512,  separable_product, contract,
                                       tangent_rows, accumulate_work,   rank_update};

}  // namespace weldcreep::kernels
