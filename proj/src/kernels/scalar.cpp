#include "weldcreep/kernels.hpp"

#include <cmath>

namespace weldcreep::kernels {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr double inv_sqrt6 = 0.40824829046386301637;
constexpr double sqrt2 = 1.41421356237309504880;

void separable_product(std::size_t n, const double* rad, const double* ax, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = rad[i] * ax[i];
}

void contract(std::size_t n, const double* c, const double* const* s, double* out) {
  for (int k = 0; k < 4; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += c[i] * s[k][i];
    out[k] = acc;
  }
}

void tangent_rows(std::size_t n, const double* const* s, const TangentFrame& f, double* const* rows) {
  const double y0 = f.yhat[0], y1 = f.yhat[1], y2 = f.yhat[2];
  for (std::size_t i = 0; i < n; ++i) {
    const double t0 = (s[0][i] - s[1][i]) * inv_sqrt2;
    const double t1 = (s[0][i] + s[1][i] - 2.0 * s[2][i]) * inv_sqrt6;
    const double t2 = s[3][i] * sqrt2;
    const double p = f.delta * (y0 * t0 + y1 * t1 + y2 * t2);
    rows[0][i] = f.scale * (t0 + p * y0);
    rows[1][i] = f.scale * (t1 + p * y1);
    rows[2][i] = f.scale * (t2 + p * y2);
  }
}

void accumulate_work(std::size_t n, const double* e, const double* const* s, double* g) {
  for (std::size_t i = 0; i < n; ++i) g[i] += e[0] * s[0][i] + e[1] * s[1][i] + e[2] * s[2][i] + e[3] * s[3][i];
}

void rank_update(std::size_t n, std::size_t k, const double* b, double* h) {
  for (std::size_t kk = 0; kk < k; ++kk) {
    const double* col = b + kk * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double bj = col[j];
      if (bj == 0.0) continue;
      double* hj = h + j * n;
      for (std::size_t i = j; i < n; ++i) hj[i] += col[i] * bj;
    }
  }
}

}  // namespace

const KernelTable detail::scalar_table{Isa::scalar,     separable_product, contract,
                                       tangent_rows,    accumulate_work,   rank_update};

}  // namespace weldcreep::kernels
