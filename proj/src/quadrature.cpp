#include "weldcreep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weldcreep {

QuadratureRule gauss_legendre_rule(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre_rule: order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  if (order == 1) {
    rule.nodes[0] = mid;
    rule.weights[0] = b - a;
    return rule;
  }
  const int n = order;
  // Newton on P_n from the Chebyshev-like initial guess; symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  return rule;
}

QuadratureRule composite_rule(int order, std::span<const double> edges) {
  QuadratureRule out;
  for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
    const QuadratureRule cell = gauss_legendre_rule(order, edges[c], edges[c + 1]);
    out.nodes.insert(out.nodes.end(), cell.nodes.begin(), cell.nodes.end());
    out.weights.insert(out.weights.end(), cell.weights.begin(), cell.weights.end());
  }
  return out;
}

std::vector<double> partition(double a, double b, double max_cell, std::span<const double> splits) {
  if (!(b > a) || !(max_cell > 0.0)) throw std::invalid_argument("partition: empty interval or cell size");
  std::vector<double> breaks{a};
  for (double s : splits) {
    if (s > a && s < b) breaks.push_back(s);
  }
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());

  std::vector<double> edges{a};
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_cell - 1e-12)));
    for (int c = 1; c < cells; ++c) edges.push_back(lo + (hi - lo) * c / cells);
    edges.push_back(hi);
  }
  return edges;
}

}  // namespace weldcreep
