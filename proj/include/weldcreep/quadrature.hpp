#pragma once

#include <span>
#include <vector>

namespace weldcreep {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) acc += weights[q] * f(nodes[q]);
    return acc;
  }
};

// Gauss-Legendre rule with `order` points on [a, b]; exact for polynomials
// of degree 2*order - 1.
QuadratureRule gauss_legendre_rule(int order, double a, double b);

// Gauss-Legendre on every cell of the partition defined by `edges`.
QuadratureRule composite_rule(int order, std::span<const double> edges);

// Partition of [a, b] into equal cells no longer than `max_cell`, with
// every breakpoint in `splits` (inside (a, b)) kept as a cell edge.
std::vector<double> partition(double a, double b, double max_cell, std::span<const double> splits = {});

}  // namespace weldcreep
