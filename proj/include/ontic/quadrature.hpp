#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ontic/common.hpp"

namespace ontic {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // accumulated Gauss-Kronrod estimate
  std::size_t panels = 0;
};

struct ComplexQuadResult {
  Complex value;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Compensated (Neumaier) running sum; order of additions fixes the result.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Adaptive Gauss-Kronrod (G15/K31) on each panel [edges[i], edges[i+1]], bisecting
/// at most max_depth times; panel values and errors are summed in index order.
QuadResult integrate_panels(const std::function<double(double)>& f, std::span<const double> edges,
                            double relative_tolerance = 1e-13, unsigned max_depth = 4);

ComplexQuadResult integrate_panels(const std::function<Complex(double)>& f,
                                   std::span<const double> edges, double relative_tolerance = 1e-13,
                                   unsigned max_depth = 4);

/// Edges of [a, b] split into panels no wider than max_width.
std::vector<double> uniform_panels(double a, double b, double max_width);

}  // namespace ontic
