#include "ontic/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace ontic {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

QuadResult integrate_panels(const std::function<double(double)>& f, std::span<const double> edges,
                            double relative_tolerance, unsigned max_depth) {
  using boost::math::quadrature::gauss_kronrod;
  CompensatedSum value;
  CompensatedSum error;
  QuadResult r;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] == edges[i]) continue;
    double err = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate(f, edges[i], edges[i + 1], max_depth,
                                                          relative_tolerance, &err);
    value.add(v);
    error.add(err);
    ++r.panels;
  }
  r.value = value.value();
  r.error = error.value();
  return r;
}

ComplexQuadResult integrate_panels(const std::function<Complex(double)>& f,
                                   std::span<const double> edges, double relative_tolerance,
                                   unsigned max_depth) {
  const std::function<double(double)> fr = [&](double x) { return f(x).real(); };
  const std::function<double(double)> fi = [&](double x) { return f(x).imag(); };
  const auto re = integrate_panels(fr, edges, relative_tolerance, max_depth);
  const auto im = integrate_panels(fi, edges, relative_tolerance, max_depth);
  return {Complex(re.value, im.value), std::hypot(re.error, im.error), re.panels};
}

std::vector<double> uniform_panels(double a, double b, double max_width) {
  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
  std::vector<double> edges(count + 1);
  for (std::size_t i = 0; i <= count; ++i) edges[i] = a + (b - a) * static_cast<double>(i) / count;
  edges.back() = b;
  return edges;
}

}  // namespace ontic
