#include "ontic/kernel_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include "ontic/field_io.hpp"

namespace ontic {

namespace {

constexpr double kTaperStart = 0.9;
constexpr double kSensitivityFraction = 0.75;
constexpr double kQuadTolerance = 1e-13;

const Complex kI{0.0, 1.0};

// Upper panel edge of the Gaussian-decaying contour integrands in u.
constexpr double kContourUMax = 9.0;

double radial_prefactor(double z) { return 1.0 / (2.0 * kPi * kPi * z); }

// Panels no wider than a quarter period of sin(kz) on [0, cutoff].
std::vector<double> oscillatory_panels(double cutoff, double frequency) {
  const double width = std::min(0.5 * kPi / std::max(frequency, 1e-300), cutoff / 64.0);
  auto edges = uniform_panels(0.0, kTaperStart * cutoff, width);
  // Keep a panel edge exactly at the taper start so the window kink lies on a boundary.
  auto tail = uniform_panels(kTaperStart * cutoff, cutoff, width);
  edges.insert(edges.end(), tail.begin() + 1, tail.end());
  return edges;
}

// e^{-ix} - 1 + ix without cancellation.
Complex phase_remainder(double x) {
  const double s = std::sin(0.5 * x);
  double im;
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    im = x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  } else {
    im = x - std::sin(x);
  }
  return {-2.0 * s * s, im};
}

double subtracted_f1_remainder(double z, double mass, double cutoff, WindowKind window,
                               double* quad_error) {
  if (mass == 0.0) {
    *quad_error = 0.0;
    return 0.0;
  }
  const double m4 = std::pow(mass, 4);
  const std::function<double(double)> integrand = [&](double k) {
    const double w = std::sqrt(k * k + mass * mass) + k;
    return -m4 / (2.0 * w * w) * std::sin(k * z) * window_weight(window, k, cutoff);
  };
  const auto edges = oscillatory_panels(cutoff, z);
  const auto r = integrate_panels(integrand, edges, kQuadTolerance);
  *quad_error = r.error * radial_prefactor(z);
  return r.value * radial_prefactor(z);
}

double f1_direct_value(double z, double mass, double cutoff, WindowKind window, double* quad_error) {
  const double z2 = z * z;
  const double analytic = -1.0 / (kPi * kPi * z2 * z2) + mass * mass / (4.0 * kPi * kPi * z2);
  return analytic + subtracted_f1_remainder(z, mass, cutoff, window, quad_error);
}

// Radial quadrature of k sin(kz) f(k) / (2 pi^2 z), the z -> 0 limit using k^2 f(k).
ComplexQuadResult radial_quadrature(const std::function<Complex(double)>& symbol, double z,
                                    double frequency, double cutoff, WindowKind window) {
  auto integrand = [&](double k) {
    const double radial = z > 0.0 ? std::sin(k * z) / z : k;
    return symbol(k) * (radial * window_weight(window, k, cutoff));
  };
  const auto edges = oscillatory_panels(cutoff, frequency);
  auto r = integrate_panels(integrand, edges, kQuadTolerance);
  const double pre = 1.0 / (2.0 * kPi * kPi);
  r.value *= pre;
  r.error *= pre;
  return r;
}

ComplexQuadResult f2_reduced_value(double z, double t, double mass, double cutoff, WindowKind window) {
  const double m2 = mass * mass;
  const double m4 = m2 * m2;
  const double d = z * z - t * t;
  const Complex analytic = kI * t / (kPi * kPi * d * d) - kI * m2 * t / (4.0 * kPi * kPi * d);
  if (mass == 0.0 || t == 0.0) return {analytic, 0.0, 0};
  // S(k) = e^{-ikt} [k phi(delta t) + i t M^4 / (2 (omega+k)^2)], delta = omega - k.
  auto symbol = [&](double k) {
    const double w = std::sqrt(k * k + m2) + k;
    const double delta = m2 / w;
    const Complex bracket = k * phase_remainder(delta * t) + kI * (t * m4 / (2.0 * w * w));
    return std::polar(1.0, -k * t) * bracket;
  };
  auto r = radial_quadrature(symbol, z, z + std::abs(t), cutoff, window);
  r.value += analytic;
  return r;
}

ComplexQuadResult f2_direct_value(double z, double t, double mass, double cutoff, WindowKind window) {
  auto symbol = [&](double k) { return Complex(k, 0.0) * std::polar(1.0, -std::sqrt(k * k + mass * mass) * t); };
  return radial_quadrature(symbol, z, z + std::abs(t), cutoff, window);
}

double f1_direct_raw(double z, double mass, double cutoff, WindowKind window, double* quad_error) {
  auto symbol = [&](double k) { return Complex(k * std::sqrt(k * k + mass * mass), 0.0); };
  const auto r = radial_quadrature(symbol, z, z, cutoff, window);
  *quad_error = r.error;
  return r.value.real();
}

}  // namespace

double window_weight(WindowKind window, double k, double cutoff) {
  const double u = (k - kTaperStart * cutoff) / ((1.0 - kTaperStart) * cutoff);
  switch (window) {
    case WindowKind::cosine_taper:
      if (u <= 0.0) return 1.0;
      if (u >= 1.0) return 0.0;
      return 0.5 * (1.0 + std::cos(kPi * u));
    case WindowKind::erf_taper:
      if (k >= cutoff) return 0.0;
      return 0.5 * std::erfc(12.0 * (u - 0.5));
  }
  return 1.0;
}

std::string to_string(KernelKind k) { return k == KernelKind::F1 ? "F1" : "F2"; }

std::string to_string(KernelMethod m) {
  switch (m) {
    case KernelMethod::direct_quadrature: return "direct_quadrature";
    case KernelMethod::radial_reduced: return "radial_reduced";
    case KernelMethod::contour: return "contour";
  }
  return "?";
}

KernelKind parse_kernel_kind(const std::string& s) {
  if (s == "F1") return KernelKind::F1;
  if (s == "F2") return KernelKind::F2;
  throw DomainError("unknown kernel kind '" + s + "'");
}

KernelMethod parse_kernel_method(const std::string& s) {
  if (s == "direct_quadrature") return KernelMethod::direct_quadrature;
  if (s == "radial_reduced") return KernelMethod::radial_reduced;
  if (s == "contour") return KernelMethod::contour;
  throw DomainError("unknown kernel method '" + s + "'");
}

WindowKind parse_window(const std::string& s) {
  if (s == "cosine_taper") return WindowKind::cosine_taper;
  if (s == "erf_taper") return WindowKind::erf_taper;
  throw DomainError("unknown window '" + s + "'");
}

void validate(const KernelSpec& spec, double z) {
  if (!(spec.mass >= 0.0)) throw DomainError("kernel mass must be >= 0");
  if (!(z >= 0.0)) throw DomainError("kernel abscissa z must be >= 0");
  if (spec.method == KernelMethod::contour) {
    if (spec.kind == KernelKind::F1 && !(z > 0.0)) throw DomainError("F1 contour needs z > 0");
    if (spec.kind == KernelKind::F2 && !(spec.time >= 0.0 && z > spec.time))
      throw DomainError("F2 contour needs the spacelike regime z > t >= 0");
    return;
  }
  if (!spec.cutoff || !(*spec.cutoff > 0.0))
    throw DomainError(to_string(spec.method) + " needs a finite positive cutoff");
  if (spec.kind == KernelKind::F1 && !(z > 0.0)) throw DomainError("F1 quadrature needs z > 0");
  if (spec.kind == KernelKind::F2 && spec.method == KernelMethod::radial_reduced &&
      z == std::abs(spec.time))
    throw DomainError("radial_reduced F2 is singular on the light cone z = |t|");
}

QuadResult f1_contour(double z, double mass) {
  if (!(z > 0.0)) throw DomainError("f1_contour needs z > 0");
  if (!(mass >= 0.0)) throw DomainError("mass must be >= 0");
  // p = M + u^2/z:  (p^2-M^2)^{3/2} dp = (u^3 / z^{3/2}) (2M + u^2/z)^{3/2} (2u/z) du.
  const std::function<double(double)> integrand = [&](double u) {
    const double u2 = u * u;
    const double s = u2 / z;
    return std::exp(-u2) * std::pow(s * (2.0 * mass + s), 1.5) * (2.0 * u / z);
  };
  const auto edges = uniform_panels(0.0, kContourUMax, 0.25);
  auto r = integrate_panels(integrand, edges, kQuadTolerance);
  const double scale = -std::exp(-mass * z) / (6.0 * kPi * kPi);
  r.value *= scale;
  r.error *= std::abs(scale);
  r.error += 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r.value);
  return r;
}

QuadResult f1_direct(double z, double mass, double cutoff, WindowKind window) {
  if (!(z > 0.0)) throw DomainError("f1_direct needs z > 0");
  if (!(mass >= 0.0)) throw DomainError("mass must be >= 0");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("f1_direct needs a finite cutoff");
  double err_full = 0.0, err_low = 0.0;
  const double full = f1_direct_value(z, mass, cutoff, window, &err_full);
  const double low = f1_direct_value(z, mass, kSensitivityFraction * cutoff, window, &err_low);
  QuadResult r;
  r.value = full;
  r.error = std::abs(full - low) + err_full + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(full);
  r.panels = oscillatory_panels(cutoff, z).size() - 1;
  return r;
}

ComplexQuadResult f2_contour(double z, double t, double mass) {
  if (!(t >= 0.0 && z > t)) throw DomainError("f2_contour needs z > t >= 0");
  if (!(mass >= 0.0)) throw DomainError("mass must be >= 0");
  if (t == 0.0) return {Complex(0.0, 0.0), 0.0, 0};
  const double gap = z - t;
  // p = M + u^2/gap; both exponents -pz +/- t r stay <= -M (z - t) - u^2.
  const std::function<double(double)> integrand = [&](double u) {
    const double s = u * u / gap;
    const double p = mass + s;
    const double r = std::sqrt(s * (2.0 * mass + s));
    const double sinh_part = 0.5 * (std::exp(-p * z + t * r) - std::exp(-p * z - t * r));
    return p * sinh_part * (2.0 * u / gap);
  };
  const auto edges = uniform_panels(0.0, kContourUMax, 0.25);
  const auto r = integrate_panels(integrand, edges, kQuadTolerance);
  const double pre = radial_prefactor(z);
  ComplexQuadResult out;
  out.value = Complex(0.0, r.value * pre);
  out.error = r.error * pre + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r.value * pre);
  out.panels = r.panels;
  return out;
}

ComplexQuadResult f2_eval(double z, double t, double mass, double cutoff, KernelMethod method,
                          WindowKind window) {
  KernelSpec spec{KernelKind::F2, mass, cutoff, t, method, window};
  validate(spec, z);
  if (method == KernelMethod::contour) return f2_contour(z, t, mass);
  auto eval = [&](double lambda) {
    return method == KernelMethod::radial_reduced ? f2_reduced_value(z, t, mass, lambda, window)
                                                  : f2_direct_value(z, t, mass, lambda, window);
  };
  auto full = eval(cutoff);
  const auto low = eval(kSensitivityFraction * cutoff);
  full.error += std::abs(full.value - low.value) +
                4.0 * std::numeric_limits<double>::epsilon() * std::abs(full.value);
  return full;
}

ComplexQuadResult f2_band(double z, double t, double mass, double k0, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("f2_band needs sigma > 0");
  if (!(z >= 0.0)) throw DomainError("f2_band needs z >= 0");
  const double lo = std::max(0.0, k0 - 12.0 * sigma);
  const double hi = k0 + 12.0 * sigma;
  auto integrand = [&](double k) {
    const double radial = z > 0.0 ? std::sin(k * z) / z : k;
    const double g = std::exp(-0.5 * (k - k0) * (k - k0) / (sigma * sigma));
    return std::polar(k * radial * g, -std::sqrt(k * k + mass * mass) * t);
  };
  const double width = std::min(0.5 * kPi / (z + std::abs(t) + 1.0), sigma / 4.0);
  const auto edges = uniform_panels(lo, hi, width);
  auto r = integrate_panels(integrand, edges, kQuadTolerance);
  const double pre = 1.0 / (2.0 * kPi * kPi);
  r.value *= pre;
  r.error *= pre;
  return r;
}

double band_front_position(double t, double mass, double k0, double sigma, double z_lo, double z_hi) {
  if (!(z_hi > z_lo) || z_lo < 0.0) throw DomainError("band_front_position needs 0 <= z_lo < z_hi");
  auto mag = [&](double z) { return std::abs(f2_band(z, t, mass, k0, sigma).value); };
  // Coarse scan at a fraction of the envelope width 1/sigma, then golden-section refinement.
  const double step = std::min(0.05 / sigma, (z_hi - z_lo) / 64.0);
  double best_z = z_lo;
  double best = -1.0;
  for (double z = z_lo; z <= z_hi; z += step) {
    const double m = mag(z);
    if (m > best) {
      best = m;
      best_z = z;
    }
  }
  double a = std::max(z_lo, best_z - step);
  double b = std::min(z_hi, best_z + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = mag(c), fd = mag(d);
  while (b - a > 1e-9 * std::max(1.0, std::abs(best_z))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = mag(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = mag(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> group_velocity(std::span<const double> k, double mass) {
  double k2 = 0.0;
  for (double v : k) k2 += v * v;
  const double omega = std::sqrt(k2 + mass * mass);
  if (!(omega > 0.0)) throw DomainError("group_velocity needs omega(k) > 0");
  std::vector<double> v(k.begin(), k.end());
  for (double& c : v) c /= omega;
  return v;
}

KernelPoint evaluate_kernel(const KernelSpec& spec, double z) {
  validate(spec, z);
  KernelPoint p;
  p.z = z;
  p.t = spec.kind == KernelKind::F2 ? spec.time : 0.0;
  if (spec.kind == KernelKind::F1) {
    switch (spec.method) {
      case KernelMethod::contour: {
        const auto r = f1_contour(z, spec.mass);
        p.value = r.value;
        p.error = r.error;
        break;
      }
      case KernelMethod::radial_reduced: {
        const auto r = f1_direct(z, spec.mass, *spec.cutoff, spec.window);
        p.value = r.value;
        p.error = r.error;
        break;
      }
      case KernelMethod::direct_quadrature: {
        double err_full = 0.0, err_low = 0.0;
        const double full = f1_direct_raw(z, spec.mass, *spec.cutoff, spec.window, &err_full);
        const double low =
            f1_direct_raw(z, spec.mass, kSensitivityFraction * *spec.cutoff, spec.window, &err_low);
        p.value = full;
        p.error = err_full + std::abs(full - low);
        break;
      }
    }
  } else {
    const auto r = f2_eval(z, spec.time, spec.mass, spec.cutoff.value_or(0.0), spec.method, spec.window);
    p.value = r.value;
    p.error = r.error;
  }
  if (!(p.error > 0.0)) p.error = std::numeric_limits<double>::min();
  if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()))
    throw NumericalError("kernel evaluation produced a non-finite value at z = " + format_double(z));
  return p;
}

KernelTable tabulate_kernel(const KernelSpec& spec, std::span<const double> z) {
  KernelTable table{spec, {}};
  table.points.reserve(z.size());
  for (double v : z) table.points.push_back(evaluate_kernel(spec, v));
  return table;
}

void write_kernel_csv(std::ostream& out, const KernelTable& table) {
  const auto& s = table.spec;
  const std::string lambda = s.cutoff ? format_double(*s.cutoff) : "inf";
  out << "z,t,re,im,err,method,M,Lambda\n";
  for (const auto& p : table.points) {
    out << format_double(p.z) << ',' << format_double(p.t) << ',' << format_double(p.value.real()) << ','
        << format_double(p.value.imag()) << ',' << format_double(p.error) << ',' << to_string(s.method)
        << ',' << format_double(s.mass) << ',' << lambda << '\n';
  }
}

double f1_decay_prefactor(double z, double mass, int terms) {
  if (terms < 0) throw DomainError("prefactor terms must be >= 0");
  if (terms == 0) return 1.0;
  if (terms > 1 && !(mass > 0.0)) throw DomainError("Watson correction terms need M > 0");
  double sum = 0.0;
  double binom = 1.0;       // binom(3/2, j)
  double gamma_ratio = 1.0;  // Gamma(5/2 + j) / Gamma(5/2)
  for (int j = 0; j < terms; ++j) {
    sum += binom * gamma_ratio * std::pow(2.0 * mass * z, -j);
    binom *= (1.5 - j) / (j + 1.0);
    gamma_ratio *= 2.5 + j;
  }
  return std::pow(z, -2.5) * sum;
}

DecayFit decay_fit(const KernelTable& table, double z_lo, double z_hi, int prefactor_terms) {
  std::vector<double> xs, ys;
  for (const auto& p : table.points) {
    if (p.z < z_lo || p.z > z_hi) continue;
    const double mag = std::abs(p.value);
    if (!(mag > 0.0)) throw DomainError("decay_fit: kernel value vanishes at z = " + format_double(p.z));
    xs.push_back(p.z);
    ys.push_back(std::log(mag / f1_decay_prefactor(p.z, table.spec.mass, prefactor_terms)));
  }
  if (xs.size() < 8) throw DomainError("decay_fit needs at least 8 points in the fit range");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("decay_fit: degenerate fit, all z equal");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = xs.size();
  return fit;
}

SuppressionScan spacelike_suppression_scan(double mass, double t, std::span<const double> z,
                                           const SuppressionOptions& options) {
  if (!(t >= 0.0)) throw DomainError("suppression scan needs t >= 0");
  if (z.size() < 2) throw DomainError("suppression scan needs at least two abscissae");
  SuppressionScan scan;
  scan.mass = mass;
  scan.t = t;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > t)) throw DomainError("suppression scan abscissae must lie strictly above t");
    if (i > 0 && !(z[i] > z[i - 1])) throw DomainError("suppression scan abscissae must increase");
    const double cutoff = std::max(options.min_cutoff, options.cutoff_scale / (z[i] - t));
    double mag = 0.0, err = 0.0;
    if (t == 0.0) {
      const auto r = f1_direct(z[i], mass, cutoff, options.window);
      mag = std::abs(r.value);
      err = r.error;
    } else {
      const auto r = f2_eval(z[i], t, mass, cutoff, KernelMethod::radial_reduced, options.window);
      mag = std::abs(r.value);
      err = r.error;
    }
    scan.z.push_back(z[i]);
    scan.magnitude.push_back(mag);
    scan.error.push_back(err);
  }
  for (std::size_t i = 0; i + 1 < scan.z.size(); ++i) {
    if (scan.magnitude[i + 1] > scan.magnitude[i] + scan.error[i] + scan.error[i + 1]) {
      scan.violations.push_back(i);
      scan.monotone = false;
    }
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(scan.z.size());
  for (std::size_t i = 0; i < scan.z.size(); ++i) {
    mx += scan.z[i];
    my += std::log(scan.magnitude[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < scan.z.size(); ++i) {
    sxx += (scan.z[i] - mx) * (scan.z[i] - mx);
    sxy += (scan.z[i] - mx) * (std::log(scan.magnitude[i]) - my);
  }
  scan.decay_rate = -sxy / sxx;
  return scan;
}

}  // namespace ontic
