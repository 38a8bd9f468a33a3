#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ontic/common.hpp"
#include "ontic/quadrature.hpp"

namespace ontic {

// Continuum D = 3 kernels with the (2 pi)^-3 normalisation:
//   F1(z)    = (2 pi)^-3 \int d^3k omega(k) exp(i k.z)
//   F2(z, t) = (2 pi)^-3 \int d^3k exp(i k.z - i omega(k) t)
// Both are radial; the angular integral gives (1/(2 pi^2 z)) \int_0^inf dk k sin(kz) f(k).

enum class KernelKind { F1, F2 };

enum class KernelMethod {
  direct_quadrature,  // windowed radial quadrature of the raw symbol (finite-cutoff kernel)
  radial_reduced,     // leading large-k terms in closed form, windowed quadrature of the rest
  contour,            // branch-cut integral after deforming k into the upper half plane
};

/// High-k window applied below the cutoff.  Both leave [0, 0.9 Lambda] untouched.
enum class WindowKind {
  cosine_taper,  // raised cosine over [0.9 Lambda, Lambda]
  erf_taper,     // 0.5 erfc(12 (u - 1/2)), u = (k - 0.9 Lambda)/(0.1 Lambda); below 1e-17 at both ends
};

double window_weight(WindowKind window, double k, double cutoff);

std::string to_string(KernelKind);
std::string to_string(KernelMethod);
KernelKind parse_kernel_kind(const std::string&);
KernelMethod parse_kernel_method(const std::string&);
WindowKind parse_window(const std::string&);

struct KernelSpec {
  KernelKind kind = KernelKind::F1;
  double mass = 0.0;
  std::optional<double> cutoff;
  double time = 0.0;  // F2 only
  KernelMethod method = KernelMethod::contour;
  WindowKind window = WindowKind::cosine_taper;
};

/// Throws DomainError when the method cannot handle the requested regime:
/// contour needs z > 0 (F1) or z > t >= 0 (F2); the quadrature methods need a cutoff.
void validate(const KernelSpec& spec, double z);

/// F1 from the branch-cut form -(1/(6 pi^2)) \int_M^inf dp exp(-pz) (p^2-M^2)^{3/2},
/// with the cutoff-dependent boundary term dropped.  Substitution p = M + u^2/z
/// makes the integrand smooth with Gaussian decay in u.
QuadResult f1_contour(double z, double mass);

/// F1 by radial quadrature along the real k axis.  The growing part of omega(k)
/// is removed analytically, omega = k + M^2/(2k) + R(k)/k with
/// R(k) = -M^4 / (2 (omega + k)^2); the k and M^2/(2k) pieces transform to
/// -1/(pi^2 z^4) and M^2/(4 pi^2 z^2), and R is integrated up to the cutoff
/// under the window.  The error estimate combines the quadrature estimate with
/// the change when the cutoff is lowered to 0.75 Lambda.
QuadResult f1_direct(double z, double mass, double cutoff,
                     WindowKind window = WindowKind::cosine_taper);

/// F2 for z > t >= 0:  (i/(2 pi^2 z)) \int_M^inf dp p exp(-pz) sinh(t sqrt(p^2 - M^2)).
ComplexQuadResult f2_contour(double z, double t, double mass);

/// F2 at z >= 0, any t.  radial_reduced subtracts the massless kernel
/// i t/(pi^2 (z^2-t^2)^2) and its M^2 correction -i M^2 t/(4 pi^2 (z^2-t^2))
/// and needs z != |t|; direct_quadrature returns the windowed finite-cutoff
/// kernel, which at t = 0 is the smeared delta function.
ComplexQuadResult f2_eval(double z, double t, double mass, double cutoff,
                          KernelMethod method = KernelMethod::radial_reduced,
                          WindowKind window = WindowKind::cosine_taper);

/// F2 restricted to a Gaussian band of |k| around k0 (width sigma): the
/// spherical shell a localized k0-packet spreads into.  No cutoff is involved.
ComplexQuadResult f2_band(double z, double t, double mass, double k0, double sigma);

/// Location of max |f2_band(z, t)| for z in [z_lo, z_hi].
double band_front_position(double t, double mass, double k0, double sigma, double z_lo, double z_hi);

/// k / sqrt(k^2 + M^2).
std::vector<double> group_velocity(std::span<const double> k, double mass);

struct KernelPoint {
  double z = 0.0;
  double t = 0.0;
  Complex value;
  double error = 0.0;
};

struct KernelTable {
  KernelSpec spec;
  std::vector<KernelPoint> points;
};

KernelPoint evaluate_kernel(const KernelSpec& spec, double z);
KernelTable tabulate_kernel(const KernelSpec& spec, std::span<const double> z);

/// Columns z,t,re,im,err,method,M,Lambda (Lambda written as inf when unset).
void write_kernel_csv(std::ostream& out, const KernelTable& table);

/// Watson-lemma prefactor of F1 at large z:
///   z^{-5/2} sum_{j<terms} binom(3/2, j) Gamma(5/2+j)/Gamma(5/2) (2 M z)^{-j}
/// terms = 0 means no prefactor (returns 1).
double f1_decay_prefactor(double z, double mass, int terms);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-linear fit residuals
  std::size_t points = 0;
};

/// Least squares of log|F1(z)/prefactor(z)| against z over [z_lo, z_hi].
/// Needs >= 8 table points in range, all nonzero; degenerate z spread throws.
DecayFit decay_fit(const KernelTable& table, double z_lo, double z_hi, int prefactor_terms);

struct SuppressionOptions {
  /// Cutoff used at each point is max(min_cutoff, cutoff_scale / (z - t)).
  double cutoff_scale = 3000.0;
  double min_cutoff = 200.0;
  WindowKind window = WindowKind::erf_taper;
};

struct SuppressionScan {
  double mass = 0.0;
  double t = 0.0;
  std::vector<double> z;
  std::vector<double> magnitude;
  std::vector<double> error;
  std::vector<std::size_t> violations;  // i where |F(z_{i+1})| > |F(z_i)| beyond error bars
  bool monotone = true;
  double decay_rate = 0.0;  // minus the slope of log|F| against z
};

/// |F2(z, t)| along z > t from the real-axis (radial_reduced) quadrature.
/// At t = 0 the kernel vanishes off the origin; the scan then uses the
/// small-t limit |F2|/t = |F1| instead.
SuppressionScan spacelike_suppression_scan(double mass, double t, std::span<const double> z,
                                           const SuppressionOptions& options = {});

}  // namespace ontic
