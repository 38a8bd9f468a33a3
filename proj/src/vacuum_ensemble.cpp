#include "ontic/vacuum_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "ontic/field_io.hpp"

namespace ontic {

namespace {

constexpr long kBlock = 256;

struct Accumulator {
  std::vector<Complex> sum;
  std::vector<double> sum_sq;  // sum of |X|^2
  explicit Accumulator(std::size_t entries) : sum(entries), sum_sq(entries) {}

  void add(const std::vector<Complex>& b) {
    const std::size_t n = b.size();
    for (std::size_t x = 0; x < n; ++x) {
      const Complex cx = std::conj(b[x]);
      for (std::size_t y = 0; y < n; ++y) {
        const Complex v = cx * b[y];
        sum[x * n + y] += v;
        sum_sq[x * n + y] += std::norm(v);
      }
    }
  }

  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum_sq[i] += o.sum_sq[i];
    }
  }
};

Correlator finish(const Accumulator& acc, std::size_t points, long samples) {
  Correlator c;
  c.points = points;
  c.samples = samples;
  c.mean.resize(acc.sum.size());
  c.stderr_.resize(acc.sum.size());
  const double n = static_cast<double>(samples);
  for (std::size_t i = 0; i < acc.sum.size(); ++i) {
    const Complex m = acc.sum[i] / n;
    double var = (acc.sum_sq[i] / n - std::norm(m)) * n / (n - 1.0);
    // An estimated variance at rounding level of the second moment is zero for our purposes.
    if (var <= 64.0 * std::numeric_limits<double>::epsilon() * acc.sum_sq[i] / n) var = 0.0;
    c.mean[i] = m;
    c.stderr_[i] = std::sqrt(var / n);
    if (var == 0.0) c.degenerate.push_back(i);
  }
  return c;
}

}  // namespace

void validate(const EnsembleSpec& spec) {
  if (spec.samples < 1) throw DomainError("ensemble sample count must be >= 1");
  build_lattice(spec.lattice);
}

ComplexField sample_vacuum(const EnsembleSpec& spec, const MomentumLattice& lattice, long sample_index) {
  if (sample_index < 0 || sample_index >= spec.samples) throw DomainError("sample index out of range");
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(sample_index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(sample_index) >> 32)};
  std::mt19937_64 engine(seq);
  ComplexField f = make_field(lattice, FieldSpace::momentum);
  for (auto& v : f.values) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    v = std::polar(1.0, kTwoPi * u);
  }
  return f;
}

Correlator ensemble_correlator(const EnsembleSpec& spec, std::optional<double> t, unsigned threads) {
  validate(spec);
  if (spec.samples < 100) throw DomainError("ensemble_correlator needs at least 100 samples");
  const auto lattice = build_lattice(spec.lattice);
  const std::size_t n = lattice.size();
  const long blocks = (spec.samples + kBlock - 1) / kBlock;
  std::vector<Accumulator> partial(static_cast<std::size_t>(blocks), Accumulator(n * n));
  auto work = [&](long first_block, long stride) {
    for (long blk = first_block; blk < blocks; blk += stride) {
      auto& acc = partial[static_cast<std::size_t>(blk)];
      const long end = std::min(spec.samples, (blk + 1) * kBlock);
      for (long s = blk * kBlock; s < end; ++s) {
        auto k = sample_vacuum(spec, lattice, s);
        if (t) k = spectral_evolve(k, lattice, *t);
        acc.add(to_position(k, lattice).values);
      }
    }
  };
  const long workers = std::clamp<long>(threads == 0 ? 1 : threads, 1, blocks);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }
  Accumulator total(n * n);
  for (const auto& p : partial) total.merge(p);
  return finish(total, n, spec.samples);
}

Correlator correlator_from_samples(const std::vector<ComplexField>& samples) {
  if (samples.size() < 2) throw DomainError("correlator needs at least 2 samples");
  const std::size_t n = samples.front().values.size();
  Accumulator acc(n * n);
  for (const auto& s : samples) {
    if (s.space != FieldSpace::position || s.values.size() != n)
      throw DomainError("correlator samples must be position fields of one shape");
    acc.add(s.values);
  }
  return finish(acc, n, static_cast<long>(samples.size()));
}

BoundsCheck check_delta_correlator(const Correlator& c, double sigmas) {
  BoundsCheck b;
  b.sigmas = sigmas;
  for (std::size_t x = 0; x < c.points; ++x) {
    for (std::size_t y = 0; y < c.points; ++y) {
      const double target = x == y ? 1.0 : 0.0;
      const double dev = std::abs(c.at(x, y) - target);
      const double err = c.error(x, y);
      const double z = err > 0.0 ? dev / err : (dev == 0.0 ? 0.0 : INFINITY);
      if (x == y) {
        b.worst_diagonal = std::max(b.worst_diagonal, z);
        if (z > sigmas) ++b.diagonal_outside;
      } else {
        b.worst_off_diagonal = std::max(b.worst_off_diagonal, z);
        if (z > sigmas) ++b.off_diagonal_outside;
      }
    }
  }
  return b;
}

void write_correlator_csv(std::ostream& out, const Correlator& c) {
  out << "x,y,re,im,stderr\n";
  for (std::size_t x = 0; x < c.points; ++x)
    for (std::size_t y = 0; y < c.points; ++y)
      out << x << ',' << y << ',' << format_double(c.at(x, y).real()) << ',' << format_double(c.at(x, y).imag())
          << ',' << format_double(c.error(x, y)) << '\n';
}

}  // namespace ontic
