#pragma once

// Sequences on Z_N and the probing-sequence generators.

#include <cmath>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prradar/fft.hpp"
#include "prradar/random.hpp"

namespace prradar {

/// Element of C(Z_N). Length is fixed at construction and always >= 1.
class Sequence {
 public:
  Sequence() = default;

  explicit Sequence(std::size_t n) : values_(n) {
    if (n == 0) throw std::invalid_argument("Sequence: length must be at least 1");
  }

  explicit Sequence(std::vector<cplx> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("Sequence: length must be at least 1");
  }

  std::size_t size() const { return values_.size(); }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }

  double norm_squared() const {
    double s = 0.0;
    for (const cplx& v : values_) s += std::norm(v);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  bool operator==(const Sequence&) const = default;

 private:
  std::vector<cplx> values_;
};

/// Point (tau, omega) of V = Z_N x Z_N; tau is a delay in samples, omega a
/// Doppler bin in units of 1/N cycles per sample.
struct TimeFreqShift {
  std::size_t tau = 0;
  std::size_t omega = 0;

  auto operator<=>(const TimeFreqShift&) const = default;
};

inline TimeFreqShift reduce(std::int64_t tau, std::int64_t omega, std::size_t n) {
  const auto m = static_cast<std::int64_t>(n);
  return {static_cast<std::size_t>(((tau % m) + m) % m),
          static_cast<std::size_t>(((omega % m) + m) % m)};
}

/// e(t) = exp(2*pi*i*t/N), with t reduced mod N before the trig call.
inline cplx unit_phase(std::int64_t t, std::size_t n) {
  const auto m = static_cast<std::int64_t>(n);
  return detail::unit_root(static_cast<std::uint64_t>(((t % m) + m) % m), n, +1.0);
}

/// <f, g> = sum_n conj(f[n]) g[n]; conjugate-linear in the first argument.
inline cplx inner(const Sequence& f, const Sequence& g) {
  if (f.size() != g.size()) throw std::invalid_argument("inner: length mismatch");
  cplx s{};
  for (std::size_t n = 0; n < f.size(); ++n) s += std::conj(f[n]) * g[n];
  return s;
}

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline bool is_unit_norm(const Sequence& s, double tol = 1e-10) {
  return std::abs(s.norm_squared() - 1.0) <= tol;
}

inline void require_unit_norm(const Sequence& s, const char* who) {
  if (!is_unit_norm(s)) {
    throw std::invalid_argument(std::string(who) + ": sequence must have unit norm (got |s|^2 = " +
                                std::to_string(s.norm_squared()) + ")");
  }
}

/// Cubic-phase sequence e(n^3)/sqrt(N). For prime N >= 5 every off-origin
/// auto-ambiguity value has magnitude 0 or 1/sqrt(N).
inline Sequence gen_alltop(std::size_t n) {
  if (n < 5 || !is_prime(n)) {
    throw std::invalid_argument("alltop requires prime N >= 5 (got N = " + std::to_string(n) + ")");
  }
  Sequence s(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t km = k % n;
    const std::uint64_t cube = (km * km % n) * km % n;
    s[k] = unit_phase(static_cast<std::int64_t>(cube), n) * scale;
  }
  return s;
}

/// Unimodular sequence with i.i.d. uniform phases, scaled to unit norm.
inline Sequence gen_random_phase(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random-phase sequence requires N >= 1");
  Engine rng = make_engine(seed, SeedDomain::sequence);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  Sequence s(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) s[k] = std::polar(scale, phase(rng));
  return s;
}

inline Sequence delta_sequence(std::size_t n, std::size_t at = 0) {
  Sequence s(n);
  s[at % n] = 1.0;
  return s;
}

inline Sequence constant_sequence(std::size_t n) {
  Sequence s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = 1.0 / std::sqrt(static_cast<double>(n));
  return s;
}

enum class SequenceKind { alltop, random_phase };

inline std::string to_string(SequenceKind k) {
  return k == SequenceKind::alltop ? "alltop" : "random_phase";
}

inline SequenceKind parse_sequence_kind(const std::string& s) {
  if (s == "alltop") return SequenceKind::alltop;
  if (s == "random_phase" || s == "random") return SequenceKind::random_phase;
  throw std::invalid_argument("unknown sequence kind '" + s + "' (expected alltop or random_phase)");
}

inline Sequence make_sequence(SequenceKind kind, std::size_t n, std::uint64_t seed) {
  return kind == SequenceKind::alltop ? gen_alltop(n) : gen_random_phase(n, seed);
}

}  // namespace prradar
