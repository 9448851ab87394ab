#pragma once

// Test-only reference computations. These follow the textbook definitions
// directly (long double trig, explicit operator application) and share no
// code path with the library's ambiguity or FFT routines.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "prradar/sequence.hpp"

namespace prradar::test {

using lcplx = std::complex<long double>;

inline lcplx e_ref(long long t, std::size_t n) {
  const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(t) /
                            static_cast<long double>(n);
  return {std::cos(angle), std::sin(angle)};
}

inline long long mod(long long a, std::size_t n) {
  const auto m = static_cast<long long>(n);
  return ((a % m) + m) % m;
}

/// [pi(tau, omega) f][k] = e(omega k) f[k - tau]
inline std::vector<lcplx> shifted_ref(const Sequence& f, long long tau, long long omega) {
  const std::size_t n = f.size();
  std::vector<lcplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<std::size_t>(mod(static_cast<long long>(k) - tau, n));
    out[k] = e_ref(omega * static_cast<long long>(k), n) * lcplx(f[src].real(), f[src].imag());
  }
  return out;
}

/// <pi(v) f, g> with conjugation on the first argument.
inline std::complex<double> ambiguity_ref(const Sequence& f, const Sequence& g, long long tau, long long omega) {
  const auto shifted = shifted_ref(f, tau, omega);
  lcplx s{};
  for (std::size_t k = 0; k < f.size(); ++k) s += std::conj(shifted[k]) * lcplx(g[k].real(), g[k].imag());
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

inline std::vector<std::complex<double>> dft_ref(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    lcplx s{};
    for (std::size_t j = 0; j < n; ++j) {
      s += e_ref(-static_cast<long long>(j * k % n), n) * lcplx(x[j].real(), x[j].imag());
    }
    out[k] = {static_cast<double>(s.real()), static_cast<double>(s.imag())};
  }
  return out;
}

inline Sequence random_sequence(std::size_t n, std::mt19937_64& rng, bool unit = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  Sequence s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = {g(rng), g(rng)};
  if (unit) {
    const double inv = 1.0 / s.norm();
    for (std::size_t k = 0; k < n; ++k) s[k] *= inv;
  }
  return s;
}

inline std::complex<double> random_scalar(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

}  // namespace prradar::test
