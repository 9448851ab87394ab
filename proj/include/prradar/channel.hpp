#pragma once

// Sparse delay-Doppler channel and noisy echo synthesis.
//
//   H(S)[n] = sum_k alpha_k e(omega_k n) S[n - tau_k],   R = H(S) + W.
//
// Attenuations are uniform on the complex unit sphere, shifts are distinct and
// uniform on Z_N x Z_N, and W is circularly-symmetric white Gaussian noise.
// Each sampler mixes its own SeedDomain into the caller's seed, so passing one
// trial seed to all of them still yields independent streams.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "prradar/random.hpp"
#include "prradar/sequence.hpp"

namespace prradar {

struct Target {
  TimeFreqShift shift;
  cplx alpha;
};

struct ChannelParams {
  std::size_t n_len = 0;
  std::vector<Target> targets;

  std::size_t sparsity() const { return targets.size(); }

  std::vector<TimeFreqShift> support() const {
    std::vector<TimeFreqShift> out;
    out.reserve(targets.size());
    for (const Target& t : targets) out.push_back(t.shift);
    return out;
  }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate(double norm_tol = 1e-12) const {
    if (n_len == 0) throw std::invalid_argument("ChannelParams: N must be positive");
    const std::size_t r = targets.size();
    if (r == 0 || r > n_len * n_len) {
      throw std::invalid_argument("ChannelParams: need 1 <= r <= N^2 targets (got r = " +
                                  std::to_string(r) + ")");
    }
    double norm2 = 0.0;
    std::set<TimeFreqShift> seen;
    for (const Target& t : targets) {
      if (t.shift.tau >= n_len || t.shift.omega >= n_len) {
        throw std::invalid_argument("ChannelParams: shift coordinates must lie in [0, N)");
      }
      if (!seen.insert(t.shift).second) {
        throw std::invalid_argument("ChannelParams: shifts must be pairwise distinct");
      }
      norm2 += std::norm(t.alpha);
    }
    if (std::abs(norm2 - 1.0) > norm_tol) {
      throw std::invalid_argument("ChannelParams: attenuations must satisfy sum |alpha_k|^2 = 1");
    }
  }
};

/// AWGN at a fixed SNR := ||alpha||^2 / E||W||^2, i.e. per-sample variance
/// 10^(-snr_db/10) / N.
struct NoiseModel {
  double snr_db = 10.0;
  bool enabled = true;

  double variance(std::size_t n) const {
    return enabled ? std::pow(10.0, -snr_db / 10.0) / static_cast<double>(n) : 0.0;
  }
};

/// Uniform point on S_C^{r-1}: normalized vector of 2r standard Gaussians.
inline std::vector<cplx> sample_unit_sphere(std::size_t r, Engine& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> z(r);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (cplx& v : z) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v = {re, im};
      norm2 += re * re + im * im;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (cplx& v : z) v *= inv;
  return z;
}

inline std::vector<cplx> sample_attenuations(std::size_t r, std::uint64_t seed) {
  if (r == 0) throw std::invalid_argument("sample_attenuations: r must be at least 1");
  Engine rng = make_engine(seed, SeedDomain::attenuations);
  return sample_unit_sphere(r, rng);
}

/// r distinct shifts, uniform without replacement (Floyd's algorithm over the
/// N^2 cell indices).
inline std::vector<TimeFreqShift> sample_shifts(std::size_t n, std::size_t r, std::uint64_t seed) {
  const std::size_t cells = n * n;
  if (n == 0 || r > cells) {
    throw std::invalid_argument("sample_shifts: need r <= N^2 (got N = " + std::to_string(n) +
                                ", r = " + std::to_string(r) + ")");
  }
  Engine rng = make_engine(seed, SeedDomain::shifts);
  std::unordered_set<std::size_t> chosen;
  std::vector<std::size_t> order;
  order.reserve(r);
  for (std::size_t j = cells - r; j < cells; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    const std::size_t t = pick(rng);
    const std::size_t cell = chosen.insert(t).second ? t : j;
    if (cell == j) chosen.insert(j);
    order.push_back(cell);
  }
  std::vector<TimeFreqShift> out;
  out.reserve(r);
  for (std::size_t cell : order) out.push_back({cell / n, cell % n});
  return out;
}

inline ChannelParams sample_channel(std::size_t n, std::size_t r, std::uint64_t seed) {
  const auto shifts = sample_shifts(n, r, seed);
  const auto alphas = sample_attenuations(r, seed);
  ChannelParams p;
  p.n_len = n;
  p.targets.reserve(r);
  for (std::size_t k = 0; k < r; ++k) p.targets.push_back({shifts[k], alphas[k]});
  return p;
}

inline Sequence apply_channel(const ChannelParams& params, const Sequence& s) {
  const std::size_t n = params.n_len;
  if (s.size() != n) {
    throw std::invalid_argument("apply_channel: sequence length " + std::to_string(s.size()) +
                                " does not match channel N = " + std::to_string(n));
  }
  Sequence out(n);
  for (const Target& t : params.targets) {
    const std::size_t tau = t.shift.tau % n;
    const std::size_t omega = t.shift.omega % n;
    for (std::size_t k = 0; k < n; ++k) {
      out[k] += t.alpha * unit_phase(static_cast<std::int64_t>(omega * k % n), n) *
                s[(k + n - tau) % n];
    }
  }
  return out;
}

/// W with i.i.d. CN(0, sigma^2) entries; all zeros when noise is disabled.
inline Sequence draw_noise(std::size_t n, const NoiseModel& noise, std::uint64_t seed) {
  Sequence w(n);
  if (!noise.enabled) return w;
  Engine rng = make_engine(seed, SeedDomain::noise);
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise.variance(n) / 2.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    w[k] = {re, im};
  }
  return w;
}

inline Sequence synthesize_echo(const ChannelParams& params, const Sequence& s,
                                const NoiseModel& noise, std::uint64_t seed) {
  Sequence echo = apply_channel(params, s);
  if (!noise.enabled) return echo;
  const Sequence w = draw_noise(echo.size(), noise, seed);
  for (std::size_t k = 0; k < echo.size(); ++k) echo[k] += w[k];
  return echo;
}

}  // namespace prradar
