#pragma once

// Time-frequency shifts and the discrete ambiguity function
//
//   A(f, g)[tau, omega] = < pi(tau, omega) f, g >,
//   [pi(tau, omega) f][n] = e(omega n) f[n - tau].
//
// With the inner product conjugate-linear in its first slot, row tau of the
// grid is the forward DFT (kernel e(-omega n)) of h_tau[n] = conj(f[n - tau]) g[n].

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "prradar/fft.hpp"
#include "prradar/parallel.hpp"
#include "prradar/sequence.hpp"

namespace prradar {

inline Sequence shift_apply(TimeFreqShift v, const Sequence& f) {
  const std::size_t n = f.size();
  Sequence out(n);
  const std::size_t tau = v.tau % n;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = unit_phase(static_cast<std::int64_t>((v.omega % n) * k % n), n) *
             f[(k + n - tau) % n];
  }
  return out;
}

inline cplx ambiguity_point(const Sequence& f, const Sequence& g, TimeFreqShift v) {
  if (f.size() != g.size()) throw std::invalid_argument("ambiguity_point: length mismatch");
  const std::size_t n = f.size();
  const std::size_t tau = v.tau % n;
  const std::size_t omega = v.omega % n;
  cplx s{};
  for (std::size_t k = 0; k < n; ++k) {
    const cplx phase = unit_phase(-static_cast<std::int64_t>(omega * k % n), n);
    s += phase * std::conj(f[(k + n - tau) % n]) * g[k];
  }
  return s;
}

/// N x N grid indexed [tau][omega], stored row-major by tau.
class AmbiguityGrid {
 public:
  AmbiguityGrid() = default;
  explicit AmbiguityGrid(std::size_t n) : n_(n), values_(n * n) {}

  std::size_t size() const { return n_; }
  const cplx& at(std::size_t tau, std::size_t omega) const { return values_[tau * n_ + omega]; }
  cplx& at(std::size_t tau, std::size_t omega) { return values_[tau * n_ + omega]; }
  const cplx& at(TimeFreqShift v) const { return at(v.tau, v.omega); }

  std::span<const cplx> row(std::size_t tau) const { return {values_.data() + tau * n_, n_}; }
  std::span<cplx> row(std::size_t tau) { return {values_.data() + tau * n_, n_}; }
  std::span<const cplx> values() const { return values_; }

  double max_abs_diff(const AmbiguityGrid& other) const {
    if (other.n_ != n_) throw std::invalid_argument("AmbiguityGrid: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      m = std::max(m, std::abs(values_[i] - other.values_[i]));
    }
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<cplx> values_;
};

/// Direct O(N^3) evaluation; the reference the fast path is checked against.
inline AmbiguityGrid ambiguity_naive(const Sequence& f, const Sequence& g) {
  if (f.size() != g.size()) throw std::invalid_argument("ambiguity_naive: length mismatch");
  const std::size_t n = f.size();
  AmbiguityGrid grid(n);
  for (std::size_t tau = 0; tau < n; ++tau) {
    for (std::size_t omega = 0; omega < n; ++omega) {
      grid.at(tau, omega) = ambiguity_point(f, g, {tau, omega});
    }
  }
  return grid;
}

/// One length-N transform per delay row, O(N^2 log N) total. Rows are
/// independent, so the result is bit-identical for every thread count.
inline AmbiguityGrid ambiguity_fast(const Sequence& f, const Sequence& g, const FftPlan& plan,
                                    unsigned threads = 1) {
  if (f.size() != g.size()) throw std::invalid_argument("ambiguity_fast: length mismatch");
  const std::size_t n = f.size();
  if (plan.size() != n) throw std::invalid_argument("ambiguity_fast: plan length mismatch");
  AmbiguityGrid grid(n);
  parallel_for(n, threads, [&](std::size_t tau) {
    std::span<cplx> row = grid.row(tau);
    for (std::size_t k = 0; k < tau; ++k) row[k] = std::conj(f[k + n - tau]) * g[k];
    for (std::size_t k = tau; k < n; ++k) row[k] = std::conj(f[k - tau]) * g[k];
    std::vector<cplx> scratch;
    plan.forward(row, scratch);
  });
  return grid;
}

inline AmbiguityGrid ambiguity_fast(const Sequence& f, const Sequence& g, unsigned threads = 1) {
  return ambiguity_fast(f, g, FftPlan(f.size()), threads);
}

}  // namespace prradar
