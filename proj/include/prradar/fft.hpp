#pragma once

// Discrete Fourier transform of arbitrary length.
//
// Power-of-two lengths use an iterative radix-2 transform; every other length
// goes through Bluestein's chirp-z identity on a padded power-of-two plan, so
// the cost is O(N log N) for all N.
//
// Convention: forward(x)[k] = sum_n x[n] * exp(-2*pi*i*k*n/N), unnormalized.

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace prradar {

using cplx = std::complex<double>;

namespace detail {

// exp(sign * 2*pi*i * num/den) with the argument reduced exactly in integers.
inline cplx unit_root(std::uint64_t num, std::uint64_t den, double sign) {
  const std::uint64_t r = num % den;
  const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(r) /
                       static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

class Radix2 {
 public:
  explicit Radix2(std::size_t n) : n_(n), twiddle_(n / 2), bitrev_(n) {
    if (!std::has_single_bit(n) || n > (std::size_t{1} << 31)) {
      throw std::invalid_argument("Radix2: length must be a power of two up to 2^31");
    }
    for (std::size_t k = 0; k < n / 2; ++k) {
      twiddle_[k] = unit_root(k, n, -1.0);
    }
    const int bits = std::countr_zero(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) {
        r |= ((i >> b) & 1u) << (bits - 1 - b);
      }
      bitrev_[i] = static_cast<std::uint32_t>(r);
    }
  }

  std::size_t size() const { return n_; }

  // In place. `inverse` conjugates the twiddles (no 1/N scaling).
  void run(std::span<cplx> x, bool inverse) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j = bitrev_[i];
      if (i < j) std::swap(x[i], x[j]);
    }
    if (inverse) {
      butterflies<true>(x.data());
    } else {
      butterflies<false>(x.data());
    }
  }

 private:
  template <bool Inverse>
  void butterflies(cplx* x) const {
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        cplx* lo = x + start;
        cplx* hi = lo + half;
        for (std::size_t k = 0; k < half; ++k) {
          const cplx w = twiddle_[k * stride];
          const double wr = w.real(), wi = Inverse ? -w.imag() : w.imag();
          const double br = hi[k].real() * wr - hi[k].imag() * wi;
          const double bi = hi[k].real() * wi + hi[k].imag() * wr;
          const cplx a = lo[k];
          lo[k] = {a.real() + br, a.imag() + bi};
          hi[k] = {a.real() - br, a.imag() - bi};
        }
      }
    }
  }

  std::size_t n_;
  std::vector<cplx> twiddle_;
  std::vector<std::uint32_t> bitrev_;
};

}  // namespace detail

/// Precomputed transform of one length. Immutable after construction, so a
/// single plan may be shared by concurrent callers as long as each brings its
/// own scratch buffer.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: length must be positive");
    if (std::has_single_bit(n)) {
      radix2_ = std::make_shared<detail::Radix2>(n);
      return;
    }
    const std::size_t m = std::bit_ceil(2 * n - 1);
    radix2_ = std::make_shared<detail::Radix2>(m);
    // chirp[k] = exp(-i*pi*k^2/N) = exp(-2*pi*i * k^2 / (2N))
    chirp_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<std::uint64_t>(k);
      chirp_[k] = detail::unit_root(kk * kk, 2 * static_cast<std::uint64_t>(n), -1.0);
    }
    // Transformed conjugate chirp, laid out circularly for the convolution.
    kernel_.assign(m, cplx{});
    kernel_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel_[k] = std::conj(chirp_[k]);
      kernel_[m - k] = std::conj(chirp_[k]);
    }
    radix2_->run(kernel_, false);
  }

  std::size_t size() const { return n_; }

  /// Scratch length needed by forward(); zero for power-of-two plans.
  std::size_t scratch_size() const { return chirp_.empty() ? 0 : radix2_->size(); }

  void forward(std::span<cplx> x, std::vector<cplx>& scratch) const {
    if (x.size() != n_) throw std::invalid_argument("FftPlan: length mismatch");
    if (chirp_.empty()) {
      radix2_->run(x, false);
      return;
    }
    const std::size_t m = radix2_->size();
    scratch.assign(m, cplx{});
    for (std::size_t k = 0; k < n_; ++k) scratch[k] = x[k] * chirp_[k];
    radix2_->run(scratch, false);
    for (std::size_t k = 0; k < m; ++k) scratch[k] *= kernel_[k];
    radix2_->run(scratch, true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n_; ++k) x[k] = scratch[k] * chirp_[k] * inv_m;
  }

  void forward(std::span<cplx> x) const {
    std::vector<cplx> scratch;
    forward(x, scratch);
  }

 private:
  std::size_t n_;
  std::shared_ptr<const detail::Radix2> radix2_;
  std::vector<cplx> chirp_;
  std::vector<cplx> kernel_;
};

}  // namespace prradar
