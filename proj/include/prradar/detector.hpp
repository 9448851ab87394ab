#pragma once

// The pseudo-random detection method: compute A(S, R) over all of V and keep
// every cell with |A| >= N^(-1/2 + delta). Ground truth only enters through
// classify() and the per-target diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "prradar/ambiguity.hpp"
#include "prradar/channel.hpp"
#include "prradar/sequence.hpp"

namespace prradar {

struct DetectorConfig {
  double delta = 0.125;
  std::optional<double> threshold_override;

  void validate() const {
    if (!(delta > 0.0 && delta < 0.5)) {
      throw std::invalid_argument("detector delta must lie in (0, 1/2) (got " +
                                  std::to_string(delta) + ")");
    }
    if (threshold_override && !(*threshold_override >= 0.0)) {
      throw std::invalid_argument("detector threshold override must be nonnegative");
    }
  }

  double threshold(std::size_t n) const {
    if (threshold_override) return *threshold_override;
    return std::pow(static_cast<double>(n), -0.5 + delta);
  }
};

/// Detector parameter used for a sparsity regime r <= N^(1 - regime_delta).
inline double detector_delta_for_regime(double regime_delta) { return regime_delta / 4.0; }

/// Cells of an already computed grid at or above the threshold, in (tau, omega) order.
inline std::vector<TimeFreqShift> detect_in_grid(const AmbiguityGrid& grid, const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t n = grid.size();
  const double thr = cfg.threshold(n);
  std::vector<TimeFreqShift> hits;
  for (std::size_t tau = 0; tau < n; ++tau) {
    const auto row = grid.row(tau);
    for (std::size_t omega = 0; omega < n; ++omega) {
      if (std::abs(row[omega]) >= thr) hits.push_back({tau, omega});
    }
  }
  return hits;
}

inline std::vector<TimeFreqShift> detect(const Sequence& s, const Sequence& echo,
                                         const DetectorConfig& cfg, const FftPlan& plan,
                                         unsigned threads = 1) {
  if (s.size() != echo.size()) throw std::invalid_argument("detect: length mismatch");
  cfg.validate();
  require_unit_norm(s, "detect");
  return detect_in_grid(ambiguity_fast(s, echo, plan, threads), cfg);
}

inline std::vector<TimeFreqShift> detect(const Sequence& s, const Sequence& echo,
                                         const DetectorConfig& cfg, unsigned threads = 1) {
  return detect(s, echo, cfg, FftPlan(s.size()), threads);
}

/// Split of A(S, R)(v_k) into alpha_k, the cross term c_k and the noise term nu_k.
struct TermDecomposition {
  cplx main;
  cplx cross;
  cplx noise;

  cplx total() const { return main + cross + noise; }
};

inline TermDecomposition decompose_terms(const Sequence& s, const ChannelParams& truth,
                                         const Sequence& noise_w, std::size_t k) {
  if (k >= truth.targets.size()) {
    throw std::invalid_argument("decompose_terms: target index " + std::to_string(k) +
                                " out of range (r = " + std::to_string(truth.targets.size()) + ")");
  }
  if (s.size() != truth.n_len || noise_w.size() != truth.n_len) {
    throw std::invalid_argument("decompose_terms: length mismatch");
  }
  const Sequence probe = shift_apply(truth.targets[k].shift, s);
  TermDecomposition d{truth.targets[k].alpha, {}, {}};
  for (std::size_t j = 0; j < truth.targets.size(); ++j) {
    if (j == k) continue;
    d.cross += truth.targets[j].alpha * inner(probe, shift_apply(truth.targets[j].shift, s));
  }
  d.noise = inner(probe, noise_w);
  return d;
}

struct TargetDiagnostics {
  TimeFreqShift shift;
  double main = 0.0;
  double cross = 0.0;
  double noise = 0.0;
  bool detected = false;
};

struct DetectionReport {
  std::vector<TimeFreqShift> detected;
  std::size_t n_true = 0;
  std::size_t n_false = 0;
  std::vector<TargetDiagnostics> per_target;
};

/// Set-based attribution: a detection counts as true iff it lands on a support cell.
inline DetectionReport classify(const std::vector<TimeFreqShift>& detected, const ChannelParams& truth) {
  const std::vector<TimeFreqShift> supp = truth.support();
  const std::set<TimeFreqShift> support(supp.begin(), supp.end());
  DetectionReport report;
  const std::set<TimeFreqShift> unique(detected.begin(), detected.end());
  report.detected.assign(unique.begin(), unique.end());
  for (const TimeFreqShift& v : report.detected) {
    if (support.count(v)) {
      ++report.n_true;
    } else {
      ++report.n_false;
    }
  }
  return report;
}

/// classify() plus the per-target |alpha_k|, |c_k|, |nu_k| magnitudes.
inline DetectionReport classify_with_diagnostics(const std::vector<TimeFreqShift>& detected,
                                                 const ChannelParams& truth, const Sequence& s,
                                                 const Sequence& noise_w) {
  DetectionReport report = classify(detected, truth);
  const std::set<TimeFreqShift> hits(report.detected.begin(), report.detected.end());
  for (std::size_t k = 0; k < truth.targets.size(); ++k) {
    const TermDecomposition d = decompose_terms(s, truth, noise_w, k);
    report.per_target.push_back({truth.targets[k].shift, std::abs(d.main), std::abs(d.cross),
                                 std::abs(d.noise), hits.count(truth.targets[k].shift) > 0});
  }
  return report;
}

}  // namespace prradar
