#pragma once

// Monte Carlo estimation of the probability of detection
//   P_D  = E[N_t] / r
// and the expected number of false targets
//   E_FT = E[N_f]
// for the pseudo-random detection method, plus (N, r) sweeps.
//
// Every trial is a pure function of (master_seed, trial index). Outcomes are
// stored per trial and reduced with integer sums, so the estimates do not
// depend on how many worker threads ran the trials.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "prradar/channel.hpp"
#include "prradar/detector.hpp"
#include "prradar/fft.hpp"
#include "prradar/parallel.hpp"
#include "prradar/pseudo_random.hpp"
#include "prradar/random.hpp"
#include "prradar/sequence.hpp"

namespace prradar {

struct TrialConfig {
  std::size_t n_len = 61;
  std::size_t r = 1;
  NoiseModel noise{};
  double regime_delta = 0.5;
  SequenceKind seq_kind = SequenceKind::alltop;
  std::uint64_t master_seed = 0;

  double detector_delta() const { return detector_delta_for_regime(regime_delta); }

  void validate() const {
    if (n_len == 0) throw std::invalid_argument("trial: N must be positive");
    if (r == 0 || r > n_len * n_len) throw std::invalid_argument("trial: need 1 <= r <= N^2");
    if (!(regime_delta > 0.0 && regime_delta < 1.0)) {
      throw std::invalid_argument("trial: regime delta must lie in (0, 1)");
    }
    if (seq_kind == SequenceKind::alltop && (n_len < 5 || !is_prime(n_len))) {
      throw std::invalid_argument("alltop requires prime N >= 5 (got N = " + std::to_string(n_len) + ")");
    }
  }
};

/// r at the boundary of the regime r <= N^(1 - delta).
inline std::size_t sparsity_for_regime(std::size_t n, double regime_delta) {
  const double r = std::floor(std::pow(static_cast<double>(n), 1.0 - regime_delta) + 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(r));
}

struct TrialOutcome {
  std::size_t n_true = 0;
  std::size_t n_false = 0;

  bool operator==(const TrialOutcome&) const = default;
};

/// Probing sequence and transform plan shared by all trials of one configuration.
class TrialContext {
 public:
  explicit TrialContext(TrialConfig cfg)
      : cfg_((cfg.validate(), cfg)),
        probe_(make_sequence(cfg_.seq_kind, cfg_.n_len,
                             derive_seed(cfg_.master_seed, SeedDomain::sequence, cfg_.n_len))),
        plan_(cfg_.n_len) {}

  const TrialConfig& config() const { return cfg_; }
  const Sequence& probe() const { return probe_; }
  const FftPlan& plan() const { return plan_; }

  std::uint64_t trial_seed(std::uint64_t trial_index) const {
    return derive_seed(cfg_.master_seed, SeedDomain::trial, trial_index);
  }

  TrialOutcome run(std::uint64_t trial_index) const {
    const std::uint64_t seed = trial_seed(trial_index);
    const ChannelParams channel = sample_channel(cfg_.n_len, cfg_.r, seed);
    const Sequence echo = synthesize_echo(channel, probe_, cfg_.noise, seed);
    const DetectorConfig det{cfg_.detector_delta(), std::nullopt};
    const DetectionReport rep = classify(detect(probe_, echo, det, plan_), channel);
    return {rep.n_true, rep.n_false};
  }

 private:
  TrialConfig cfg_;
  Sequence probe_;
  FftPlan plan_;
};

inline TrialOutcome run_trial(const TrialConfig& cfg, std::uint64_t trial_index) {
  return TrialContext(cfg).run(trial_index);
}

struct SweepRow {
  std::size_t n_len = 0;
  std::size_t r = 0;
  std::size_t trials = 0;
  double pd = 0.0;
  std::optional<double> pd_stderr;
  double eft = 0.0;
  std::optional<double> eft_stderr;
  double ms_per_trial = 0.0;
  double b_constant = 0.0;  // certified B of the probing sequence
};

/// Point estimates and standard errors from per-trial counts.
inline SweepRow estimate_from_outcomes(std::span<const TrialOutcome> outcomes, std::size_t r) {
  if (outcomes.empty()) throw std::invalid_argument("estimate: need at least one trial");
  if (r == 0) throw std::invalid_argument("estimate: r must be positive");
  std::uint64_t st = 0, st2 = 0, sf = 0, sf2 = 0;
  for (const TrialOutcome& o : outcomes) {
    if (o.n_true > r) throw std::invalid_argument("estimate: N_t exceeds r");
    st += o.n_true;
    st2 += static_cast<std::uint64_t>(o.n_true) * o.n_true;
    sf += o.n_false;
    sf2 += static_cast<std::uint64_t>(o.n_false) * o.n_false;
  }
  const auto t = static_cast<long double>(outcomes.size());
  const auto rr = static_cast<long double>(r);
  SweepRow row;
  row.r = r;
  row.trials = outcomes.size();
  row.pd = static_cast<double>(static_cast<long double>(st) / (rr * t));
  row.eft = static_cast<double>(static_cast<long double>(sf) / t);
  if (outcomes.size() > 1) {
    auto stderr_of = [t](std::uint64_t s, std::uint64_t s2, long double scale) {
      const long double sl = s, s2l = s2;
      long double var = (s2l - sl * sl / t) / (t - 1.0L);
      if (var < 0.0L) var = 0.0L;
      return static_cast<double>(std::sqrt(var / t) / scale);
    };
    row.pd_stderr = stderr_of(st, st2, rr);
    row.eft_stderr = stderr_of(sf, sf2, 1.0L);
  }
  return row;
}

inline SweepRow estimate_metrics(const TrialConfig& cfg, std::size_t trials, unsigned threads = 1) {
  if (trials == 0) throw std::invalid_argument("estimate_metrics: trials must be at least 1");
  const TrialContext ctx(cfg);
  std::vector<TrialOutcome> outcomes(trials);
  std::vector<double> elapsed_ms(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    outcomes[i] = ctx.run(i);
    elapsed_ms[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  SweepRow row = estimate_from_outcomes(outcomes, cfg.r);
  row.n_len = cfg.n_len;
  double total = 0.0;
  for (double ms : elapsed_ms) total += ms;
  row.ms_per_trial = total / static_cast<double>(trials);
  row.b_constant = certify_pseudo_random(ctx.probe(), threads).b_constant;
  return row;
}

struct SweepConfig {
  double regime_delta = 0.5;
  std::vector<std::size_t> n_list;
  NoiseModel noise{};
  std::size_t trials = 200;
  SequenceKind seq_kind = SequenceKind::alltop;
  std::uint64_t master_seed = 0;
  std::optional<std::size_t> r_override;  // fixed r instead of floor(N^(1 - delta))

  void validate() const {
    if (n_list.empty()) throw std::invalid_argument("sweep: N list is empty");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
      if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("sweep: N list must be strictly ascending");
    }
    if (seq_kind == SequenceKind::alltop) {
      for (std::size_t n : n_list) {
        if (n < 5 || !is_prime(n)) {
          throw std::invalid_argument("alltop requires prime N >= 5 (got N = " + std::to_string(n) + ")");
        }
      }
    }
    if (trials == 0) throw std::invalid_argument("sweep: trials must be at least 1");
    if (r_override && *r_override == 0) throw std::invalid_argument("sweep: r must be at least 1");
  }

  TrialConfig trial_config(std::size_t n) const {
    TrialConfig t;
    t.n_len = n;
    t.r = r_override ? *r_override : sparsity_for_regime(n, regime_delta);
    t.noise = noise;
    t.regime_delta = regime_delta;
    t.seq_kind = seq_kind;
    t.master_seed = master_seed;
    return t;
  }
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

inline SweepReport sweep(const SweepConfig& cfg, unsigned threads = 1) {
  cfg.validate();
  SweepReport report{cfg, {}};
  for (std::size_t n : cfg.n_list) {
    report.rows.push_back(estimate_metrics(cfg.trial_config(n), cfg.trials, threads));
  }
  return report;
}

}  // namespace prradar
