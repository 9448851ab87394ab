#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "prradar/detector.hpp"
#include "prradar/io.hpp"
#include "support.hpp"

using namespace prradar;

TEST(Detect, SingleNoiselessTargetIsTheOnlyPeak) {
  const std::size_t n = 61;
  const Sequence s = gen_alltop(n);
  const ChannelParams truth{n, {{{3, 5}, 1.0}}};
  const Sequence echo = apply_channel(truth, s);
  const double thr = std::pow(61.0, -0.375);
  EXPECT_NEAR(thr, 0.214, 1e-3);
  EXPECT_LT(1.0 / std::sqrt(61.0), thr);

  const auto hits = detect(s, echo, DetectorConfig{0.125, std::nullopt});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0], (TimeFreqShift{3, 5}));

  // Brute-force grid: nothing else crosses, and the largest sidelobe is 1/sqrt(61).
  double max_other = 0.0;
  for (int tau = 0; tau < 61; ++tau) {
    for (int omega = 0; omega < 61; ++omega) {
      const double m = std::abs(test::ambiguity_ref(s, echo, tau, omega));
      if (tau == 3 && omega == 5) {
        EXPECT_NEAR(m, 1.0, 1e-12);
      } else {
        max_other = std::max(max_other, m);
      }
    }
  }
  EXPECT_NEAR(max_other, 1.0 / std::sqrt(61.0), 1e-9);
}

TEST(Detect, ZeroEchoGivesNothing) {
  EXPECT_TRUE(detect(gen_alltop(13), Sequence(13), DetectorConfig{0.125, std::nullopt}).empty());
}

TEST(Detect, TwoEqualTargetsBothFound) {
  const std::size_t n = 61;
  const Sequence s = gen_alltop(n);
  const double h = 1.0 / std::sqrt(2.0);
  const ChannelParams truth{n, {{{10, 20}, h}, {{40, 7}, h}}};
  const Sequence echo = apply_channel(truth, s);
  const Sequence zero(n);
  const double thr = std::pow(61.0, -0.375);
  for (std::size_t k = 0; k < 2; ++k) {
    const TermDecomposition d = decompose_terms(s, truth, zero, k);
    EXPECT_NEAR(std::abs(d.main), h, 1e-15);
    EXPECT_LE(std::abs(d.cross), h / std::sqrt(61.0) + 1e-12);
    EXPECT_GE(std::abs(d.main) - std::abs(d.cross), thr);
  }
  const auto hits = detect(s, echo, DetectorConfig{0.125, std::nullopt});
  const DetectionReport rep = classify(hits, truth);
  EXPECT_EQ(rep.n_true, 2u);
}

TEST(Detect, RejectsBadInput) {
  const Sequence s = gen_alltop(13);
  EXPECT_THROW(detect(s, Sequence(11), DetectorConfig{0.125, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(detect(s, s, DetectorConfig{0.0, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(detect(s, s, DetectorConfig{0.5, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(detect(s, s, DetectorConfig{-0.1, std::nullopt}), std::invalid_argument);
  Sequence loud = s;
  loud[0] *= 3.0;
  EXPECT_THROW(detect(loud, s, DetectorConfig{0.125, std::nullopt}), std::invalid_argument);
}

TEST(Detect, ThresholdIsInclusive) {
  const std::size_t n = 16;
  const DetectorConfig cfg{0.2, std::nullopt};
  const double thr = cfg.threshold(n);
  AmbiguityGrid grid(n);
  grid.at(5, 9) = thr;
  grid.at(2, 2) = std::nextafter(thr, 0.0);
  const auto hits = detect_in_grid(grid, cfg);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0], (TimeFreqShift{5, 9}));
}

TEST(Detect, DetectedSetShrinksAsDeltaGrows) {
  const std::size_t n = 61;
  const Sequence s = gen_alltop(n);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChannelParams truth = sample_channel(n, 8, seed);
    const Sequence echo = synthesize_echo(truth, s, NoiseModel{5.0, true}, seed);
    const AmbiguityGrid grid = ambiguity_fast(s, echo);
    std::set<TimeFreqShift> previous;
    bool first = true;
    for (double delta = 0.02; delta < 0.5; delta += 0.04) {
      const auto hits = detect_in_grid(grid, DetectorConfig{delta, std::nullopt});
      const std::set<TimeFreqShift> now(hits.begin(), hits.end());
      if (!first) {
        EXPECT_TRUE(std::includes(previous.begin(), previous.end(), now.begin(), now.end()));
      }
      previous = now;
      first = false;
    }
  }
}

TEST(Classify, SetArithmetic) {
  const ChannelParams truth{13, {{{1, 2}, 0.6}, {{3, 4}, 0.8}}};
  const auto supp = truth.support();

  DetectionReport all = classify(supp, truth);
  EXPECT_EQ(all.n_true, 2u);
  EXPECT_EQ(all.n_false, 0u);

  DetectionReport none = classify({}, truth);
  EXPECT_EQ(none.n_true, 0u);
  EXPECT_EQ(none.n_false, 0u);

  auto extra = supp;
  extra.push_back({0, 0});
  DetectionReport plus = classify(extra, truth);
  EXPECT_EQ(plus.n_true, 2u);
  EXPECT_EQ(plus.n_false, 1u);
  EXPECT_EQ(plus.n_true + plus.n_false, plus.detected.size());
}

TEST(Decompose, DegenerateTerms) {
  const std::size_t n = 13;
  const Sequence s = gen_alltop(n);
  const ChannelParams one{n, {{{2, 3}, cplx(0.0, 1.0)}}};
  const TermDecomposition d = decompose_terms(s, one, Sequence(n), 0);
  EXPECT_EQ(d.cross, cplx{});
  EXPECT_EQ(d.noise, cplx{});
  EXPECT_EQ(d.main, cplx(0.0, 1.0));
  EXPECT_THROW(decompose_terms(s, one, Sequence(n), 1), std::invalid_argument);
}

TEST(Decompose, TermsSumToMeasuredAmbiguity) {
  const std::size_t n = 32;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Sequence s = gen_random_phase(n, seed);
    const ChannelParams truth = sample_channel(n, 4, seed);
    const Sequence w = draw_noise(n, NoiseModel{10.0, true}, seed);
    Sequence echo = apply_channel(truth, s);
    for (std::size_t k = 0; k < n; ++k) echo[k] += w[k];
    const AmbiguityGrid grid = ambiguity_fast(s, echo);
    for (std::size_t k = 0; k < 4; ++k) {
      const TermDecomposition d = decompose_terms(s, truth, w, k);
      const TimeFreqShift v = truth.targets[k].shift;
      EXPECT_NEAR(std::abs(d.total() - grid.at(v)), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(d.total() - test::ambiguity_ref(s, echo, v.tau, v.omega)), 0.0, 1e-10);
    }
  }
}

TEST(Decompose, AlltopCrossTermWithinCauchySchwarz) {
  for (std::size_t n : {31u, 61u}) {
    const Sequence s = gen_alltop(n);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::size_t r = 2 + seed % 9;
      const ChannelParams truth = sample_channel(n, r, seed);
      for (std::size_t k = 0; k < r; ++k) {
        const double cross = std::abs(decompose_terms(s, truth, Sequence(n), k).cross);
        EXPECT_LE(cross, std::sqrt(static_cast<double>(r) / static_cast<double>(n)) + 1e-12);
      }
    }
  }
}

TEST(DetectionReportJson, CarriesCountsAndDiagnostics) {
  const std::size_t n = 13;
  const Sequence s = gen_alltop(n);
  const ChannelParams truth = sample_channel(n, 2, 4);
  const Sequence w = draw_noise(n, NoiseModel{}, 4);
  Sequence echo = apply_channel(truth, s);
  for (std::size_t k = 0; k < n; ++k) echo[k] += w[k];
  const auto rep = classify_with_diagnostics(detect(s, echo, DetectorConfig{0.1, std::nullopt}), truth, s, w);
  ASSERT_EQ(rep.per_target.size(), 2u);
  const json j = to_json(rep);
  EXPECT_EQ(j["n_true"].get<std::size_t>() + j["n_false"].get<std::size_t>(), j["detected"].size());
  EXPECT_EQ(j["per_target"].size(), 2u);
  EXPECT_NEAR(j["per_target"][0]["main"].get<double>(), std::abs(truth.targets[0].alpha), 1e-15);
}
