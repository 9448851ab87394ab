#pragma once

// Statistical and exact checks of the probabilistic facts behind the
// detection guarantee:
//
//   slice largeness      P(|alpha_1| < eps) <= sqrt(4r/pi) * eps, alpha uniform on S_C^{r-1}
//   intersectivity       P(E_k) >= 1 - r^-d for all k  =>  P(at least n(r,d) of the E_k) >= 1 - r^(-d/2)
//   almost orthogonality |<alpha, z_j>| <= C r^d / sqrt(N) for all j, w.p. >= 1 - exp(-beta r^(2d))
//   sqrt cancellation    |<W, u_j>| <= N^(-1/2 + eps) for all j simultaneously
//
// Each check returns an OracleReport; the verdict is
//   pass  <=>  empirical rate <= claimed bound + 3 * binomial stderr,
// where the stderr is taken under the claimed bound (zero for exact checks).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prradar/channel.hpp"
#include "prradar/random.hpp"
#include "prradar/sequence.hpp"

namespace prradar {

struct OracleReport {
  std::string lemma;
  nlohmann::json parameters = nlohmann::json::object();
  std::size_t samples = 0;
  std::size_t violations = 0;
  double empirical_rate = 0.0;
  double claimed_bound = 0.0;
  double stderr_at_bound = 0.0;
  bool passed = false;
  std::uint64_t seed = 0;
  std::string note;
};

inline double binomial_stderr(double p, std::size_t samples) {
  const double q = std::clamp(p, 0.0, 1.0);
  return samples ? std::sqrt(q * (1.0 - q) / static_cast<double>(samples)) : 0.0;
}

inline void finalize(OracleReport& rep) {
  rep.empirical_rate =
      rep.samples ? static_cast<double>(rep.violations) / static_cast<double>(rep.samples) : 0.0;
  rep.stderr_at_bound = binomial_stderr(rep.claimed_bound, rep.samples);
  rep.passed = rep.empirical_rate <= rep.claimed_bound + 3.0 * rep.stderr_at_bound;
}

// ---------------------------------------------------------------------------
// Largeness of a slice

/// Draws one attenuation vector. The default is the uniform law on S_C^{r-1};
/// other samplers exist to show the oracle rejects non-uniform laws.
using SphereSampler = std::function<std::vector<cplx>(std::size_t r, Engine& rng)>;

inline SphereSampler uniform_sphere_sampler() {
  return [](std::size_t r, Engine& rng) { return sample_unit_sphere(r, rng); };
}

/// Shrinks the first Gaussian coordinate by `bias` before normalizing.
inline SphereSampler coordinate_biased_sampler(double bias) {
  return [bias](std::size_t r, Engine& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> z(r);
    double norm2 = 0.0;
    for (std::size_t k = 0; k < r; ++k) {
      const double s = k == 0 ? bias : 1.0;
      z[k] = {s * gauss(rng), s * gauss(rng)};
      norm2 += std::norm(z[k]);
    }
    for (cplx& v : z) v /= std::sqrt(norm2);
    return z;
  };
}

inline constexpr std::size_t kSliceMinSparsity = 8;

inline OracleReport oracle_slice_largeness(std::size_t r, double epsilon, std::size_t samples,
                                           std::uint64_t seed,
                                           const SphereSampler& sampler = uniform_sphere_sampler()) {
  if (r < kSliceMinSparsity) {
    throw std::invalid_argument("slice oracle: the explicit bound is only checked for r >= 8 (got r = " +
                                std::to_string(r) + ")");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("slice oracle: epsilon must be positive");
  if (samples < 1000) throw std::invalid_argument("slice oracle: need at least 1000 samples");

  OracleReport rep;
  rep.lemma = "slice";
  rep.seed = seed;
  rep.samples = samples;
  rep.parameters = {{"r", r}, {"epsilon", epsilon}};
  rep.claimed_bound = std::sqrt(4.0 * static_cast<double>(r) / std::numbers::pi) * epsilon;
  if (rep.claimed_bound >= 1.0) rep.note = "degenerate: bound >= 1 holds trivially";

  Engine rng = make_engine(seed, SeedDomain::oracle);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::vector<cplx> alpha = sampler(r, rng);
    if (std::abs(alpha[0]) < epsilon) ++rep.violations;
  }
  finalize(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Intersectivity

/// Finite probability space with `atoms` atoms and `events` events; holds[a * events + k]
/// says whether atom a lies in event k.
struct EventTable {
  std::vector<double> weights;
  std::size_t events = 0;
  std::vector<std::uint8_t> holds;

  std::size_t atoms() const { return weights.size(); }
  bool at(std::size_t atom, std::size_t event) const { return holds[atom * events + event] != 0; }

  double event_probability(std::size_t k) const {
    double p = 0.0;
    for (std::size_t a = 0; a < atoms(); ++a) {
      if (at(a, k)) p += weights[a];
    }
    return p;
  }
};

inline std::size_t intersect_count(std::size_t r, double delta) {
  const double rr = static_cast<double>(r);
  return static_cast<std::size_t>(std::floor((1.0 - std::pow(rr, -delta / 2.0)) * rr + 1e-12));
}

inline double intersect_hypothesis(std::size_t r, double delta) {
  return 1.0 - std::pow(static_cast<double>(r), -delta);
}

inline double intersect_conclusion(std::size_t r, double delta) {
  return 1.0 - std::pow(static_cast<double>(r), -delta / 2.0);
}

/// P(atom lies in at least n(r, delta) events), by enumeration.
inline double intersect_probability(const EventTable& table, std::size_t need) {
  double p = 0.0;
  for (std::size_t a = 0; a < table.atoms(); ++a) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < table.events; ++k) c += table.at(a, k);
    if (c >= need) p += table.weights[a];
  }
  return p;
}

inline void require_admissible(const EventTable& table, std::size_t r, double delta) {
  if (table.events != r) throw std::invalid_argument("intersect oracle: table must have r event columns");
  if (table.holds.size() != table.atoms() * r) throw std::invalid_argument("intersect oracle: table shape mismatch");
  double total = 0.0;
  for (double w : table.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("intersect oracle: atom weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("intersect oracle: atom weights must sum to 1");
  const double floor_p = intersect_hypothesis(r, delta);
  for (std::size_t k = 0; k < r; ++k) {
    if (table.event_probability(k) < floor_p - 1e-12) {
      throw std::invalid_argument("intersect oracle: hypothesis violated, P(E_" + std::to_string(k + 1) +
                                  ") < 1 - r^-delta");
    }
  }
}

/// Exact check on one explicit table. Inadmissible tables are rejected, never failed.
inline OracleReport oracle_intersectivity(std::size_t r, double delta, const EventTable& table) {
  if (r < 1 || !(delta > 0.0)) throw std::invalid_argument("intersect oracle: need r >= 1 and delta > 0");
  require_admissible(table, r, delta);
  OracleReport rep;
  rep.lemma = "intersect";
  rep.samples = 1;
  const std::size_t need = intersect_count(r, delta);
  const double p = intersect_probability(table, need);
  rep.parameters = {{"r", r}, {"delta", delta}, {"atoms", table.atoms()}, {"n_required", need},
                    {"p_event", p}, {"lower_bound", intersect_conclusion(r, delta)}};
  rep.violations = p < intersect_conclusion(r, delta) - 1e-12 ? 1 : 0;
  rep.claimed_bound = 0.0;
  finalize(rep);
  return rep;
}

/// Random admissible table. Each event gives up a failure budget of r^-delta;
/// half the events spend it on random atoms, the rest pile failures onto atoms
/// that are closest to dropping out of E, which is where counterexamples would live.
inline EventTable random_admissible_table(std::size_t r, double delta, std::size_t atoms, Engine& rng) {
  EventTable t;
  t.events = r;
  t.weights.resize(atoms);
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  for (double& w : t.weights) total += (w = expo(rng));
  for (double& w : t.weights) w /= total;
  t.holds.assign(atoms * r, 1);

  const double budget = std::pow(static_cast<double>(r), -delta);
  const std::size_t need = intersect_count(r, delta);
  const std::size_t drop_at = r - need + 1;  // failures that push an atom out of E
  std::vector<std::size_t> failures(atoms, 0);
  std::vector<std::size_t> order(atoms);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < r; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    if (coin(rng)) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const bool ca = failures[a] < drop_at, cb = failures[b] < drop_at;
        if (ca != cb) return ca;
        return failures[a] > failures[b];
      });
    }
    double spent = 0.0;
    for (std::size_t a : order) {
      if (spent + t.weights[a] <= budget) {
        spent += t.weights[a];
        t.holds[a * r + k] = 0;
        ++failures[a];
      }
    }
  }
  return t;
}

/// Randomized counterexample search; every table is checked exactly.
inline OracleReport oracle_intersectivity_search(std::size_t r, double delta, std::size_t atoms,
                                                 std::size_t tables, std::uint64_t seed) {
  if (r < 1 || !(delta > 0.0) || atoms == 0 || tables == 0) {
    throw std::invalid_argument("intersect search: need r >= 1, delta > 0, atoms >= 1, tables >= 1");
  }
  OracleReport rep;
  rep.lemma = "intersect";
  rep.seed = seed;
  rep.samples = tables;
  const std::size_t need = intersect_count(r, delta);
  const double lower = intersect_conclusion(r, delta);
  double worst = 1.0;
  Engine rng = make_engine(seed, SeedDomain::oracle);
  for (std::size_t i = 0; i < tables; ++i) {
    const EventTable t = random_admissible_table(r, delta, atoms, rng);
    require_admissible(t, r, delta);
    const double p = intersect_probability(t, need);
    worst = std::min(worst, p);
    if (p < lower - 1e-12) ++rep.violations;
  }
  rep.parameters = {{"r", r}, {"delta", delta}, {"atoms", atoms}, {"n_required", need},
                    {"lower_bound", lower}, {"worst_p_event", worst}};
  rep.claimed_bound = 0.0;
  finalize(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Almost orthogonality

/// beta-hat for the failure bound exp(-beta r^(2 delta)). Pilot: r=64, delta=0.25,
/// l=1, C=1, N=256 fails about 1.4% of draws (exact union estimate
/// 64 * (7/8)^63 = 0.0142), i.e. beta ~ 0.53; rounded down to 0.5.
inline constexpr double kOrthogonalityBetaHat = 0.5;

/// Random directions scaled to norm C * sqrt(r / N).
inline std::vector<std::vector<cplx>> orthogonality_test_vectors(std::size_t r, std::size_t count, double c_bound,
                                                                 std::size_t n, std::uint64_t seed) {
  Engine rng = make_engine(seed, SeedDomain::oracle_vectors);
  const double scale = c_bound * std::sqrt(static_cast<double>(r) / static_cast<double>(n));
  std::vector<std::vector<cplx>> zs;
  zs.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    auto z = sample_unit_sphere(r, rng);
    for (cplx& v : z) v *= scale;
    zs.push_back(std::move(z));
  }
  return zs;
}

inline OracleReport oracle_almost_orthogonality_with(const std::vector<std::vector<cplx>>& vectors, std::size_t r,
                                                     double delta, double c_bound, std::size_t n,
                                                     std::size_t samples, std::uint64_t seed,
                                                     double beta_hat = kOrthogonalityBetaHat) {
  if (r < 1 || n < 1 || samples == 0) throw std::invalid_argument("orth oracle: need r, N, samples >= 1");
  const double limit2 = c_bound * c_bound * static_cast<double>(r) / static_cast<double>(n) * (1.0 + 1e-12);
  for (const auto& z : vectors) {
    if (z.size() != r) throw std::invalid_argument("orth oracle: test vectors must have length r");
    double s = 0.0;
    for (const cplx& v : z) s += std::norm(v);
    if (s > limit2) throw std::invalid_argument("orth oracle: test vector exceeds sum |z_k|^2 <= C^2 r / N");
  }
  OracleReport rep;
  rep.lemma = "orth";
  rep.seed = seed;
  rep.samples = samples;
  const double bound = c_bound * std::pow(static_cast<double>(r), delta) / std::sqrt(static_cast<double>(n));
  rep.claimed_bound = std::exp(-beta_hat * std::pow(static_cast<double>(r), 2.0 * delta));
  rep.parameters = {{"r", r}, {"delta", delta}, {"C", c_bound}, {"N", n}, {"vectors", vectors.size()},
                    {"inner_product_bound", bound}, {"beta_hat", beta_hat}};
  Engine rng = make_engine(seed, SeedDomain::oracle);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto alpha = sample_unit_sphere(r, rng);
    for (const auto& z : vectors) {
      cplx ip{};
      for (std::size_t k = 0; k < r; ++k) ip += std::conj(alpha[k]) * z[k];
      if (std::abs(ip) > bound) {
        ++rep.violations;
        break;
      }
    }
  }
  finalize(rep);
  return rep;
}

inline constexpr std::size_t kDefaultVectorBudget = 1u << 20;

inline OracleReport oracle_almost_orthogonality(std::size_t r, double delta, double ell, double c_bound,
                                                std::size_t n, std::size_t samples, std::uint64_t seed,
                                                double beta_hat = kOrthogonalityBetaHat,
                                                std::size_t vector_budget = kDefaultVectorBudget) {
  if (!(ell > 0.0)) throw std::invalid_argument("orth oracle: ell must be positive");
  const double count = std::round(std::pow(static_cast<double>(r), ell));
  if (count > static_cast<double>(vector_budget)) {
    throw std::invalid_argument("orth oracle: r^ell = " + std::to_string(count) + " test vectors exceeds budget " +
                                std::to_string(vector_budget));
  }
  const auto zs = orthogonality_test_vectors(r, static_cast<std::size_t>(count), c_bound, n, seed);
  OracleReport rep = oracle_almost_orthogonality_with(zs, r, delta, c_bound, n, samples, seed, beta_hat);
  rep.parameters["ell"] = ell;
  return rep;
}

// ---------------------------------------------------------------------------
// Square-root cancellation

inline OracleReport oracle_sqrt_cancellation(std::size_t n, const NoiseModel& noise, double epsilon,
                                             std::size_t num_vectors, std::size_t samples, std::uint64_t seed) {
  if (n < 1 || samples == 0) throw std::invalid_argument("noise oracle: need N >= 1 and samples >= 1");
  if (num_vectors == 0 || num_vectors > n * n) {
    throw std::invalid_argument("noise oracle: need 1 <= num_vectors <= N^2");
  }
  OracleReport rep;
  rep.lemma = "noise";
  rep.seed = seed;
  rep.samples = samples;
  const double bound = std::pow(static_cast<double>(n), -0.5 + epsilon);
  rep.parameters = {{"N", n}, {"snr_db", noise.enabled ? nlohmann::json(noise.snr_db) : nlohmann::json(nullptr)},
                    {"epsilon", epsilon}, {"num_vectors", num_vectors}, {"inner_product_bound", bound}};
  rep.claimed_bound = 0.0;

  Engine vec_rng = make_engine(seed, SeedDomain::oracle_vectors);
  std::vector<std::vector<cplx>> us;
  us.reserve(num_vectors);
  for (std::size_t j = 0; j < num_vectors; ++j) us.push_back(sample_unit_sphere(n, vec_rng));

  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const Sequence w = draw_noise(n, noise, derive_seed(seed, SeedDomain::oracle, i));
    bool violated = false;
    for (const auto& u : us) {
      cplx ip{};
      for (std::size_t k = 0; k < n; ++k) ip += std::conj(u[k]) * w[k];
      const double m = std::abs(ip);
      worst = std::max(worst, m);
      if (m > bound) violated = true;
    }
    if (violated) ++rep.violations;
  }
  rep.parameters["max_inner_product"] = worst;
  finalize(rep);
  return rep;
}

}  // namespace prradar
