// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion 5   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "prradar/cli.hpp"

using namespace prradar;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

Sequence random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Sequence s(n);
  for (std::size_t k = 0; k < n; ++k) s[k] = {g(rng), g(rng)};
  const double norm = s.norm();
  for (std::size_t k = 0; k < n; ++k) s[k] /= norm;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion_1(Verdict& v) {
  std::mt19937_64 rng(1);
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Sequence f = random_unit(n, rng), g = random_unit(n, rng);
      worst = std::max(worst, ambiguity_fast(f, g).max_abs_diff(ambiguity_naive(f, g)));
    }
    v.check(worst <= 1e-9, "N=" + std::to_string(n) + " max|fast-naive|=" + fmt(worst, 3));
  }
  const double secs = seconds_since(t0);
  v.check(secs < 30.0, "runtime " + fmt(secs, 3) + " s");
}

void criterion_2(Verdict& v) {
  for (std::size_t n : {5u, 13u, 101u}) {
    const Sequence phi = gen_alltop(n);
    const PseudoRandomCert cert = certify_pseudo_random(phi);
    const AmbiguityGrid grid = ambiguity_fast(phi, phi);
    const double level = 1.0 / std::sqrt(static_cast<double>(n));
    std::size_t off_level = 0;
    for (std::size_t tau = 0; tau < n; ++tau) {
      for (std::size_t omega = 0; omega < n; ++omega) {
        if (tau == 0 && omega == 0) continue;
        const double m = std::abs(grid.at(tau, omega));
        if (!(m <= 1e-9 || std::abs(m - level) <= 1e-9)) ++off_level;
      }
    }
    v.check(std::abs(cert.b_constant - 1.0) <= 1e-9 && off_level == 0,
            "N=" + std::to_string(n) + " B=" + fmt(cert.b_constant, 12) + " cells off {0,1/sqrtN}=" +
                std::to_string(off_level));
  }
}

void criterion_3(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  for (double regime : {0.49, 0.2}) {
    SweepConfig c;
    c.regime_delta = regime;
    c.n_list = {5, 61, 257};
    c.trials = 100;
    c.r_override = 1;
    c.noise.enabled = false;
    c.master_seed = 3;
    for (const SweepRow& row : sweep(c).rows) {
      v.check(row.pd == 1.0 && row.eft == 0.0, "regime " + fmt(regime) + " N=" + std::to_string(row.n_len) +
                                                   " pd=" + fmt(row.pd) + " eft=" + fmt(row.eft));
    }
  }
  const double secs = seconds_since(t0);
  v.check(secs < 60.0, "runtime " + fmt(secs, 3) + " s");
}

void criterion_4(Verdict& v) {
  const std::size_t n = 32, r = 4;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Sequence s = gen_random_phase(n, derive_seed(4, SeedDomain::sequence, i));
    const std::uint64_t seed = derive_seed(4, SeedDomain::trial, i);
    const ChannelParams truth = sample_channel(n, r, seed);
    const Sequence w = draw_noise(n, NoiseModel{10.0, true}, seed);
    Sequence echo = apply_channel(truth, s);
    for (std::size_t k = 0; k < n; ++k) echo[k] += w[k];
    const AmbiguityGrid grid = ambiguity_fast(s, echo);
    for (std::size_t k = 0; k < r; ++k) {
      const TermDecomposition d = decompose_terms(s, truth, w, k);
      worst = std::max(worst, std::abs(d.total() - grid.at(truth.targets[k].shift)));
    }
  }
  v.check(worst <= 1e-10, "100 instances, max|main+cross+noise-A|=" + fmt(worst, 3));
}

void criterion_5(Verdict& v) {
  SweepConfig c;
  c.regime_delta = 0.5;
  c.n_list = {61, 127, 257, 521};
  c.trials = 200;
  c.noise = NoiseModel{10.0, true};
  c.master_seed = 5;
  const SweepReport rep = sweep(c);
  for (const SweepRow& row : rep.rows) {
    v.detail << (v.detail.tellp() > 0 ? "; " : "") << "N=" << row.n_len << " r=" << row.r << " pd=" << fmt(row.pd)
             << " eft=" << fmt(row.eft);
  }
  v.check(std::abs(c.trial_config(61).detector_delta() - 0.125) < 1e-15, "detector delta 0.125");
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const SweepRow& a = rep.rows[i];
    const SweepRow& b = rep.rows[i + 1];
    const double pooled = std::hypot(*a.pd_stderr, *b.pd_stderr);
    if (b.pd < a.pd - 2.0 * pooled) monotone = false;
  }
  v.check(monotone, "pd non-decreasing within 2 pooled stderr");
  const SweepRow& last = rep.rows.back();
  v.check(last.pd >= 0.9, "pd(521)=" + fmt(last.pd) + " >= 0.9");
  v.check(last.eft <= 0.1, "eft(521)=" + fmt(last.eft) + " <= 0.1");
}

void criterion_6(Verdict& v) {
  SweepConfig c;
  c.n_list = {61};
  c.trials = 200;
  c.noise = NoiseModel{10.0, true};
  c.master_seed = 6;
  c.r_override = static_cast<std::size_t>(std::floor(std::sqrt(61.0)));
  const double sparse = sweep(c).rows[0].pd;
  c.r_override = static_cast<std::size_t>(std::ceil(std::pow(61.0, 1.1)));
  const double dense = sweep(c).rows[0].pd;
  v.check(dense < sparse, "pd(r=93)=" + fmt(dense) + " < pd(r=7)=" + fmt(sparse));
}

void criterion_7(Verdict& v) {
  const OracleReport slice = oracle_slice_largeness(16, 0.01, 100000, 7);
  v.check(slice.passed, "slice rate " + fmt(slice.empirical_rate) + " vs " + fmt(slice.claimed_bound));
  const OracleReport inter = oracle_intersectivity_search(9, 1.0, 64, 10000, 7);
  v.check(inter.passed && inter.violations == 0,
          "intersect counterexamples " + std::to_string(inter.violations) + "/" + std::to_string(inter.samples));
  const OracleReport orth = oracle_almost_orthogonality(64, 0.25, 1.0, 1.0, 256, 10000, 7);
  v.check(orth.passed, "orth rate " + fmt(orth.empirical_rate) + " vs " + fmt(orth.claimed_bound));
  const OracleReport noise = oracle_sqrt_cancellation(256, NoiseModel{0.0, true}, 0.25, 1000, 100, 7);
  v.check(noise.passed, "noise eps=0.25 violations " + std::to_string(noise.violations));
  const OracleReport control = oracle_sqrt_cancellation(256, NoiseModel{0.0, true}, 0.0, 1000, 100, 7);
  v.check(!control.passed, "noise eps=0 control fails (" + std::to_string(control.violations) + " violations)");
}

std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_8(Verdict& v) {
  const fs::path dir = fs::temp_directory_path() / "prradar_acceptance_c8";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream sink, err;
  const std::string first = (dir / "first.csv").string();
  int code = cli::main({"sweep", "--n-list", "13,61,127", "--trials", "40", "--seed", "8", "--snr-db", "7", "--out",
                        first},
                       sink, err);
  v.check(code == 0, "initial sweep exit " + std::to_string(code));
  const std::string want = strip_timing(slurp(first));
  nlohmann::json want_rows = load_json(first + ".json")["rows"];
  for (auto& row : want_rows) row.erase("ms_per_trial");
  for (const char* threads : {"1", "4", "8"}) {
    const std::string replay = (dir / (std::string("replay") + threads + ".csv")).string();
    code = cli::main({"sweep", "--config", first + ".json", "--threads", threads, "--out", replay}, sink, err);
    nlohmann::json rows = load_json(replay + ".json")["rows"];
    for (auto& row : rows) row.erase("ms_per_trial");
    v.check(code == 0 && strip_timing(slurp(replay)) == want && rows == want_rows,
            std::string("replay at ") + threads + " threads identical");
  }
  fs::remove_all(dir);
}

double best_time(std::size_t n, int reps) {
  std::mt19937_64 rng(n);
  const Sequence f = random_unit(n, rng), g = random_unit(n, rng);
  const FftPlan plan(n);
  double best = 1e300;
  ambiguity_fast(f, g, plan, 1);  // warm-up: page in the grid allocation
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const AmbiguityGrid grid = ambiguity_fast(f, g, plan, 1);
    best = std::min(best, seconds_since(t0));
    if (grid.values().empty()) std::abort();
  }
  return best;
}

void criterion_9(Verdict& v) {
  const double t512 = best_time(512, 15);
  const double t1024 = best_time(1024, 15);
  v.check(t1024 < 10.0, "N=1024 grid " + fmt(t1024, 3) + " s");
  v.check(t1024 / t512 <= 5.0, "time(1024)/time(512)=" + fmt(t1024 / t512, 3));
}

const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> kCriteria = {
    {"fast ambiguity equals naive", criterion_1},
    {"Alltop sidelobes are exact", criterion_2},
    {"noiseless single target is exact", criterion_3},
    {"main + cross + noise decomposition", criterion_4},
    {"detection trend in N", criterion_5},
    {"degradation when r exceeds N", criterion_6},
    {"lemma oracles", criterion_7},
    {"sweep replay from sidecar", criterion_8},
    {"N=1024 grid runtime and scaling", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      const long k = std::strtol(argv[++i], nullptr, 10);
      if (k < 1 || k > static_cast<long>(kCriteria.size())) {
        std::cerr << "criterion must be 1.." << kCriteria.size() << '\n';
        return 1;
      }
      selected.push_back(static_cast<std::size_t>(k));
    } else {
      std::cerr << "usage: acceptance [--criterion k]\n";
      return 1;
    }
  }
  if (selected.empty()) {
    for (std::size_t k = 1; k <= kCriteria.size(); ++k) selected.push_back(k);
  }

  int failures = 0;
  for (std::size_t k : selected) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      kCriteria[k - 1].second(v);
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << k << ": " << (v.pass ? "PASS" : "FAIL") << "  " << kCriteria[k - 1].first << "  ("
              << v.detail.str() << "; " << fmt(seconds_since(t0), 3) << " s)" << std::endl;
    failures += !v.pass;
  }
  return failures ? 1 : 0;
}
