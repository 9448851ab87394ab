#pragma once

// Command-line front end: `prradar <seq|ambiguity|detect|sweep|lemmas> [flags]`.
//
// Exit status: 0 success, 1 input or I/O error, 2 an oracle verdict failed.
// Every command that writes a file also writes `<out>.json`, a sidecar holding
// the fully resolved configuration; `--config <sidecar>` replays it.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "prradar/ambiguity.hpp"
#include "prradar/channel.hpp"
#include "prradar/detector.hpp"
#include "prradar/io.hpp"
#include "prradar/montecarlo.hpp"
#include "prradar/oracles.hpp"
#include "prradar/pseudo_random.hpp"
#include "prradar/sequence.hpp"

namespace prradar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitOracleFailure = 2;

struct RunConfig {
  std::string command;  // seq | ambiguity | detect | sweep | lemmas

  std::size_t n = 61;
  SequenceKind seq_kind = SequenceKind::alltop;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";

  // seq
  bool certify = false;
  // ambiguity
  std::string probe_path;
  std::string echo_path;
  // detect, sweep
  double snr_db = 10.0;
  bool noiseless = false;
  double regime_delta = 0.5;
  std::optional<double> delta;  // detector parameter (detect) or lemma delta (lemmas)
  std::optional<std::size_t> r;
  std::string truth_path;
  std::string truth_out;
  std::vector<std::size_t> n_list{61, 127, 257, 521};
  std::size_t trials = 200;
  // lemmas
  std::string which;
  double epsilon = 0.0;
  double ell = 1.0;
  double c_bound = 1.0;
  std::size_t samples = 0;
  std::size_t num_vectors = 1000;
  std::size_t atoms = 64;
  std::size_t tables = 10000;
  double beta_hat = kOrthogonalityBetaHat;
  std::string table_path;

  NoiseModel noise() const { return {snr_db, !noiseless}; }
  double detector_delta() const { return delta ? *delta : detector_delta_for_regime(regime_delta); }
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = {{"command", c.command},   {"n", c.n},
                      {"seq", to_string(c.seq_kind)},
                      {"seed", c.seed},         {"format", c.format},
                      {"certify", c.certify},   {"probe", c.probe_path},
                      {"echo", c.echo_path},    {"snr_db", c.snr_db},
                      {"noiseless", c.noiseless}, {"regime_delta", c.regime_delta},
                      {"truth", c.truth_path},  {"n_list", c.n_list},
                      {"trials", c.trials},     {"which", c.which},
                      {"epsilon", c.epsilon},   {"ell", c.ell},
                      {"c_bound", c.c_bound},   {"samples", c.samples},
                      {"num_vectors", c.num_vectors}, {"atoms", c.atoms},
                      {"tables", c.tables},     {"beta_hat", c.beta_hat},
                      {"table", c.table_path}};
  j["delta"] = c.delta ? nlohmann::json(*c.delta) : nlohmann::json(nullptr);
  j["r"] = c.r ? nlohmann::json(*c.r) : nlohmann::json(nullptr);
  if (c.command == "detect" || c.command == "sweep") j["detector_delta"] = c.detector_delta();
  return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.n = j.at("n").get<std::size_t>();
  c.seq_kind = parse_sequence_kind(j.at("seq").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.format = j.at("format").get<std::string>();
  c.certify = j.at("certify").get<bool>();
  c.probe_path = j.at("probe").get<std::string>();
  c.echo_path = j.at("echo").get<std::string>();
  c.snr_db = j.at("snr_db").get<double>();
  c.noiseless = j.at("noiseless").get<bool>();
  c.regime_delta = j.at("regime_delta").get<double>();
  c.truth_path = j.at("truth").get<std::string>();
  c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
  c.trials = j.at("trials").get<std::size_t>();
  c.which = j.at("which").get<std::string>();
  c.epsilon = j.at("epsilon").get<double>();
  c.ell = j.at("ell").get<double>();
  c.c_bound = j.at("c_bound").get<double>();
  c.samples = j.at("samples").get<std::size_t>();
  c.num_vectors = j.at("num_vectors").get<std::size_t>();
  c.atoms = j.at("atoms").get<std::size_t>();
  c.tables = j.at("tables").get<std::size_t>();
  c.beta_hat = j.at("beta_hat").get<double>();
  c.table_path = j.at("table").get<std::string>();
  if (!j.at("delta").is_null()) c.delta = j.at("delta").get<double>();
  if (!j.at("r").is_null()) c.r = j.at("r").get<std::size_t>();
  return c;
}

struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;  // meaningful when config is empty
  std::string message;
};

namespace detail {

inline void require_prime_for_alltop(SequenceKind kind, std::size_t n) {
  if (kind == SequenceKind::alltop && (n < 5 || !is_prime(n))) {
    throw std::invalid_argument("alltop requires prime N (got --n " + std::to_string(n) + ")");
  }
}

/// Fills command-dependent defaults and checks cross-flag constraints.
inline void resolve(RunConfig& c, const std::vector<std::string>& given) {
  auto has = [&](const std::string& flag) {
    return std::find(given.begin(), given.end(), flag) != given.end();
  };
  if (c.threads == 0) throw std::invalid_argument("--threads must be at least 1");
  if (c.command == "seq") {
    if (c.format != "csv" && c.format != "bin") throw std::invalid_argument("--format must be csv or bin for seq");
    require_prime_for_alltop(c.seq_kind, c.n);
  } else if (c.command == "ambiguity") {
    if (c.probe_path.empty()) require_prime_for_alltop(c.seq_kind, c.n);
  } else if (c.command == "detect") {
    require_prime_for_alltop(c.seq_kind, c.n);
    if (!(c.regime_delta > 0.0 && c.regime_delta < 1.0)) throw std::invalid_argument("--regime-delta must lie in (0, 1)");
    DetectorConfig{c.detector_delta(), std::nullopt}.validate();
    if (!c.r && c.truth_path.empty()) c.r = sparsity_for_regime(c.n, c.regime_delta);
  } else if (c.command == "sweep") {
    if (!(c.regime_delta > 0.0 && c.regime_delta < 1.0)) throw std::invalid_argument("--regime-delta must lie in (0, 1)");
    SweepConfig sc;
    sc.n_list = c.n_list;
    sc.trials = c.trials;
    sc.seq_kind = c.seq_kind;
    sc.r_override = c.r;
    sc.validate();
    if (c.out.empty()) c.out = "sweep.csv";
  } else if (c.command == "lemmas") {
    if (c.which == "slice") {
      if (!c.r) c.r = 16;
      if (!has("--epsilon")) c.epsilon = 0.01;
      if (!has("--samples")) c.samples = 100000;
    } else if (c.which == "intersect") {
      if (!c.r) c.r = 9;
      if (!c.delta) c.delta = 1.0;
    } else if (c.which == "orth") {
      if (!c.r) c.r = 64;
      if (!c.delta) c.delta = 0.25;
      if (!has("--n")) c.n = 256;
      if (!has("--samples")) c.samples = 10000;
    } else if (c.which == "noise") {
      if (!has("--n")) c.n = 256;
      if (!has("--snr-db")) c.snr_db = 0.0;
      if (!has("--epsilon")) c.epsilon = 0.25;
      if (!has("--samples")) c.samples = 100;
    } else {
      throw std::invalid_argument("--which must be one of slice, intersect, orth, noise");
    }
  }
}

}  // namespace detail

inline ParseResult parse_args(const std::vector<std::string>& args) {
  RunConfig c;
  std::string seq_name = "alltop";
  std::string config_path;
  std::size_t r_value = 0;
  double delta_value = 0.0;

  CLI::App app{"Pseudo-random delay-Doppler detection: sequences, ambiguity grids, detection, Monte Carlo sweeps"};
  app.name("prradar");
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "sequence length N")->check(CLI::PositiveNumber);
    sub->add_option("--seq", seq_name, "probing sequence: alltop or random_phase")
        ->check(CLI::IsMember({"alltop", "random_phase", "random"}));
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--threads", c.threads, "worker threads (does not change results)");
    sub->add_option("--out", c.out, "output path");
    sub->add_option("--config", config_path, "replay a JSON sidecar written by a previous run");
  };

  CLI::App* seq = app.add_subcommand("seq", "generate a probing sequence");
  add_common(seq);
  seq->add_option("--format", c.format, "csv or bin");
  seq->add_flag("--certify", c.certify, "print the pseudo-random certificate");

  CLI::App* amb = app.add_subcommand("ambiguity", "compute an ambiguity grid");
  add_common(amb);
  amb->add_option("--probe", c.probe_path, "probe sequence file (.csv or .bin); default: generated");
  amb->add_option("--echo", c.echo_path, "second sequence file; default: the probe itself");

  CLI::App* det = app.add_subcommand("detect", "single-shot detection on a synthetic or given channel");
  add_common(det);
  det->add_option("--snr-db", c.snr_db, "signal-to-noise ratio in dB");
  det->add_flag("--noiseless", c.noiseless, "disable the additive noise");
  det->add_option("--regime-delta", c.regime_delta, "sparsity regime exponent; detector uses a quarter of it");
  det->add_option("--delta", delta_value, "detector parameter (overrides regime-delta / 4)");
  det->add_option("--r", r_value, "number of targets")->check(CLI::PositiveNumber);
  det->add_option("--truth", c.truth_path, "channel JSON to use instead of sampling one");
  det->add_option("--truth-out", c.truth_out, "write the channel used to this JSON file");

  CLI::App* swp = app.add_subcommand("sweep", "Monte Carlo estimates of P_D and E_FT over N");
  add_common(swp);
  swp->add_option("--n-list", c.n_list, "ascending list of N")->delimiter(',');
  swp->add_option("--trials", c.trials, "trials per N")->check(CLI::PositiveNumber);
  swp->add_option("--snr-db", c.snr_db, "signal-to-noise ratio in dB");
  swp->add_flag("--noiseless", c.noiseless, "disable the additive noise");
  swp->add_option("--regime-delta", c.regime_delta, "r = floor(N^(1 - delta)); detector uses delta / 4");
  swp->add_option("--r", r_value, "fixed r for every N instead of the regime value")->check(CLI::PositiveNumber);

  CLI::App* lem = app.add_subcommand("lemmas", "statistical checks of the supporting lemmata");
  add_common(lem);
  lem->add_option("--which", c.which, "slice | intersect | orth | noise")->required();
  lem->add_option("--r", r_value, "sparsity r")->check(CLI::PositiveNumber);
  lem->add_option("--delta", delta_value, "lemma exponent delta");
  lem->add_option("--epsilon", c.epsilon, "epsilon (slice, noise)");
  lem->add_option("--ell", c.ell, "r^ell test vectors (orth)");
  lem->add_option("--c-bound", c.c_bound, "constant C (orth)");
  lem->add_option("--samples", c.samples, "Monte Carlo draws");
  lem->add_option("--num-vectors", c.num_vectors, "unit test vectors (noise)");
  lem->add_option("--atoms", c.atoms, "atoms per random event table (intersect)");
  lem->add_option("--tables", c.tables, "random admissible tables to search (intersect)");
  lem->add_option("--table", c.table_path, "explicit event table JSON {weights, events} (intersect)");
  lem->add_option("--beta-hat", c.beta_hat, "calibrated beta for the exp(-beta r^(2 delta)) bound (orth)");
  lem->add_option("--snr-db", c.snr_db, "noise SNR in dB (noise)");
  lem->add_flag("--noiseless", c.noiseless, "noise switched off (noise)");

  std::vector<std::string> argv_store{"prradar"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  ParseResult result;
  std::ostringstream msg;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.exit_code = kExitOk;
    result.message = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.exit_code = kExitOk;
    result.message = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = kExitInputError;
    std::string text = e.what();
    if (args.empty()) text = "a subcommand is required\n\n" + app.help();
    result.message = "error: " + text;
    return result;
  }

  CLI::App* chosen = app.get_subcommands().front();
  std::vector<std::string> given;
  for (const CLI::Option* opt : chosen->get_options()) {
    if (opt->count() > 0) given.push_back(opt->get_name());
  }
  auto was_given = [&](const std::string& f) { return std::find(given.begin(), given.end(), f) != given.end(); };

  try {
    if (!config_path.empty()) {
      const std::string out_override = was_given("--out") ? c.out : std::string();
      const unsigned threads = c.threads;
      RunConfig loaded = run_config_from_json(load_json(config_path).at("config"));
      if (loaded.command != chosen->get_name()) {
        throw std::invalid_argument("--config sidecar is for '" + loaded.command + "', not '" + chosen->get_name() + "'");
      }
      loaded.threads = threads;
      if (!out_override.empty()) loaded.out = out_override;
      std::vector<std::string> all_given = {"--n", "--epsilon", "--samples", "--snr-db"};
      detail::resolve(loaded, all_given);
      result.config = loaded;
      return result;
    }
    c.command = chosen->get_name();
    c.seq_kind = parse_sequence_kind(seq_name);
    if (was_given("--r")) c.r = r_value;
    if (was_given("--delta")) c.delta = delta_value;
    detail::resolve(c, given);
    result.config = c;
  } catch (const std::exception& e) {
    result.exit_code = kExitInputError;
    result.message = std::string("error: ") + e.what();
  }
  return result;
}

namespace detail {

inline void write_sidecar(const RunConfig& c, nlohmann::json extra = nlohmann::json::object()) {
  if (c.out.empty()) return;
  nlohmann::json side = {{"config", to_json(c)}, {"master_seed", c.seed}};
  for (auto it = extra.begin(); it != extra.end(); ++it) side[it.key()] = it.value();
  save_text(c.out + ".json", side.dump(2) + "\n");
}

inline std::string grid_text(const AmbiguityGrid& g) {
  std::ostringstream os;
  write_grid_csv(os, g);
  return os.str();
}

inline int run_seq(const RunConfig& c, std::ostream& out) {
  const Sequence s = make_sequence(c.seq_kind, c.n, c.seed);
  nlohmann::json extra = nlohmann::json::object();
  if (c.certify) {
    const PseudoRandomCert cert = certify_pseudo_random(s, c.threads);
    extra["certificate"] = {{"b_constant", cert.b_constant},
                            {"max_offorigin", cert.max_offorigin},
                            {"n", cert.n_len},
                            {"argmax", to_json(cert.argmax)}};
    out << extra["certificate"].dump(2) << '\n';
  }
  if (c.out.empty()) {
    if (!c.certify) write_sequence_csv(out, s);
    return kExitOk;
  }
  save_sequence(c.out, s, c.format == "bin");
  write_sidecar(c, extra);
  return kExitOk;
}

inline int run_ambiguity(const RunConfig& c, std::ostream& out) {
  const Sequence probe = c.probe_path.empty() ? make_sequence(c.seq_kind, c.n, c.seed) : load_sequence(c.probe_path);
  const Sequence echo = c.echo_path.empty() ? probe : load_sequence(c.echo_path);
  if (probe.size() != echo.size()) throw std::invalid_argument("probe and echo lengths differ");
  const AmbiguityGrid grid = ambiguity_fast(probe, echo, c.threads);
  if (c.out.empty()) {
    write_grid_csv(out, grid);
    return kExitOk;
  }
  save_text(c.out, grid_text(grid));
  write_sidecar(c);
  return kExitOk;
}

inline int run_detect(const RunConfig& c, std::ostream& out) {
  const Sequence probe = make_sequence(c.seq_kind, c.n, derive_seed(c.seed, SeedDomain::sequence, c.n));
  const std::uint64_t trial_seed = derive_seed(c.seed, SeedDomain::trial, 0);
  const ChannelParams truth =
      c.truth_path.empty() ? sample_channel(c.n, *c.r, trial_seed) : channel_from_json(load_json(c.truth_path));
  if (truth.n_len != c.n) throw std::invalid_argument("truth channel N does not match --n");
  const NoiseModel noise = c.noise();
  const Sequence w = draw_noise(c.n, noise, trial_seed);
  Sequence echo = apply_channel(truth, probe);
  for (std::size_t k = 0; k < c.n; ++k) echo[k] += w[k];

  const DetectorConfig det{c.detector_delta(), std::nullopt};
  const auto hits = detect(probe, echo, det, c.threads);
  const DetectionReport rep = classify_with_diagnostics(hits, truth, probe, w);

  out << "N = " << c.n << ", r = " << truth.sparsity() << ", detector delta = " << det.delta
      << ", threshold = " << det.threshold(c.n) << '\n';
  out << "detected (" << rep.detected.size() << "):";
  for (const auto& v : rep.detected) out << " (" << v.tau << ',' << v.omega << ')';
  out << "\nN_t = " << rep.n_true << ", N_f = " << rep.n_false << '\n';
  out << "target  tau  omega  |alpha|  |cross|  |noise|  detected\n";
  for (std::size_t k = 0; k < rep.per_target.size(); ++k) {
    const auto& d = rep.per_target[k];
    out << k << "  " << d.shift.tau << "  " << d.shift.omega << "  " << d.main << "  " << d.cross << "  "
        << d.noise << "  " << (d.detected ? "yes" : "no") << '\n';
  }
  if (!c.truth_out.empty()) save_text(c.truth_out, to_json(truth).dump(2) + "\n");
  if (!c.out.empty()) {
    nlohmann::json j = to_json(rep);
    j["n"] = c.n;
    j["r"] = truth.sparsity();
    j["delta"] = det.delta;
    j["regime_delta"] = c.regime_delta;
    j["threshold"] = det.threshold(c.n);
    j["config"] = to_json(c);
    save_text(c.out, j.dump(2) + "\n");
    write_sidecar(c);
  }
  return kExitOk;
}

inline SweepConfig sweep_config(const RunConfig& c) {
  SweepConfig sc;
  sc.regime_delta = c.regime_delta;
  sc.n_list = c.n_list;
  sc.noise = c.noise();
  sc.trials = c.trials;
  sc.seq_kind = c.seq_kind;
  sc.master_seed = c.seed;
  sc.r_override = c.r;
  return sc;
}

inline int run_sweep(const RunConfig& c, std::ostream& out) {
  const SweepReport rep = sweep(sweep_config(c), c.threads);
  std::ostringstream csv;
  write_sweep_csv(csv, rep);
  save_text(c.out, csv.str());
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : rep.rows) rows.push_back(to_json(row));
  write_sidecar(c, {{"rows", rows}});
  out << csv.str();
  return kExitOk;
}

inline EventTable event_table_from_json(const nlohmann::json& j) {
  EventTable t;
  t.weights = j.at("weights").get<std::vector<double>>();
  const auto rows = j.at("events").get<std::vector<std::vector<int>>>();
  if (rows.size() != t.weights.size()) throw std::invalid_argument("event table: one events row per atom required");
  t.events = rows.empty() ? 0 : rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != t.events) throw std::invalid_argument("event table: ragged events rows");
    for (int v : row) t.holds.push_back(v != 0);
  }
  return t;
}

inline int run_lemmas(const RunConfig& c, std::ostream& out) {
  OracleReport rep;
  if (c.which == "slice") {
    rep = oracle_slice_largeness(*c.r, c.epsilon, c.samples, c.seed);
  } else if (c.which == "intersect") {
    if (!c.table_path.empty()) {
      rep = oracle_intersectivity(*c.r, *c.delta, event_table_from_json(load_json(c.table_path)));
    } else {
      rep = oracle_intersectivity_search(*c.r, *c.delta, c.atoms, c.tables, c.seed);
    }
  } else if (c.which == "orth") {
    rep = oracle_almost_orthogonality(*c.r, *c.delta, c.ell, c.c_bound, c.n, c.samples, c.seed, c.beta_hat);
  } else {
    rep = oracle_sqrt_cancellation(c.n, c.noise(), c.epsilon, c.num_vectors, c.samples, c.seed);
  }
  nlohmann::json j = to_json(rep);
  j["config"] = to_json(c);
  if (c.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    save_text(c.out, j.dump(2) + "\n");
    write_sidecar(c);
    out << rep.lemma << ": " << (rep.passed ? "pass" : "fail") << " (rate " << rep.empirical_rate << ", bound "
        << rep.claimed_bound << ")\n";
  }
  return rep.passed ? kExitOk : kExitOracleFailure;
}

}  // namespace detail

inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "seq") return detail::run_seq(c, out);
    if (c.command == "ambiguity") return detail::run_ambiguity(c, out);
    if (c.command == "detect") return detail::run_detect(c, out);
    if (c.command == "sweep") return detail::run_sweep(c, out);
    if (c.command == "lemmas") return detail::run_lemmas(c, out);
    err << "error: unknown command '" << c.command << "'\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInputError;
}

inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse_args(args);
  if (!parsed.config) {
    (parsed.exit_code == kExitOk ? out : err) << parsed.message << '\n';
    return parsed.exit_code;
  }
  return run(*parsed.config, out, err);
}

}  // namespace prradar::cli
