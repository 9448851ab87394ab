#pragma once

// File formats.
//
//   sequence CSV      index,re,im
//   sequence binary   little-endian float64 pairs (re, im), no header
//   ambiguity CSV     tau,omega,abs,re,im   (tau-major, N^2 rows)
//   channel JSON      {"n": N, "targets": [{"tau", "omega", "alpha_re", "alpha_im"}]}
//   sweep CSV         n,r,trials,pd,pd_stderr,eft,eft_stderr,ms_per_trial
//
// Doubles are written with 17 significant digits so text files round-trip exactly.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ios>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prradar/ambiguity.hpp"
#include "prradar/channel.hpp"
#include "prradar/detector.hpp"
#include "prradar/montecarlo.hpp"
#include "prradar/oracles.hpp"
#include "prradar/sequence.hpp"

namespace prradar {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::ostream& precise(std::ostream& os) {
  return os << std::setprecision(std::numeric_limits<double>::max_digits10);
}

inline std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError(where + ": bad number '" + s + "'");
  }
}

template <class T>
T byteswap_if_big(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    std::reverse(b.begin(), b.end());
    std::memcpy(&v, b.data(), sizeof(T));
  }
  return v;
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace detail

// --- sequences -------------------------------------------------------------

inline void write_sequence_csv(std::ostream& os, const Sequence& s) {
  detail::precise(os) << "index,re,im\n";
  for (std::size_t k = 0; k < s.size(); ++k) os << k << ',' << s[k].real() << ',' << s[k].imag() << '\n';
}

inline Sequence read_sequence_csv(std::istream& is, const std::string& name = "sequence") {
  std::string line;
  if (!std::getline(is, line) || line != "index,re,im") throw IoError(name + ": expected header 'index,re,im'");
  std::vector<cplx> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split(line, ',');
    if (cells.size() != 3) throw IoError(name + ": malformed row '" + line + "'");
    if (std::stoull(cells[0]) != values.size()) throw IoError(name + ": indices must be 0, 1, 2, ...");
    values.emplace_back(detail::parse_double(cells[1], name), detail::parse_double(cells[2], name));
  }
  if (values.empty()) throw IoError(name + ": no samples");
  return Sequence(std::move(values));
}

inline void write_sequence_binary(std::ostream& os, const Sequence& s) {
  for (const cplx& v : s.values()) {
    for (double part : {v.real(), v.imag()}) {
      const auto bits = detail::byteswap_if_big(std::bit_cast<std::uint64_t>(part));
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
}

inline Sequence read_sequence_binary(std::istream& is, const std::string& name = "sequence") {
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % 16 != 0) {
    throw IoError(name + ": binary sequence must be a nonempty multiple of 16 bytes");
  }
  std::vector<cplx> values(bytes.size() / 16);
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::uint64_t re, im;
    std::memcpy(&re, bytes.data() + 16 * k, 8);
    std::memcpy(&im, bytes.data() + 16 * k + 8, 8);
    values[k] = {std::bit_cast<double>(detail::byteswap_if_big(re)),
                 std::bit_cast<double>(detail::byteswap_if_big(im))};
  }
  return Sequence(std::move(values));
}

inline void save_sequence(const std::string& path, const Sequence& s, bool binary) {
  auto out = detail::open_out(path, binary ? std::ios::out | std::ios::binary : std::ios::out);
  binary ? write_sequence_binary(out, s) : write_sequence_csv(out, s);
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// Binary if the path ends in ".bin", CSV otherwise.
inline Sequence load_sequence(const std::string& path) {
  const bool binary = path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0;
  auto in = detail::open_in(path, binary ? std::ios::in | std::ios::binary : std::ios::in);
  return binary ? read_sequence_binary(in, path) : read_sequence_csv(in, path);
}

// --- ambiguity grid --------------------------------------------------------

inline void write_grid_csv(std::ostream& os, const AmbiguityGrid& grid) {
  detail::precise(os) << "tau,omega,abs,re,im\n";
  for (std::size_t tau = 0; tau < grid.size(); ++tau) {
    for (std::size_t omega = 0; omega < grid.size(); ++omega) {
      const cplx v = grid.at(tau, omega);
      os << tau << ',' << omega << ',' << std::abs(v) << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
}

// --- channel ---------------------------------------------------------------

inline json to_json(const ChannelParams& p) {
  json targets = json::array();
  for (const Target& t : p.targets) {
    targets.push_back({{"tau", t.shift.tau}, {"omega", t.shift.omega},
                       {"alpha_re", t.alpha.real()}, {"alpha_im", t.alpha.imag()}});
  }
  return {{"n", p.n_len}, {"targets", targets}};
}

inline ChannelParams channel_from_json(const json& j) {
  try {
    ChannelParams p;
    p.n_len = j.at("n").get<std::size_t>();
    for (const json& t : j.at("targets")) {
      p.targets.push_back({{t.at("tau").get<std::size_t>(), t.at("omega").get<std::size_t>()},
                           {t.at("alpha_re").get<double>(), t.at("alpha_im").get<double>()}});
    }
    p.validate(1e-9);
    return p;
  } catch (const json::exception& e) {
    throw IoError(std::string("channel JSON: ") + e.what());
  }
}

// --- detection -------------------------------------------------------------

inline json to_json(const TimeFreqShift& v) { return {{"tau", v.tau}, {"omega", v.omega}}; }

inline json to_json(const DetectionReport& r) {
  json detected = json::array();
  for (const auto& v : r.detected) detected.push_back(to_json(v));
  json per_target = json::array();
  for (const auto& d : r.per_target) {
    per_target.push_back({{"tau", d.shift.tau}, {"omega", d.shift.omega}, {"main", d.main},
                          {"cross", d.cross}, {"noise", d.noise}, {"detected", d.detected}});
  }
  return {{"detected", detected}, {"n_true", r.n_true}, {"n_false", r.n_false}, {"per_target", per_target}};
}

// --- sweep -----------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader = "n,r,trials,pd,pd_stderr,eft,eft_stderr,ms_per_trial";

inline void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
  detail::precise(os) << kSweepCsvHeader << '\n';
  auto opt = [](const std::optional<double>& v) {
    std::ostringstream s;
    detail::precise(s);
    if (v) s << *v;
    return s.str();
  };
  for (const SweepRow& row : rep.rows) {
    os << row.n_len << ',' << row.r << ',' << row.trials << ',' << row.pd << ',' << opt(row.pd_stderr) << ','
       << row.eft << ',' << opt(row.eft_stderr) << ',' << row.ms_per_trial << '\n';
  }
}

inline json to_json(const SweepRow& row) {
  return {{"n", row.n_len},
          {"r", row.r},
          {"trials", row.trials},
          {"pd", row.pd},
          {"pd_stderr", detail::optional_number(row.pd_stderr)},
          {"eft", row.eft},
          {"eft_stderr", detail::optional_number(row.eft_stderr)},
          {"ms_per_trial", row.ms_per_trial},
          {"b_constant", row.b_constant}};
}

// --- oracles ---------------------------------------------------------------

inline json to_json(const OracleReport& r) {
  return {{"lemma", r.lemma},
          {"parameters", r.parameters},
          {"samples", r.samples},
          {"violations", r.violations},
          {"empirical_rate", r.empirical_rate},
          {"claimed_bound", r.claimed_bound},
          {"stderr_at_bound", r.stderr_at_bound},
          {"verdict", r.passed ? "pass" : "fail"},
          {"seed", r.seed},
          {"note", r.note}};
}

inline void save_text(const std::string& path, const std::string& text) {
  auto out = detail::open_out(path);
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline json load_json(const std::string& path) {
  auto in = detail::open_in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

}  // namespace prradar
