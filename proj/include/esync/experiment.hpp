#pragma once

// Simulation harness: config parsing, the integration loop, CSV records.
//
// Config files are line-oriented `key = value` text; `#` starts a comment.
// See README.md for the full list of keys.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "esync/cost.hpp"
#include "esync/dither.hpp"
#include "esync/dynamics.hpp"
#include "esync/errors.hpp"
#include "esync/lie.hpp"

namespace esync {

enum class Mode { extremum_seeking, gradient_flow };
enum class Integrator { lie_euler, rk_mk2 };

inline std::string_view to_string(Mode m) {
  return m == Mode::extremum_seeking ? "extremum_seeking" : "gradient_flow";
}
inline std::string_view to_string(Integrator i) { return i == Integrator::lie_euler ? "lie_euler" : "rk_mk2"; }

/// Initial states drawn around a random common element: agent j starts at
/// c · exp(hat(ξ_j)) with every coordinate of ξ_j uniform in [−spread, spread].
struct RandomInitial {
  std::uint64_t seed = 0;
  double spread = 0.5;
};

using InitialStates = std::variant<std::vector<Eigen::MatrixXd>, RandomInitial>;

struct ExperimentConfig {
  NetworkConfig net = NetworkConfig::complete(GroupTag::SO3, 2);
  DitherSchedule schedule;
  Mode mode = Mode::extremum_seeking;
  Integrator integrator = Integrator::lie_euler;
  double t_final = 200.0;
  std::optional<double> dt;                 // unset: derived from the dither
  std::optional<std::size_t> record_every;  // unset: one sample per base period
  InitialStates initial = RandomInitial{};
  double gain = 1.0;
  Execution execution = Execution::sequential;
  bool record_states = false;

  GroupTag tag() const { return net.tag(); }

  /// Step size request. ES mode defaults to 50 steps per period of the
  /// fastest dither; gradient mode to 1e-3.
  double resolved_dt() const {
    if (dt) return *dt;
    if (mode == Mode::gradient_flow) return 1e-3;
    return 2.0 * std::numbers::pi / (50.0 * schedule.max_frequency());
  }

  std::size_t resolved_record_every() const {
    if (record_every) return *record_every;
    const double per_period = (2.0 * std::numbers::pi / schedule.base_omega) / resolved_dt();
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(per_period)));
  }

  /// Checks cross-field constraints; returns non-fatal warnings.
  std::vector<std::string> validate() const {
    std::vector<std::string> warnings;
    schedule.validate();
    if (schedule.agents != net.agents()) throw ConfigError("schedule agent count does not match 'agents'");
    const std::size_t n = net.tag() == GroupTag::SO3 ? 3 : 6;
    if (schedule.dims != n) throw ConfigError("schedule dimension does not match 'group'");
    const double h = resolved_dt();
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("dt must be positive");
    if (!(t_final >= h)) throw ConfigError("t_final must be at least dt");
    if (record_every && *record_every < 1) throw ConfigError("record_every must be at least 1");
    if (!std::isfinite(gain)) throw ConfigError("gain must be finite");
    if (mode == Mode::extremum_seeking) {
      const double resolution = h * schedule.max_frequency();
      if (resolution > 2.0 * std::numbers::pi / 20.0) {
        throw ConfigError("dt is too coarse for the fastest dither: dt*omega_max = " +
                          format_real(resolution) + " exceeds 2*pi/20");
      }
      if (resolution > 2.0 * std::numbers::pi / 50.0) {
        warnings.push_back("fewer than 50 steps per fastest dither period (dt*omega_max = " +
                           format_real(resolution) + ")");
      }
    }
    if (const auto* mats = std::get_if<std::vector<Eigen::MatrixXd>>(&initial)) {
      if (mats->size() != net.agents()) {
        throw ConfigError("initial state file has " + std::to_string(mats->size()) +
                          " matrices, expected " + std::to_string(net.agents()));
      }
    } else if (!(std::get<RandomInitial>(initial).spread >= 0.0)) {
      throw ConfigError("initial_spread must be non-negative");
    }
    return warnings;
  }
};

// ---------------------------------------------------------------------------
// matrix fixtures: row-major numbers, one matrix per '---'-separated block

/// Parses a fixture and reprojects every matrix onto the group. Matrices
/// farther than `reproject_tol` from the group are rejected.
inline std::vector<Eigen::MatrixXd> parse_matrix_fixture(std::string_view text, GroupTag tag,
                                                         double reproject_tol = 1e-3) {
  const int dim = tag == GroupTag::SO3 ? 3 : 4;
  std::vector<Eigen::MatrixXd> out;
  std::istringstream in{std::string(text)};
  std::string line, block;
  int block_start = 1, lineno = 0;
  auto flush = [&] {
    if (block.find_first_not_of(" \t\r\n") == std::string::npos) {
      block.clear();
      return;
    }
    Eigen::MatrixXd m;
    try {
      m = parse_matrix(block, dim);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("matrix fixture: ") + e.what(), block_start);
    }
    try {
      if (tag == GroupTag::SO3) {
        out.push_back(reproject<SO3>(Eigen::Matrix3d(m), reproject_tol).matrix());
      } else {
        out.push_back(reproject<SE3>(Eigen::Matrix4d(m), reproject_tol).matrix());
      }
    } catch (const IntegrityError& e) {
      throw ConfigError(std::string("initial matrix is not on the group: ") + e.what(), block_start);
    }
    block.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find("---") != std::string::npos) {
      flush();
      block_start = lineno + 1;
      continue;
    }
    if (block.empty()) block_start = lineno;
    block += line + '\n';
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// config parsing

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline double parse_double(const std::string& s, int line, std::string_view key) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + s + "'", line);
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& s, int line, std::string_view key) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + s + "'", line);
  }
  return v;
}

}  // namespace detail

/// Parses config text. Relative `initial` paths resolve against `base_dir`.
inline ExperimentConfig load_config(std::string_view text,
                                    const std::filesystem::path& base_dir = ".") {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> kv;
  {
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string line = detail::trim(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("missing key", lineno);
      if (!kv.emplace(key, Entry{value, lineno}).second) {
        throw ConfigError("duplicate key '" + key + "'", lineno);
      }
    }
  }

  static const std::vector<std::string> known = {
      "group",   "agents",        "edges",     "mode",          "integrator",  "t_final",
      "dt",      "record_every",  "omega",     "amplitude",     "amplitudes",  "multipliers",
      "amplitude_cap", "gain",    "initial",   "seed",          "initial_spread", "execution",
      "record_states"};
  for (const auto& [key, entry] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + key + "'", entry.line);
    }
  }
  auto get = [&kv](const std::string& key) -> const Entry* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto require = [&](const std::string& key) -> const Entry& {
    if (const Entry* e = get(key)) return *e;
    throw ConfigError("missing required key '" + key + "'");
  };

  ExperimentConfig cfg;

  GroupTag tag;
  {
    const Entry& e = require("group");
    if (e.value == "SO3") tag = GroupTag::SO3;
    else if (e.value == "SE3") tag = GroupTag::SE3;
    else throw ConfigError("group must be SO3 or SE3", e.line);
  }
  const std::size_t n = tag == GroupTag::SO3 ? 3 : 6;

  const Entry& agents_entry = require("agents");
  const auto m = detail::parse_int<std::size_t>(agents_entry.value, agents_entry.line, "agents");

  std::vector<Edge> edges;
  const Entry* edges_entry = get("edges");
  if (!edges_entry || edges_entry->value == "complete") {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) edges.emplace_back(i, j);
  } else {
    for (const auto& tok : detail::split_list(edges_entry->value)) {
      const auto dash = tok.find('-');
      if (dash == std::string::npos) {
        throw ConfigError("edges: expected 'i-j', got '" + tok + "'", edges_entry->line);
      }
      edges.emplace_back(detail::parse_int<std::size_t>(tok.substr(0, dash), edges_entry->line, "edges"),
                         detail::parse_int<std::size_t>(tok.substr(dash + 1), edges_entry->line, "edges"));
    }
  }
  try {
    cfg.net = NetworkConfig(tag, m, std::move(edges));
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what(), edges_entry ? edges_entry->line : agents_entry.line);
  }

  if (const Entry* e = get("mode")) {
    if (e->value == "extremum_seeking" || e->value == "es") cfg.mode = Mode::extremum_seeking;
    else if (e->value == "gradient_flow" || e->value == "gradient") cfg.mode = Mode::gradient_flow;
    else throw ConfigError("mode must be extremum_seeking or gradient_flow", e->line);
  }
  if (const Entry* e = get("integrator")) {
    if (e->value == "lie_euler") cfg.integrator = Integrator::lie_euler;
    else if (e->value == "rk_mk2") cfg.integrator = Integrator::rk_mk2;
    else throw ConfigError("integrator must be lie_euler or rk_mk2", e->line);
  }
  if (const Entry* e = get("t_final")) cfg.t_final = detail::parse_double(e->value, e->line, "t_final");
  if (const Entry* e = get("dt"); e && e->value != "auto") {
    cfg.dt = detail::parse_double(e->value, e->line, "dt");
    if (!(*cfg.dt > 0.0)) throw ConfigError("dt must be positive", e->line);
  }
  if (const Entry* e = get("record_every"); e && e->value != "auto") {
    cfg.record_every = detail::parse_int<std::size_t>(e->value, e->line, "record_every");
    if (*cfg.record_every < 1) throw ConfigError("record_every must be at least 1", e->line);
  }
  if (const Entry* e = get("gain")) cfg.gain = detail::parse_double(e->value, e->line, "gain");
  if (const Entry* e = get("execution")) {
    if (e->value == "sequential") cfg.execution = Execution::sequential;
    else if (e->value == "parallel") cfg.execution = Execution::parallel;
    else throw ConfigError("execution must be sequential or parallel", e->line);
  }
  if (const Entry* e = get("record_states")) {
    if (e->value == "true") cfg.record_states = true;
    else if (e->value == "false") cfg.record_states = false;
    else throw ConfigError("record_states must be true or false", e->line);
  }

  // Dither schedule.
  DitherSchedule& s = cfg.schedule;
  s.agents = m;
  s.dims = n;
  s.base_omega = 40.0;
  if (const Entry* e = get("omega")) {
    s.base_omega = detail::parse_double(e->value, e->line, "omega");
    if (!(s.base_omega > 0.0)) throw ConfigError("omega must be positive", e->line);
  }
  if (const Entry* e = get("amplitude_cap")) {
    s.amplitude_cap = detail::parse_double(e->value, e->line, "amplitude_cap");
  }
  if (const Entry* e = get("amplitudes")) {
    for (const auto& tok : detail::split_list(e->value)) {
      s.amplitudes.push_back(detail::parse_double(tok, e->line, "amplitudes"));
    }
    if (s.amplitudes.size() != m * n) {
      throw ConfigError("amplitudes: expected " + std::to_string(m * n) + " values (agents x " +
                            std::to_string(n) + "), got " + std::to_string(s.amplitudes.size()),
                        e->line);
    }
  } else {
    double a = 0.1;
    if (const Entry* e = get("amplitude")) a = detail::parse_double(e->value, e->line, "amplitude");
    s.amplitudes.assign(m * n, a);
  }
  const Entry* mult_entry = get("multipliers");
  if (!mult_entry || mult_entry->value == "auto") {
    s.multipliers = generate_frequencies(m * n);
  } else {
    for (const auto& tok : detail::split_list(mult_entry->value)) {
      s.multipliers.push_back(detail::parse_int<Multiplier>(tok, mult_entry->line, "multipliers"));
    }
    if (s.multipliers.size() != m * n) {
      throw ConfigError("multipliers: expected " + std::to_string(m * n) + " values, got " +
                            std::to_string(s.multipliers.size()),
                        mult_entry->line);
    }
    const auto report = validate_frequencies(s.multipliers);
    if (!report.valid()) {
      throw FrequencyError("multipliers violate the frequency rules: " + report.to_string(),
                           mult_entry->line);
    }
  }

  // Initial states.
  if (const Entry* e = get("initial")) {
    std::filesystem::path path = e->value;
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read initial state file '" + path.string() + "'", e->line);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg.initial = parse_matrix_fixture(buf.str(), tag);
  } else {
    RandomInitial r;
    if (const Entry* e = get("seed")) r.seed = detail::parse_int<std::uint64_t>(e->value, e->line, "seed");
    if (const Entry* e = get("initial_spread")) {
      r.spread = detail::parse_double(e->value, e->line, "initial_spread");
    }
    cfg.initial = r;
  }

  try {
    cfg.validate();
  } catch (const FrequencyError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

// ---------------------------------------------------------------------------
// records

struct SimulationRecord {
  GroupTag tag = GroupTag::SO3;
  std::vector<double> times;
  std::vector<double> costs;
  std::vector<double> dispersions;
  // One entry per sample when states are recorded, otherwise empty.
  std::vector<std::vector<Eigen::MatrixXd>> states;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  friend bool operator==(const SimulationRecord& a, const SimulationRecord& b) {
    if (a.times != b.times || a.costs != b.costs || a.dispersions != b.dispersions) return false;
    if (a.states.size() != b.states.size()) return false;
    if (!a.states.empty() && a.tag != b.tag) return false;
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      if (a.states[k].size() != b.states[k].size()) return false;
      for (std::size_t j = 0; j < a.states[k].size(); ++j) {
        if (a.states[k][j] != b.states[k][j]) return false;
      }
    }
    return true;
  }
};

/// Max dispersion over the final ⌈tail_fraction · size⌉ samples.
inline double ultimate_bound(const SimulationRecord& rec, double tail_fraction = 0.2) {
  if (rec.empty()) throw InvalidInput("ultimate bound of an empty record");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw InvalidInput("tail fraction must be in (0, 1]");
  }
  const auto count = std::min(
      rec.size(), static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(rec.size()))));
  return *std::max_element(rec.dispersions.end() - static_cast<std::ptrdiff_t>(std::max<std::size_t>(count, 1)),
                           rec.dispersions.end());
}

inline void write_csv(const SimulationRecord& rec, std::ostream& out) {
  const int dim = rec.tag == GroupTag::SO3 ? 3 : 4;
  const std::size_t agents = rec.states.empty() ? 0 : rec.states.front().size();
  out << "t,J,dispersion";
  for (std::size_t j = 0; j < agents; ++j)
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) out << ",g" << j << '_' << r << c;
  out << '\n';
  for (std::size_t k = 0; k < rec.size(); ++k) {
    out << format_real(rec.times[k]) << ',' << format_real(rec.costs[k]) << ','
        << format_real(rec.dispersions[k]);
    if (!rec.states.empty()) {
      for (const auto& m : rec.states[k])
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c) out << ',' << format_real(m(r, c));
    }
    out << '\n';
  }
}

inline void write_csv(const SimulationRecord& rec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(rec, out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

/// Inverse of write_csv. The group is inferred from the state columns: SE3
/// records carry a `g0_33` column.
inline SimulationRecord read_csv(std::istream& in) {
  SimulationRecord rec;
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty CSV");
  const auto header = detail::split_list(line);
  if (header.size() < 3 || header[0] != "t" || header[1] != "J" || header[2] != "dispersion") {
    throw InvalidInput("CSV header must start with t,J,dispersion");
  }
  const std::size_t state_cols = header.size() - 3;
  const bool se3 = std::find(header.begin(), header.end(), "g0_33") != header.end();
  rec.tag = se3 ? GroupTag::SE3 : GroupTag::SO3;
  const int dim = se3 ? 4 : 3;
  const std::size_t per_agent = static_cast<std::size_t>(dim * dim);
  if (state_cols % per_agent != 0) throw InvalidInput("CSV state columns do not form whole matrices");
  const std::size_t agents = state_cols / per_agent;

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw InvalidInput("CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (row.size() != header.size()) {
      throw InvalidInput("CSV line " + std::to_string(lineno) + ": expected " +
                         std::to_string(header.size()) + " columns");
    }
    rec.times.push_back(row[0]);
    rec.costs.push_back(row[1]);
    rec.dispersions.push_back(row[2]);
    if (agents > 0) {
      std::vector<Eigen::MatrixXd> sample;
      for (std::size_t j = 0; j < agents; ++j) {
        Eigen::MatrixXd m(dim, dim);
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c) m(r, c) = row[3 + j * per_agent + static_cast<std::size_t>(r * dim + c)];
        sample.push_back(std::move(m));
      }
      rec.states.push_back(std::move(sample));
    }
  }
  return rec;
}

inline SimulationRecord read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_csv(in);
}

// ---------------------------------------------------------------------------
// running

/// Largest off-group drift a recorded state may show before run() gives up.
inline constexpr double kMaxRecordedDrift = 1e-8;

template <MatrixGroup G>
Configuration<G> initial_configuration(const ExperimentConfig& cfg) {
  Configuration<G> out;
  if (const auto* mats = std::get_if<std::vector<Eigen::MatrixXd>>(&cfg.initial)) {
    for (const auto& m : *mats) {
      out.push_back(GroupElement<G>::from_matrix(typename G::Matrix(m)));
    }
    return out;
  }
  const auto& r = std::get<RandomInitial>(cfg.initial);
  std::mt19937_64 rng(r.seed);
  const GroupElement<G> center = random_element<G>(rng);
  std::uniform_real_distribution<double> box(-r.spread, r.spread);
  for (std::size_t j = 0; j < cfg.net.agents(); ++j) {
    AlgebraVector<G> xi;
    for (int k = 0; k < G::kAlgebraDim; ++k) xi(k) = box(rng);
    out.push_back(center * exp<G>(xi));
  }
  return out;
}

namespace detail {

template <MatrixGroup G>
void record_sample(SimulationRecord& rec, const ExperimentConfig& cfg, const Configuration<G>& x, double t) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j].drift();
    if (!(d <= kMaxRecordedDrift)) {
      throw IntegrityError("agent " + std::to_string(j) + " drifted off the group at t = " +
                           format_real(t) + " (drift " + format_real(d) + ")");
    }
  }
  rec.times.push_back(t);
  rec.costs.push_back(cost<G>(cfg.net, x));
  rec.dispersions.push_back(dispersion<G>(x));
  if (cfg.record_states) {
    std::vector<Eigen::MatrixXd> sample;
    sample.reserve(x.size());
    for (const auto& g : x) sample.emplace_back(g.matrix());
    rec.states.push_back(std::move(sample));
  }
}

template <MatrixGroup G>
SimulationRecord run_on(const ExperimentConfig& cfg) {
  cfg.validate();
  const NetworkConfig& net = cfg.net;
  const double dt = cfg.resolved_dt();
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_final / dt - 1e-9));
  const double h = cfg.t_final / static_cast<double>(steps);
  const std::size_t every = cfg.resolved_record_every();

  auto field = [&](double t, const Configuration<G>& x) -> FieldSample<G> {
    if (cfg.mode == Mode::gradient_flow) {
      auto f = gradient_field<G>(net, x);
      f.t = t;
      return f;
    }
    return es_field<G>(cfg.schedule, x, t, SyncCost<G>{&net}, cfg.gain, cfg.execution);
  };

  SimulationRecord rec;
  rec.tag = G::tag;
  Configuration<G> x = initial_configuration<G>(cfg);
  record_sample<G>(rec, cfg, x, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    if (cfg.integrator == Integrator::lie_euler) {
      x = lie_euler_step<G>(x, field(t, x), h, cfg.execution);
    } else {
      x = rk_mk2_step<G>(x, field, t, h, cfg.execution);
    }
    if ((k + 1) % every == 0 || k + 1 == steps) {
      record_sample<G>(rec, cfg, x, static_cast<double>(k + 1) * h);
    }
  }
  return rec;
}

}  // namespace detail

/// Integrates from t = 0 to t_final. Deterministic for a given config.
inline SimulationRecord run(const ExperimentConfig& cfg) {
  return cfg.tag() == GroupTag::SO3 ? detail::run_on<SO3>(cfg) : detail::run_on<SE3>(cfg);
}

}  // namespace esync
