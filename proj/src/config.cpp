#include "regsmc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace regsmc {

ConfigError::ConfigError(std::string key, std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + key + ": " + what
                              : "override " + key + ": " + what),
      key_(std::move(key)),
      line_(line) {}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

const char* const kKeys[] = {"system",     "gamma",  "mu",         "dist_bound", "dt",
                             "t_end",      "x0_1",   "x0_2",       "dist_kind",  "dist_amp",
                             "dist_onset", "dist_freq", "dist_table", "out",     "decimation",
                             "window",     "verbosity", "plot"};

bool known_key(std::string_view k) {
  for (const char* key : kKeys) {
    if (k == key) return true;
  }
  return false;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::size_t line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  std::optional<double> number(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::string_view v = it->second.value;
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
      throw ConfigError(key, it->second.line, "expected a finite number, got '" + it->second.value + "'");
    }
    return out;
  }

  std::optional<long long> integer(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    const std::string& v = it->second.value;
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ConfigError(key, it->second.line, "expected an integer, got '" + v + "'");
    }
    return out;
  }

  std::optional<std::string> text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  std::optional<bool> flag(const std::string& key) const {
    auto v = text(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(key, line(key), "expected true/false, got '" + *v + "'");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(key, line(key), what);
  }

 private:
  std::map<std::string, Entry> entries_;
};

void store(std::map<std::string, Entry>& entries, std::string key, std::string value,
           std::size_t line, bool allow_replace) {
  if (!known_key(key)) throw ConfigError(key, line, "unknown key");
  if (!allow_replace && entries.count(key)) throw ConfigError(key, line, "duplicate key");
  entries[std::move(key)] = Entry{std::move(value), line};
}

RunConfig build(const Reader& r) {
  RunConfig cfg;
  Scenario& sc = cfg.scenario;
  sc.dt = 1e-5;
  sc.t_end = 20.0;
  sc.x0 = {1.0, 0.0};

  if (auto s = r.text("system")) {
    auto kind = parse_system_kind(*s);
    if (!kind) r.fail("system", "expected original|maxreg|addreg, got '" + *s + "'");
    sc.kind = *kind;
  }
  if (auto v = r.number("gamma")) sc.params.gamma = *v;
  if (!(sc.params.gamma > 0.0)) r.fail("gamma", "gamma must be > 0");

  if (auto v = r.number("mu")) sc.params.mu = *v;
  if (sc.kind == SystemKind::Original) {
    if (r.has("mu")) {
      cfg.warnings.push_back("mu is ignored by the original system");
    }
  } else if (!(sc.params.mu > 0.0)) {
    r.fail("mu", "mu must be > 0 for regularized systems");
  }

  if (auto v = r.number("dt")) sc.dt = *v;
  if (!(sc.dt > 0.0)) r.fail("dt", "dt must be > 0");
  if (auto v = r.number("t_end")) sc.t_end = *v;
  if (!(sc.t_end > sc.dt)) r.fail("t_end", "t_end must be > dt");
  {
    const double n = std::round(sc.t_end / sc.dt);
    if (std::fabs(n * sc.dt - sc.t_end) > 1e-9 * std::max(1.0, sc.t_end)) {
      r.fail("t_end", "t_end must be an integer multiple of dt");
    }
  }
  if (auto v = r.number("x0_1")) sc.x0.x1 = *v;
  if (auto v = r.number("x0_2")) sc.x0.x2 = *v;

  DisturbanceSpec& ds = sc.disturbance;
  if (auto s = r.text("dist_kind")) {
    auto kind = parse_disturbance_kind(*s);
    if (!kind) r.fail("dist_kind", "expected zero|constant|harmonic|table, got '" + *s + "'");
    ds.kind = *kind;
  }
  ds.onset_time = 5.0;
  if (auto v = r.number("dist_onset")) ds.onset_time = *v;
  if (!(ds.onset_time >= 0.0)) r.fail("dist_onset", "dist_onset must be >= 0");
  if (auto v = r.number("dist_amp")) ds.amplitude = *v;
  if (auto v = r.number("dist_freq")) {
    if (!(*v > 0.0)) r.fail("dist_freq", "dist_freq must be > 0");
    ds.frequency = *v;
  }
  if (ds.kind == DisturbanceKind::Tabulated) {
    auto path = r.text("dist_table");
    if (!path) r.fail("dist_table", "required when dist_kind=table");
    try {
      ds.table = load_table_csv(*path);
      validate(ds);
    } catch (const std::exception& e) {
      r.fail("dist_table", e.what());
    }
  }
  if (ds.kind == DisturbanceKind::ResonantHarmonic && !ds.frequency &&
      sc.kind == SystemKind::Original) {
    r.fail("dist_freq", "required for a harmonic disturbance on the original system");
  }

  const double sup = sup_norm(ds);
  if (auto v = r.number("dist_bound")) {
    sc.params.dist_bound = *v;
    if (!(*v >= 0.0)) r.fail("dist_bound", "dist_bound must be >= 0");
    if (sup > *v) r.fail("dist_bound", "disturbance sup-norm exceeds dist_bound");
  } else {
    sc.params.dist_bound = sup;
  }

  if (auto v = r.text("out")) cfg.out = *v;
  if (auto v = r.integer("decimation")) {
    if (*v < 1) r.fail("decimation", "decimation must be >= 1");
    cfg.decimation = static_cast<std::size_t>(*v);
  }
  if (auto v = r.number("window")) {
    cfg.window = *v;
    cfg.window_explicit = true;
  }
  if (!cfg.window_explicit) cfg.window = std::min(cfg.window, sc.t_end);
  if (!(cfg.window > 0.0 && cfg.window <= sc.t_end)) r.fail("window", "window must lie in (0, t_end]");
  if (auto v = r.integer("verbosity")) cfg.verbosity = static_cast<int>(*v);
  if (auto v = r.flag("plot")) cfg.plot = *v;

  try {
    validate(sc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scenario", 0, e.what());
  }
  return cfg;
}

}  // namespace

Override parse_override(std::string_view arg) {
  const auto eq = arg.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(arg), 0, "expected key=value");
  }
  return {std::string(trim(arg.substr(0, eq))), std::string(trim(arg.substr(eq + 1)))};
}

RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides) {
  std::map<std::string, Entry> entries;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(line), lineno, "expected key = value");
    }
    store(entries, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
          lineno, false);
  }
  for (const auto& [k, v] : overrides) store(entries, k, v, 0, true);
  return build(Reader(std::move(entries)));
}

RunConfig load_config(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

bool apply_env_overrides(RunConfig& cfg) {
  const char* env = std::getenv(kDtEnvVar);
  if (!env || !*env) return false;
  const std::string_view v(env);
  double dt = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), dt);
  if (ec != std::errc() || ptr != v.data() + v.size() || !(dt > 0.0)) {
    throw ConfigError(kDtEnvVar, 0, "expected a positive number");
  }
  cfg.scenario.dt = dt;
  try {
    validate(cfg.scenario);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(kDtEnvVar, 0, e.what());
  }
  cfg.warnings.push_back(std::string("dt overridden by ") + kDtEnvVar);
  return true;
}

}  // namespace regsmc
