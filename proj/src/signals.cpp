#include "regsmc/signals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace regsmc {

std::string_view to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::Zero: return "zero";
    case DisturbanceKind::Constant: return "constant";
    case DisturbanceKind::ResonantHarmonic: return "harmonic";
    case DisturbanceKind::Tabulated: return "table";
  }
  return "unknown";
}

std::optional<DisturbanceKind> parse_disturbance_kind(std::string_view name) {
  if (name == "zero" || name == "none") return DisturbanceKind::Zero;
  if (name == "constant") return DisturbanceKind::Constant;
  if (name == "harmonic" || name == "resonant") return DisturbanceKind::ResonantHarmonic;
  if (name == "table" || name == "tabulated") return DisturbanceKind::Tabulated;
  return std::nullopt;
}

DisturbanceSpec DisturbanceSpec::constant(double amplitude, double onset) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::Constant;
  s.amplitude = amplitude;
  s.onset_time = onset;
  return s;
}

DisturbanceSpec DisturbanceSpec::resonant(double amplitude, double onset,
                                          std::optional<double> frequency) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::ResonantHarmonic;
  s.amplitude = amplitude;
  s.onset_time = onset;
  s.frequency = frequency;
  return s;
}

DisturbanceSpec DisturbanceSpec::tabulated(std::vector<std::pair<double, double>> table,
                                           double onset) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::Tabulated;
  s.onset_time = onset;
  s.table = std::move(table);
  return s;
}

double resonant_frequency(const SystemParams& p) {
  if (!(p.gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(p.mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  return std::sqrt(p.gamma / p.mu);
}

DisturbanceSpec resolve(DisturbanceSpec spec, const SystemParams& p) {
  if (spec.kind == DisturbanceKind::ResonantHarmonic && !spec.frequency) {
    spec.frequency = resonant_frequency(p);
  }
  return spec;
}

void validate(const DisturbanceSpec& spec, std::optional<double> bound) {
  if (!(std::isfinite(spec.onset_time) && spec.onset_time >= 0.0)) {
    throw std::invalid_argument("disturbance onset_time must be >= 0");
  }
  if (!std::isfinite(spec.amplitude)) {
    throw std::invalid_argument("disturbance amplitude must be finite");
  }
  if (spec.kind == DisturbanceKind::ResonantHarmonic && spec.frequency &&
      !(std::isfinite(*spec.frequency) && *spec.frequency > 0.0)) {
    throw std::invalid_argument("harmonic frequency must be > 0");
  }
  if (spec.kind == DisturbanceKind::Tabulated) {
    if (spec.table.empty()) throw std::invalid_argument("disturbance table is empty");
    for (std::size_t i = 0; i < spec.table.size(); ++i) {
      const auto& [t, v] = spec.table[i];
      if (!std::isfinite(t) || !std::isfinite(v)) {
        throw std::invalid_argument("disturbance table entries must be finite");
      }
      if (i > 0 && !(t > spec.table[i - 1].first)) {
        throw std::invalid_argument("disturbance table times must be strictly increasing");
      }
    }
  }
  if (bound && sup_norm(spec) > *bound) {
    throw std::invalid_argument("disturbance sup-norm exceeds dist_bound");
  }
}

double sample_disturbance(const DisturbanceSpec& spec, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("disturbance sampled at negative time");
  if (t < spec.onset_time) return 0.0;
  const double tau = t - spec.onset_time;
  switch (spec.kind) {
    case DisturbanceKind::Zero: return 0.0;
    case DisturbanceKind::Constant: return spec.amplitude;
    case DisturbanceKind::ResonantHarmonic:
      if (!spec.frequency) throw std::logic_error("harmonic frequency not resolved");
      return spec.amplitude * std::cos(*spec.frequency * tau);
    case DisturbanceKind::Tabulated: {
      const auto& tab = spec.table;
      if (tab.empty()) return 0.0;
      if (tau <= tab.front().first) return tab.front().second;
      if (tau >= tab.back().first) return tab.back().second;
      auto hi = std::upper_bound(tab.begin(), tab.end(), tau,
                                 [](double x, const auto& e) { return x < e.first; });
      auto lo = hi - 1;
      const double w = (tau - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second);
    }
  }
  return 0.0;
}

bool table_covers(const DisturbanceSpec& spec, double t) {
  if (spec.kind != DisturbanceKind::Tabulated || t < spec.onset_time || spec.table.empty()) {
    return true;
  }
  const double tau = t - spec.onset_time;
  return tau >= spec.table.front().first && tau <= spec.table.back().first;
}

double sup_norm(const DisturbanceSpec& spec) {
  switch (spec.kind) {
    case DisturbanceKind::Zero: return 0.0;
    case DisturbanceKind::Constant:
    case DisturbanceKind::ResonantHarmonic: return std::fabs(spec.amplitude);
    case DisturbanceKind::Tabulated: {
      double m = 0.0;
      for (const auto& e : spec.table) m = std::max(m, std::fabs(e.second));
      return m;
    }
  }
  return 0.0;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<std::pair<double, double>> read_table_csv(std::istream& in) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    const auto comma = v.find(',');
    double t = 0.0;
    double d = 0.0;
    const bool ok = comma != std::string_view::npos && parse_double(v.substr(0, comma), t) &&
                    parse_double(v.substr(comma + 1), d);
    if (!ok) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw std::invalid_argument("malformed disturbance table row at line " +
                                  std::to_string(lineno));
    }
    rows.emplace_back(t, d);
  }
  return rows;
}

std::vector<std::pair<double, double>> load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open disturbance table: " + path);
  return read_table_csv(in);
}

}  // namespace regsmc
