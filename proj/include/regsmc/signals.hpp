#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regsmc/types.hpp"

namespace regsmc {

enum class DisturbanceKind { Zero, Constant, ResonantHarmonic, Tabulated };

std::string_view to_string(DisturbanceKind kind);
std::optional<DisturbanceKind> parse_disturbance_kind(std::string_view name);

/// Bounded exogenous input d(t). Everything is zero before onset_time;
/// the harmonic phase is referenced to onset_time, so d(onset) = amplitude.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::Zero;
  double amplitude = 0.0;
  double onset_time = 0.0;
  // ResonantHarmonic only. Unset means sqrt(gamma/mu); see resolve().
  std::optional<double> frequency;
  // Tabulated only: (time, value) pairs with strictly increasing time.
  std::vector<std::pair<double, double>> table;

  friend bool operator==(const DisturbanceSpec&, const DisturbanceSpec&) = default;

  static DisturbanceSpec zero() { return {}; }
  static DisturbanceSpec constant(double amplitude, double onset = 0.0);
  static DisturbanceSpec resonant(double amplitude, double onset = 0.0,
                                  std::optional<double> frequency = std::nullopt);
  static DisturbanceSpec tabulated(std::vector<std::pair<double, double>> table,
                                   double onset = 0.0);
};

/// sqrt(gamma / mu), the natural frequency of the linearized inner loop.
double resonant_frequency(const SystemParams& p);

/// Copy of spec with a defaulted harmonic frequency filled in from p.
DisturbanceSpec resolve(DisturbanceSpec spec, const SystemParams& p);

/// Throws std::invalid_argument for a malformed spec. When a bound is
/// given, also rejects sup_norm(spec) > bound.
void validate(const DisturbanceSpec& spec, std::optional<double> bound = std::nullopt);

/// d(t). Tabulated lookups outside the table domain clamp to the nearest
/// endpoint; use table_covers() to detect that case. Throws on t < 0 and
/// on a harmonic spec whose frequency was never resolved.
double sample_disturbance(const DisturbanceSpec& spec, double t);

/// False when t falls outside the tabulated time range (after onset).
bool table_covers(const DisturbanceSpec& spec, double t);

/// Exact sup-norm: the amplitude, or max |value| of a table.
double sup_norm(const DisturbanceSpec& spec);

/// Two-column CSV (time, value); a non-numeric first line is taken as a header.
std::vector<std::pair<double, double>> read_table_csv(std::istream& in);
std::vector<std::pair<double, double>> load_table_csv(const std::string& path);

}  // namespace regsmc
