#include <cmath>
#include <numbers>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "regsmc/signals.hpp"

using namespace regsmc;
using Catch::Approx;

TEST_CASE("constant disturbance switches on at onset", "[signals]") {
  const auto d = DisturbanceSpec::constant(1.0, 5.0);
  REQUIRE(sample_disturbance(d, 4.9) == 0.0);
  REQUIRE(sample_disturbance(d, 7.0) == 1.0);
  REQUIRE(sample_disturbance(d, 5.0) == 1.0);
}

TEST_CASE("harmonic disturbance starts at its peak", "[signals]") {
  const auto d = DisturbanceSpec::resonant(1.0, 5.0, 100.0);
  REQUIRE(sample_disturbance(d, 5.0) == 1.0);
  REQUIRE(sample_disturbance(d, 4.0) == 0.0);
  REQUIRE(sample_disturbance(d, 5.0 + std::numbers::pi / 100.0) == Approx(-1.0));
}

TEST_CASE("resonant frequency", "[signals]") {
  REQUIRE(resonant_frequency({100.0, 0.01, 0.0}) == Approx(100.0));
  REQUIRE(resonant_frequency({100.0, 0.05, 0.0}) == Approx(44.7214).epsilon(1e-6));
  REQUIRE(resonant_frequency({1.0, 1.0, 0.0}) == 1.0);
  REQUIRE_THROWS(resonant_frequency({1.0, 0.0, 0.0}));
}

TEST_CASE("defaulted harmonic frequency resolves to the resonance exactly", "[signals]") {
  const SystemParams p{100.0, 0.05, 10.0};
  const auto r = resolve(DisturbanceSpec::resonant(10.0), p);
  REQUIRE(r.frequency);
  REQUIRE(*r.frequency == resonant_frequency(p));
  REQUIRE(resolve(DisturbanceSpec::resonant(10.0, 0.0, 3.0), p).frequency == 3.0);
  REQUIRE_THROWS(sample_disturbance(DisturbanceSpec::resonant(1.0), 1.0));
}

TEST_CASE("sup norm", "[signals]") {
  REQUIRE(sup_norm(DisturbanceSpec::zero()) == 0.0);
  REQUIRE(sup_norm(DisturbanceSpec::resonant(10.0)) == 10.0);
  REQUIRE(sup_norm(DisturbanceSpec::constant(-2.0)) == 2.0);
  REQUIRE(sup_norm(DisturbanceSpec::tabulated({{0.0, -3.0}, {1.0, 2.0}})) == 3.0);
}

TEST_CASE("samples never exceed the sup norm", "[signals][invariant]") {
  const SystemParams p{100.0, 0.01, 0.0};
  const DisturbanceSpec specs[] = {
      DisturbanceSpec::zero(), DisturbanceSpec::constant(1.5, 2.0),
      resolve(DisturbanceSpec::resonant(10.0, 5.0), p),
      DisturbanceSpec::tabulated({{0.0, -3.0}, {1.0, 2.0}, {4.0, 0.5}}, 1.0)};
  for (const auto& s : specs) {
    const double bound = sup_norm(s);
    for (int k = 0; k <= 20000; ++k) {
      REQUIRE(std::fabs(sample_disturbance(s, k * 1e-3)) <= bound);
    }
  }
  for (int k = 0; k <= 1000; ++k) REQUIRE(sample_disturbance(specs[0], k * 0.1) == 0.0);
}

TEST_CASE("tabulated interpolation and clamping", "[signals]") {
  const auto d = DisturbanceSpec::tabulated({{0.0, -3.0}, {1.0, 2.0}}, 1.0);
  REQUIRE(sample_disturbance(d, 0.5) == 0.0);
  REQUIRE(sample_disturbance(d, 1.0) == -3.0);
  REQUIRE(sample_disturbance(d, 1.5) == Approx(-0.5));
  REQUIRE(sample_disturbance(d, 3.0) == 2.0);
  REQUIRE(table_covers(d, 1.5));
  REQUIRE_FALSE(table_covers(d, 3.0));
}

TEST_CASE("spec validation", "[signals]") {
  REQUIRE_THROWS(validate(DisturbanceSpec::constant(1.0, -1.0)));
  REQUIRE_THROWS(validate(DisturbanceSpec::constant(2.0), 1.0));
  REQUIRE_NOTHROW(validate(DisturbanceSpec::constant(1.0), 1.0));
  REQUIRE_THROWS(validate(DisturbanceSpec::tabulated({{1.0, 0.0}, {0.5, 1.0}})));
  REQUIRE_THROWS(validate(DisturbanceSpec::tabulated({{0.0, NAN}, {1.0, 1.0}})));
  REQUIRE_THROWS(sample_disturbance(DisturbanceSpec::constant(1.0), -1e-9));
}

TEST_CASE("table CSV with and without header", "[signals]") {
  std::istringstream with("time,value\n0,1\n0.5,-2\n");
  std::istringstream without("0,1\n0.5,-2\n");
  const auto a = read_table_csv(with);
  const auto b = read_table_csv(without);
  REQUIRE(a == b);
  REQUIRE(a.size() == 2);
  REQUIRE(a[1] == std::pair{0.5, -2.0});
  std::istringstream bad("0,1\nx,y\n");
  REQUIRE_THROWS(read_table_csv(bad));
}
