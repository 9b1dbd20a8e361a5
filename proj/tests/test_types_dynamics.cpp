#include <cmath>
#include <limits>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "regsmc/dynamics.hpp"
#include "regsmc/types.hpp"

using namespace regsmc;
using Catch::Approx;

TEST_CASE("system kinds parse and print", "[types]") {
  for (auto k : {SystemKind::Original, SystemKind::MaxReg, SystemKind::AddReg}) {
    REQUIRE(parse_system_kind(to_string(k)) == k);
  }
  REQUIRE_FALSE(parse_system_kind("sliding"));
}

TEST_CASE("params validation names the field", "[types]") {
  REQUIRE_THROWS_WITH(validate(SystemParams{-1.0, 0.01, 0.0}, SystemKind::MaxReg),
                      Catch::Matchers::ContainsSubstring("gamma"));
  REQUIRE_THROWS_WITH(validate(SystemParams{100.0, 0.0, 0.0}, SystemKind::AddReg),
                      Catch::Matchers::ContainsSubstring("mu"));
  REQUIRE_NOTHROW(validate(SystemParams{100.0, 0.0, 0.0}, SystemKind::Original));
  REQUIRE_THROWS(validate(SystemParams{100.0, 0.01, -1.0}, SystemKind::MaxReg));
}

TEST_CASE("original control examples", "[dynamics]") {
  REQUIRE(control_original({1.0, 0.0}, 100.0) == -100.0);
  REQUIRE(control_original({0.0, 5.0}, 100.0) == 0.0);
  REQUIRE(control_original({-1.0, 0.0}, 100.0) == 100.0);
}

TEST_CASE("maxreg control examples", "[dynamics]") {
  REQUIRE(control_maxreg({1.0, 0.0}, 100.0, 0.01) == -100.0);
  REQUIRE(control_maxreg({0.0, 0.1}, 100.0, 0.01) == Approx(-1.0).epsilon(1e-14));
  REQUIRE(control_maxreg({0.0, 0.0}, 3.0, 0.2) == 0.0);
}

TEST_CASE("addreg control examples", "[dynamics]") {
  REQUIRE(control_addreg({0.0, 0.0}, 100.0, 1e-4) == 0.0);
  REQUIRE(control_addreg({1.0, 0.0}, 100.0, 1e-4) == Approx(-100.0 / 1.0001).epsilon(1e-14));
  REQUIRE(control_addreg({-1.0, 0.0}, 100.0, 1e-4) == Approx(100.0 / 1.0001).epsilon(1e-14));
}

TEST_CASE("vector field examples", "[dynamics]") {
  const SystemParams p{100.0, 0.01, 0.0};
  REQUIRE(vector_field(SystemKind::MaxReg, {0.0, 0.0}, p, 0.0) == State{0.0, 0.0});
  REQUIRE(vector_field(SystemKind::MaxReg, {0.02, 0.0}, p, 0.0) == State{0.0, -100.0});
  const auto f = vector_field(SystemKind::AddReg, {0.0, 1.0}, {100.0, 1e-4, 0.0}, 0.0);
  REQUIRE(f.x1 == 1.0);
  REQUIRE(f.x2 == Approx(-1e4).epsilon(1e-14));
  // The disturbance enters additively.
  REQUIRE(vector_field(SystemKind::MaxReg, {0.0, 0.0}, p, 0.7).x2 == 0.7);
}

TEST_CASE("linearized matrix and eigenfrequency", "[dynamics]") {
  const auto a = linearized_matrix({100.0, 0.01, 0.0});
  REQUIRE(a[0][0] == 0.0);
  REQUIRE(a[0][1] == 1.0);
  REQUIRE(a[1][0] == Approx(-1e4));
  REQUIRE(a[1][1] == 0.0);
  REQUIRE(std::sqrt(-linearized_matrix({100.0, 0.05, 0.0})[1][0]) == Approx(44.72135955));
  REQUIRE(std::sqrt(-linearized_matrix({0.3, 0.3, 0.0})[1][0]) == Approx(1.0));
}

TEST_CASE("non-finite input is rejected", "[dynamics]") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(control_maxreg({nan, 0.0}, 100.0, 0.01), std::domain_error);
  REQUIRE_THROWS_AS(control_original({1.0, INFINITY}, 100.0), std::domain_error);
  REQUIRE_THROWS_AS(control_addreg({1.0, 0.0}, 100.0, -1.0), std::invalid_argument);
}

TEST_CASE("maxreg equals original outside the band", "[dynamics][invariant]") {
  const SystemParams p{100.0, 0.01, 0.0};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> mag(p.mu, 3.0);
  std::uniform_real_distribution<double> v(-3.0, 3.0);
  for (int i = 0; i < 10000; ++i) {
    const State s{(i % 2 ? 1.0 : -1.0) * mag(rng), v(rng)};
    REQUIRE(control(SystemKind::MaxReg, s, p) == control(SystemKind::Original, s, p));
  }
}

TEST_CASE("maxreg is continuous at the seam", "[dynamics][invariant]") {
  const double gamma = 100.0;
  const double mu = 0.01;
  for (double x2 : {-1.0, -0.01, 0.0, 0.3, 2.0}) {
    for (double x1 : {mu, -mu}) {
      const double inner = -(gamma * x1 + std::fabs(x2) * x2) / mu;
      const double outer = control_original({x1, x2}, gamma);
      REQUIRE(std::fabs(control_maxreg({x1, x2}, gamma, mu) - inner) <= 1e-12 * std::fabs(inner) + 1e-300);
      REQUIRE(std::fabs(inner - outer) <= 1e-12 * std::max(1.0, std::fabs(inner)));
      const double below = std::nextafter(std::fabs(x1), 0.0) * (x1 > 0 ? 1 : -1);
      REQUIRE(control_maxreg({below, x2}, gamma, mu) == Approx(inner).epsilon(1e-12).margin(1e-12));
    }
  }
}

TEST_CASE("controls are odd", "[dynamics][invariant]") {
  const SystemParams p{100.0, 0.01, 0.0};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  for (int i = 0; i < 10000; ++i) {
    const State s{v(rng) * (i % 3 == 0 ? 1e-3 : 1.0), v(rng)};
    for (auto k : {SystemKind::Original, SystemKind::MaxReg, SystemKind::AddReg}) {
      REQUIRE(control(k, {-s.x1, -s.x2}, p) == -control(k, s, p));
    }
  }
}

TEST_CASE("no invariant x2 = 0 line away from the origin", "[dynamics][invariant]") {
  const SystemParams p{100.0, 0.01, 0.0};
  for (double x1 : {-1.0, -0.005, -1e-9, 1e-9, 0.005, 1.0}) {
    for (auto k : {SystemKind::Original, SystemKind::MaxReg, SystemKind::AddReg}) {
      REQUIRE(vector_field(k, {x1, 0.0}, p, 0.0).x2 != 0.0);
    }
  }
}

TEST_CASE("addreg is finite everywhere", "[dynamics][invariant]") {
  const SystemParams p{100.0, 1e-4, 0.0};
  for (double x1 : {0.0, -0.0, 1e-300, -1e-300, 1e300}) {
    for (double x2 : {0.0, 1e-200, 1.0, 1e100}) {
      REQUIRE(std::isfinite(control_addreg({x1, x2}, p.gamma, p.mu)));
    }
  }
}
