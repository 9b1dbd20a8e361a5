#include <cstdlib>

#include "catch2/catch_amalgamated.hpp"
#include "regsmc/config.hpp"

using namespace regsmc;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("minimal config fills defaults", "[config]") {
  const auto cfg = parse_config("system = maxreg\ngamma = 100\nmu = 0.01\n");
  const auto& sc = cfg.scenario;
  REQUIRE(sc.kind == SystemKind::MaxReg);
  REQUIRE(sc.dt == 1e-5);
  REQUIRE(sc.t_end == 20.0);
  REQUIRE(sc.disturbance.onset_time == 5.0);
  REQUIRE(sc.x0 == State{1.0, 0.0});
  REQUIRE(cfg.warnings.empty());
  REQUIRE(cfg.window == 2.0);
}

TEST_CASE("default window is capped by the horizon", "[config]") {
  REQUIRE(parse_config("t_end = 0.5\n").window == 0.5);
  REQUIRE_THROWS_WITH(parse_config("t_end = 0.5\nwindow = 1\n"), ContainsSubstring("window"));
}

TEST_CASE("comments, blanks and spacing", "[config]") {
  const auto cfg = parse_config("# scenario\n\n  gamma=50   # gain\nx0_2 = -0.5\ndist_kind = constant\ndist_amp = 2\n");
  REQUIRE(cfg.scenario.params.gamma == 50.0);
  REQUIRE(cfg.scenario.x0.x2 == -0.5);
  REQUIRE(cfg.scenario.disturbance.kind == DisturbanceKind::Constant);
  REQUIRE(cfg.scenario.params.dist_bound == 2.0);
}

TEST_CASE("constraint errors name the key and line", "[config]") {
  try {
    parse_config("system = maxreg\ngamma = -1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.key() == "gamma");
    REQUIRE(e.line() == 2);
    REQUIRE_THAT(e.what(), ContainsSubstring("gamma must be > 0"));
  }
}

TEST_CASE("unknown keys, duplicates and type mismatches are rejected", "[config]") {
  REQUIRE_THROWS_WITH(parse_config("gama = 3\n"), ContainsSubstring("unknown key"));
  REQUIRE_THROWS_WITH(parse_config("mu = 0.1\nmu = 0.2\n"), ContainsSubstring("duplicate"));
  REQUIRE_THROWS_WITH(parse_config("dt = fast\n"), ContainsSubstring("finite number"));
  REQUIRE_THROWS_WITH(parse_config("decimation = 2.5\n"), ContainsSubstring("integer"));
  REQUIRE_THROWS_WITH(parse_config("system = sliding\n"), ContainsSubstring("system"));
  REQUIRE_THROWS_WITH(parse_config("just text\n"), ContainsSubstring("key = value"));
  REQUIRE_THROWS_WITH(parse_config("t_end = 1.000003\n"), ContainsSubstring("multiple of dt"));
  REQUIRE_THROWS_WITH(parse_config("dist_kind = constant\ndist_amp = 2\ndist_bound = 1\n"),
                      ContainsSubstring("dist_bound"));
  REQUIRE_THROWS_WITH(parse_config("dist_kind = table\n"), ContainsSubstring("dist_table"));
  REQUIRE_THROWS_WITH(parse_config("plot = maybe\n"), ContainsSubstring("true/false"));
}

TEST_CASE("original system ignores mu with a warning", "[config]") {
  const auto cfg = parse_config("system = original\nmu = 0.01\n");
  REQUIRE(cfg.scenario.kind == SystemKind::Original);
  REQUIRE(cfg.warnings.size() == 1);
  REQUIRE_THAT(cfg.warnings[0], ContainsSubstring("mu"));
}

TEST_CASE("overrides beat file keys", "[config]") {
  const auto cfg = parse_config("gamma = 10\n", {parse_override("gamma=20"), {"out", "x.csv"}});
  REQUIRE(cfg.scenario.params.gamma == 20.0);
  REQUIRE(cfg.out == "x.csv");
  REQUIRE_THROWS_AS(parse_override("gamma"), ConfigError);
  try {
    parse_config("", {{"mu", "-3"}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.line() == 0);
    REQUIRE_THAT(e.what(), ContainsSubstring("override mu"));
  }
}

TEST_CASE("harmonic disturbance on the original system needs a frequency", "[config]") {
  REQUIRE_THROWS_WITH(parse_config("system = original\ndist_kind = harmonic\ndist_amp = 1\n"),
                      ContainsSubstring("dist_freq"));
  REQUIRE_NOTHROW(parse_config("system = original\ndist_kind = harmonic\ndist_amp = 1\ndist_freq = 100\n"));
}

TEST_CASE("dt environment override", "[config]") {
  auto cfg = parse_config("");
  ::unsetenv(kDtEnvVar);
  REQUIRE_FALSE(apply_env_overrides(cfg));
  ::setenv(kDtEnvVar, "1e-3", 1);
  REQUIRE(apply_env_overrides(cfg));
  REQUIRE(cfg.scenario.dt == 1e-3);
  ::setenv(kDtEnvVar, "zero", 1);
  REQUIRE_THROWS_AS(apply_env_overrides(cfg), ConfigError);
  ::unsetenv(kDtEnvVar);
}
