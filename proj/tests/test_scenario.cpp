#include <doctest.h>

#include "absentia/runner.hpp"
#include "absentia/scenario.hpp"

using namespace absentia;

namespace {

const char* kMinimal = R"(
[field]
type = step
b0 = 1.0
r0 = 0.25

[certify]
theorem = thm1
)";

}  // namespace

TEST_CASE("minimal config parses with defaults echoed") {
  const ScenarioConfig cfg = parse_config_text(kMinimal, "minimal");
  CHECK(cfg.field.type == FieldType::step);
  CHECK(cfg.field.b0 == 1.0);
  CHECK(cfg.field.r0 == 0.25);
  CHECK(cfg.grid.n_r == 128);       // default
  CHECK(cfg.solver.seed == 42);     // default
  CHECK(cfg.certify.theorem == TheoremId::thm1);
  bool saw_default = false;
  for (const auto& [k, v] : cfg.echo())
    if (k == "grid.n_theta") {
      CHECK(v == "64");
      saw_default = true;
    }
  CHECK(saw_default);
}

TEST_CASE("misspelled keys name the nearest valid key") {
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nnr = 4\n", "bad"),
                       doctest::Contains("n_r"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[sovler]\ntol = 1\n", "bad"),
                       doctest::Contains("solver"), std::runtime_error);
}

TEST_CASE("syntax and range errors") {
  CHECK_THROWS_WITH_AS(parse_config_text("[grid\n", "bad"),
                       doctest::Contains("bad:1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("tol = 1\n", "bad"),
                       doctest::Contains("section"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config_text("[grid]\nr_min = 5\nr_max = 2\n", "bad"),
      doctest::Contains("r_min"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn_r = seven\n", "bad"),
                       doctest::Contains("integer"), std::runtime_error);
}

TEST_CASE("builders") {
  SUBCASE("AB scenarios excise the origin by default") {
    ScenarioConfig cfg = parse_config_text("[field]\ntype = ab\n", "t");
    const PolarGrid g = build_grid(cfg.grid, cfg.field);
    CHECK(g.r_min() == doctest::Approx(cfg.grid.r_max * 1e-3));
    CHECK(g.inner_excised());
  }
  SUBCASE("sweep grids scale the radial resolution") {
    ScenarioConfig cfg = parse_config_text(kMinimal, "t");
    const PolarGrid g5 = build_grid(cfg.grid, cfg.field, 5.0);
    const PolarGrid g20 = build_grid(cfg.grid, cfg.field, 20.0);
    CHECK(g5.n_r() == 64);    // 128 * sqrt(5/20)
    CHECK(g20.n_r() == 128);
  }
  SUBCASE("well decomposition resolves to all_v2 by default") {
    ScenarioConfig cfg =
        parse_config_text("[potential]\nre_type = well\n", "t");
    CHECK(resolved_decomposition(cfg.potential, cfg.certify.decomposition) ==
          "all_v2 (auto: well edge is not W^{1,1})");
    const PotentialModel v =
        build_potential(cfg.potential, cfg.certify.decomposition);
    CHECK(v.v2(0.1) == doctest::Approx(-0.5));
    CHECK(v.v1(0.1) == 0.0);
  }
}

TEST_CASE("reports are deterministic apart from timings") {
  const char* text = R"(
[field]
type = none

[grid]
n_r = 16
n_theta = 8
r_max = 4.0
)";
  const ScenarioConfig cfg = parse_config_text(text, "t");
  RunOptions opts;
  opts.out_dir = "/tmp/absentia_test_out";
  nlohmann::ordered_json a = build_report(Command::identities, cfg, opts);
  nlohmann::ordered_json b = build_report(Command::identities, cfg, opts);
  a.erase("timings");
  b.erase("timings");
  CHECK(a.dump() == b.dump());
  CHECK(a["schema_version"] == 1);
  CHECK(a["scenario"].contains("grid.n_r"));
}
