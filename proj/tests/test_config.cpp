#include <doctest.h>

#include <string>

#include "magnl/config.hpp"
#include "magnl/errors.hpp"

using namespace magnl;

namespace {

const char* kMinimal = R"({
  "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
  "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
  "epsilons": [0.2, 0.1]
})";

void expect_config_error(const std::string& json, const std::string& needle) {
  try {
    parse_config(json);
    FAIL("expected ConfigError for: ", json);
  } catch (const ConfigError& e) {
    INFO(e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("minimal config fills the documented defaults") {
  const SweepConfig cfg = parse_config(kMinimal);
  CHECK(cfg.mesh_h() == doctest::Approx(0.1 / 8));
  CHECK(cfg.m == 6);
  CHECK(cfg.tol == doctest::Approx(1e-8));
  CHECK(cfg.eta == 0.0);  // auto
  CHECK(cfg.grid_n == 32);
  CHECK(cfg.seed == 12345);
  CHECK(cfg.field.b0 == doctest::Approx(1.0));
  CHECK(cfg.hole.kind == HoleKind::Disk);
}

TEST_CASE("unknown keys are rejected by name") {
  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "holes": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1]
  })",
                      "holes");
  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1, "width": 2},
    "hole": {"type": "none"},
    "epsilons": [0.2, 0.1]
  })",
                      "width");
}

TEST_CASE("epsilon ordering violations name the field") {
  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.1, 0.2]
  })",
                      "epsilons");
}

TEST_CASE("field and gauge parsing") {
  const SweepConfig cfg = parse_config(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1],
    "field": {"type": "uniform", "b0": 2.5, "gauge": {"chi": "xy", "amplitude": 0.5}}
  })");
  CHECK(cfg.field.b0 == doctest::Approx(2.5));
  REQUIRE(cfg.field.gauges.size() == 1);
  CHECK(cfg.field.gauges[0].amplitude == doctest::Approx(0.5));

  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1],
    "field": {"type": "uniform", "b0": 1, "gauge": {"chi": "cubic", "amplitude": 1}}
  })",
                      "chi");
}

TEST_CASE("eta accepts auto or a number") {
  SweepConfig cfg = parse_config(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1],
    "eta": "auto"
  })");
  CHECK(cfg.eta == 0.0);
  cfg = parse_config(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1],
    "eta": 0.75
  })");
  CHECK(cfg.eta == doctest::Approx(0.75));
  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1],
    "eta": true
  })",
                      "eta");
}

TEST_CASE("hole variants parse and validate") {
  const SweepConfig ring = parse_config(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "split-ring", "cx": 0.5, "cy": 0.5, "gap_fraction": 0.1},
    "epsilons": [0.2, 0.1]
  })");
  CHECK(ring.hole.kind == HoleKind::SplitRing);
  CHECK(ring.hole.gap_fraction == doctest::Approx(0.1));

  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "convex-polygon", "cx": 0.5, "cy": 0.5, "vertices": [[1, 0], "x"]},
    "epsilons": [0.2, 0.1]
  })",
                      "vertices");
  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "wedge", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1]
  })",
                      "hole.type");
}

TEST_CASE("structural errors") {
  expect_config_error("not json at all", "JSON");
  expect_config_error(R"({"hole": {"type": "none"}, "epsilons": [0.1]})", "domain");
  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "none"},
    "epsilons": []
  })",
                      "epsilons");
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
  try {
    load_config("/nonexistent/path.json");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/path.json") != std::string::npos);
  }
}

TEST_CASE("cross-field validation: h must resolve the smallest epsilon") {
  expect_config_error(R"({
    "domain": {"type": "rectangle", "x0": 0, "y0": 0, "x1": 1, "y1": 1},
    "hole": {"type": "disk", "cx": 0.5, "cy": 0.5},
    "epsilons": [0.2, 0.1],
    "h": 0.05
  })",
                      "h");
}

TEST_SUITE_END();
