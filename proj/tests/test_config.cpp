#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slickseg/config.hpp"

#include <cmath>

using namespace slickseg;

TEST_CASE("dumped configs reparse to an equal config") {
  SegmentationConfig cfg;
  cfg.gamma1 = 2.31;
  cfg.gamma2 = 2.3051;
  cfg.nu = 0.00007;
  cfg.mu = 0.8;
  cfg.epsilon = 1.25;
  cfg.tau = 4.5;
  cfg.dt = 0.05;
  cfg.c0 = 3.0;
  cfg.max_iters = 1234;
  cfg.tol = 3.5e-7;
  cfg.model = DistributionModel::weibull(1.7);
  cfg.init = Circle{31.5, 40.25, 12.125};

  SegmentationConfig back = parse_config(dump_config(cfg));
  CHECK(back.gamma1 == cfg.gamma1);
  CHECK(back.gamma2 == cfg.gamma2);
  CHECK(back.nu == cfg.nu);
  CHECK(back.mu == cfg.mu);
  CHECK(back.epsilon == cfg.epsilon);
  CHECK(back.tau == cfg.tau);
  CHECK(back.dt == cfg.dt);
  CHECK(back.c0 == cfg.c0);
  CHECK(back.max_iters == cfg.max_iters);
  CHECK(back.tol == cfg.tol);
  CHECK(back.model.kind == cfg.model.kind);
  CHECK(back.model.upsilon == cfg.model.upsilon);
  REQUIRE(back.init.has_value());
  const Circle c = std::get<Circle>(*back.init);
  CHECK(c.cx == 31.5);
  CHECK(c.cy == 40.25);
  CHECK(c.r == 12.125);
  // and the dump is a fixed point
  CHECK(dump_config(back) == dump_config(cfg));
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
  SegmentationConfig cfg = parse_config(
      "# leading comment\n"
      "\n"
      "  gamma1 =  2.4   # trailing comment\n"
      "tau=5\n");
  CHECK(cfg.gamma1 == 2.4);
  CHECK(cfg.tau == 5.0);
}

TEST_CASE("unknown keys, duplicates and bad values are rejected") {
  CHECK_THROWS_AS(parse_config("gamma3 = 1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("gamma1 = 1\ngamma1 = 2\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("gamma1 = abc\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("gamma1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("model = laplace\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("init = blob:1,2\n"), std::runtime_error);
}

TEST_CASE("shape values round-trip through their string forms") {
  for (const std::string s :
       {"rect:2,2,7,7", "circle:64,64,20.5", "polygon:0,0;10,0;5,8.25"}) {
    CHECK(shape_to_string(parse_shape(s)) == s);
  }
  CHECK_THROWS_AS(parse_shape("rect:1,2,3"), std::runtime_error);
  CHECK_THROWS_AS(parse_shape("polygon:0,0;1,1"), std::runtime_error);
  CHECK_THROWS_AS(parse_shape("circle"), std::runtime_error);
}

TEST_CASE("validation enforces hard invariants and accepts a null step") {
  SegmentationConfig cfg;
  cfg.init = Rect{1, 1, 5, 5};
  CHECK_NOTHROW(cfg.validate());

  SegmentationConfig null_step = cfg;
  null_step.dt = 0.0;
  CHECK_NOTHROW(null_step.validate());

  SegmentationConfig unstable = cfg;
  unstable.dt = 0.3;  // dt * mu > 0.25
  CHECK_THROWS_AS(unstable.validate(), std::invalid_argument);

  SegmentationConfig bad_gamma = cfg;
  bad_gamma.gamma1 = 0.0;
  CHECK_THROWS_AS(bad_gamma.validate(), std::invalid_argument);

  SegmentationConfig bad_iters = cfg;
  bad_iters.max_iters = 0;
  CHECK_THROWS_AS(bad_iters.validate(), std::invalid_argument);

  SegmentationConfig warn_only = cfg;  // out-of-range nu warns, not throws
  warn_only.nu = 0.01;
  CHECK_NOTHROW(warn_only.validate());

  SegmentationConfig swapped = cfg;  // gamma1 > gamma2 warns, not throws
  swapped.gamma1 = 2.4;
  CHECK_NOTHROW(swapped.validate());
}

TEST_CASE("scene files expand defaults, overrides and derived seeds") {
  const std::string text =
      "scenes = 3\n"
      "dims = 64x48\n"
      "shape = circle:32,24,12\n"
      "background_sigma = 1\n"
      "oil_sigma = 0.2\n"
      "model = exp\n"
      "seed = 100\n"
      "scene1.shape = rect:10,10,40,30\n"
      "scene2.seed = 777\n";
  auto scenes = parse_scene_file(text, "<test>");
  REQUIRE(scenes.size() == 3);
  CHECK(scenes[0].width == 64);
  CHECK(scenes[0].height == 48);
  CHECK(scenes[0].seed == 100);
  CHECK(scenes[1].seed == 101);
  CHECK(std::holds_alternative<Rect>(scenes[1].oil_shape));
  CHECK(scenes[2].seed == 777);
  CHECK(std::holds_alternative<Circle>(scenes[2].oil_shape));
}

TEST_CASE("scene files reject zero counts and out-of-range indices") {
  CHECK_THROWS_AS(parse_scene_file("scenes = 0\n", "<t>"), std::runtime_error);
  CHECK_THROWS_AS(parse_scene_file("scenes = 2\nscene5.seed = 1\n", "<t>"),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_scene_file("wibble = 2\n", "<t>"), std::runtime_error);
  CHECK_THROWS_AS(parse_scene_file("dims = 64\n", "<t>"), std::runtime_error);
}

TEST_CASE("grid files expand parameter cells") {
  const std::string text =
      "cells = 4\n"
      "gamma1 = 2.3\n"
      "model = exp\n"
      "cell0.nu = 0.00007\ncell0.gamma2 = 2.303\n"
      "cell1.nu = 0.00009\ncell1.gamma2 = 2.304\n"
      "cell2.nu = 0.0002\ncell2.gamma2 = 2.305\n"
      "cell3.nu = 0.0004\ncell3.gamma2 = 2.306\n";
  auto cells = parse_grid_file(text, "<test>");
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].nu == 0.00007);
  CHECK(cells[3].gamma2 == 2.306);
  for (const auto& c : cells) {
    CHECK(c.gamma1 == 2.3);
    CHECK(c.model.kind == ModelKind::exponential);
  }
  CHECK_THROWS_AS(parse_grid_file("cells = 0\n", "<t>"), std::runtime_error);
  CHECK_THROWS_AS(parse_grid_file("cell0.flux = 1\n", "<t>"), std::runtime_error);
}

TEST_CASE("real formatting is shortest round-trip") {
  for (Real v : {2.3, 0.00007, 1e-5, 3.0, 0.1, 1.0 / 3.0}) {
    CHECK(parse_real(format_real(v), "<t>") == v);
  }
  CHECK(format_real(2.3) == "2.3");
  CHECK(format_real(3.0) == "3");
}
