#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slickseg/pipeline.hpp"
#include "slickseg/synth.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace slickseg;

namespace {

// Small, fast configuration for unit-level runs.
SegmentationConfig quick_cfg() {
  SegmentationConfig cfg;
  cfg.tau = 3.0;
  cfg.init = Rect{12, 12, 20, 20};
  cfg.max_iters = 200;
  return cfg;
}

Scene small_scene(std::uint64_t seed, Real oil_sigma = 0.2) {
  SceneSpec spec;
  spec.width = 32;
  spec.height = 32;
  spec.oil_shape = Circle{16, 16, 10};
  spec.background_sigma = 1.0;
  spec.oil_sigma = oil_sigma;
  spec.seed = seed;
  return generate(spec);
}

RealField darkness_mask(const RealField& phi, const RealField& I) {
  Real m1 = 0, m2 = 0;
  long long c1 = 0, c2 = 0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    if (phi(i) > 0) {
      m1 += I(i);
      ++c1;
    } else {
      m2 += I(i);
      ++c2;
    }
  }
  const Real mean1 = c1 ? m1 / c1 : std::numeric_limits<Real>::infinity();
  const Real mean2 = c2 ? m2 / c2 : std::numeric_limits<Real>::infinity();
  const bool oil1 = mean1 <= mean2;
  RealField mask(phi.rows(), phi.cols());
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    mask(i) = ((phi(i) > 0) == oil1) ? 1.0 : 0.0;
  return mask;
}

}  // namespace

TEST_CASE("uniform image yields equal sigma fields and no data force") {
  SegmentationConfig cfg = quick_cfg();
  cfg.gamma1 = cfg.gamma2 = 2.3;
  cfg.model = DistributionModel::exponential(2.0);
  RealField I = RealField::Constant(32, 32, 6.0);
  SegmentationState st = init_state(I, cfg);
  SegmentationState next = step(st, I, cfg);
  CHECK((next.sigma.sigma1 - 3.0).abs().maxCoeff() < 1e-10);  // c / ks
  CHECK((next.sigma.sigma2 - 3.0).abs().maxCoeff() < 1e-10);
  GaussianKernel<Real> k = build_kernel(cfg.tau);
  const Floors floors = Floors::for_image(I);
  RealField e1 = epsilon_field(cfg.model, k, I, next.sigma.sigma1, floors);
  RealField e2 = epsilon_field(cfg.model, k, I, next.sigma.sigma2, floors);
  CHECK((cfg.gamma2 * e2 - cfg.gamma1 * e1).abs().maxCoeff() < 1e-8);
}

TEST_CASE("a zero time step only refreshes sigma and appends the trace") {
  SegmentationConfig cfg = quick_cfg();
  cfg.dt = 0.0;
  Scene sc = small_scene(5);
  SegmentationState st = init_state(sc.intensity, cfg);
  SegmentationState next = step(st, sc.intensity, cfg);
  CHECK((next.phi == st.phi).all());
  CHECK(next.iter == st.iter + 1);
  CHECK(next.trace.size() == st.trace.size() + 1);
  CHECK(next.sigma.sigma1.size() == st.sigma.sigma1.size());
}

TEST_CASE("the contour moves toward the true boundary within 50 steps") {
  SegmentationConfig cfg = quick_cfg();
  cfg.dt = 0.25;
  cfg.c0 = 3.0;
  for (std::uint64_t seed : {6, 9, 13}) {
    Scene sc = small_scene(seed, 0.05);
    SegmentationState st = init_state(sc.intensity, cfg);
    const auto truth_boundary = oracle::mask_boundary(sc.truth);
    const Real before =
        oracle::hausdorff(extract_contour(st.phi), truth_boundary);
    for (int i = 0; i < 50; ++i) st = step(st, sc.intensity, cfg);
    const Real after =
        oracle::hausdorff(extract_contour(st.phi), truth_boundary);
    CHECK(after < before);
  }
}

TEST_CASE("trace length is always iteration count plus one") {
  SegmentationConfig cfg = quick_cfg();
  Scene sc = small_scene(7);
  SegmentationState st = init_state(sc.intensity, cfg);
  CHECK(st.iter == 0);
  CHECK(st.trace.size() == 1);
  for (int i = 1; i <= 7; ++i) {
    st = step(st, sc.intensity, cfg);
    CHECK(st.iter == i);
    CHECK(st.trace.size() == std::size_t(i) + 1);
  }
}

TEST_CASE("one evolution step never raises the energy materially") {
  SegmentationConfig cfg = quick_cfg();
  Scene sc = small_scene(8);
  SegmentationState st = init_state(sc.intensity, cfg);
  for (int i = 1; i <= 60; ++i) {
    st = step(st, sc.intensity, cfg);
    if (i < 3) continue;
    const Real prev = st.trace[st.trace.size() - 2].total;
    const Real cur = st.trace.back().total;
    CHECK(cur <= prev + 1e-6 * std::abs(prev));
  }
}

TEST_CASE("runs are deterministic") {
  SegmentationConfig cfg = quick_cfg();
  cfg.max_iters = 120;
  Scene sc = small_scene(9);
  std::vector<EnergyBreakdown> t1, t2;
  SegmentationResult a = run(sc.intensity, cfg, &t1);
  SegmentationResult b = run(sc.intensity, cfg, &t2);
  CHECK((a.oil_mask == b.oil_mask).all());
  CHECK(a.iterations_used == b.iterations_used);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t i = 0; i < t1.size(); ++i) CHECK(t1[i].total == t2[i].total);
}

TEST_CASE("homogeneous image with equal weights converges and ties to region 1") {
  SegmentationConfig cfg = quick_cfg();
  cfg.gamma1 = cfg.gamma2 = 2.3;
  cfg.max_iters = 400;
  RealField I = RealField::Constant(32, 32, 2.0);
  SegmentationResult res = run(I, cfg);
  CHECK(res.converged);
  // Equal means: the tie-break labels region 1 (positive phi, the exterior).
  CHECK(res.oil_mask(0, 0) == 1.0);
  CHECK(res.oil_mask(16, 16) == 0.0);
  CHECK(res.region_means.first == doctest::Approx(2.0));
  CHECK(res.region_means.second == doctest::Approx(2.0));
}

TEST_CASE("flipping the initial sign leaves the darkness labeling unchanged") {
  SegmentationConfig cfg = quick_cfg();
  cfg.gamma1 = cfg.gamma2 = 2.3;
  Scene sc = small_scene(10);
  SegmentationState a = init_state(sc.intensity, cfg);
  SegmentationState b = a;
  b.phi = -a.phi;
  for (int i = 0; i < 80; ++i) {
    a = step(a, sc.intensity, cfg);
    b = step(b, sc.intensity, cfg);
  }
  RealField mask_a = darkness_mask(a.phi, sc.intensity);
  RealField mask_b = darkness_mask(b.phi, sc.intensity);
  long long diff = 0;
  for (Eigen::Index i = 0; i < mask_a.size(); ++i)
    if (mask_a(i) != mask_b(i)) ++diff;
  CHECK(diff == 0);
}

TEST_CASE("non-finite evolution raises an error naming the iteration") {
  SegmentationConfig cfg = quick_cfg();
  Scene sc = small_scene(11);
  SegmentationState st = init_state(sc.intensity, cfg);
  SegmentationConfig absurd = cfg;
  absurd.dt = 1e308;  // step overflows phi to infinity
  try {
    st = step(st, sc.intensity, absurd);
    FAIL("expected evolution_error");
  } catch (const evolution_error& e) {
    CHECK(e.iteration() == 1);
    CHECK(std::string(e.what()).find("iteration 1") != std::string::npos);
  }
}

TEST_CASE("contour extraction emits inside pixels adjacent to the outside") {
  RealField phi = RealField::Constant(4, 4, 1.0);
  phi(1, 1) = -1.0;
  auto contour = extract_contour(phi);
  REQUIRE(contour.size() == 1);
  CHECK(contour[0] == std::pair<int, int>(1, 1));
  CHECK(extract_contour(RealField::Constant(4, 4, 1.0)).empty());
}

TEST_CASE("oil is labeled as the darker region regardless of sign") {
  SegmentationConfig cfg = quick_cfg();
  cfg.dt = 0.25;
  cfg.c0 = 3.0;
  cfg.max_iters = 500;
  Scene sc = small_scene(12, 0.05);
  SegmentationResult res = run(sc.intensity, cfg);
  long long agree = 0;
  for (Eigen::Index i = 0; i < res.oil_mask.size(); ++i)
    if (res.oil_mask(i) == sc.truth(i)) ++agree;
  CHECK(Real(agree) / Real(res.oil_mask.size()) > 0.9);
  CHECK(res.region_means.second < res.region_means.first);
}

TEST_CASE("run agrees with repeated reference steps") {
  SegmentationConfig cfg = quick_cfg();
  cfg.max_iters = 3;
  cfg.tol = 1e-300;  // never converge within three iterations
  Scene sc = small_scene(14);
  std::vector<EnergyBreakdown> trace;
  run(sc.intensity, cfg, &trace);

  SegmentationState st = init_state(sc.intensity, cfg);
  for (int i = 0; i < 3; ++i) st = step(st, sc.intensity, cfg);
  REQUIRE(trace.size() == st.trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i)
    CHECK(std::abs(trace[i].total - st.trace[i].total) <=
          1e-9 * std::abs(st.trace[i].total));
}

TEST_CASE("missing initialization geometry and empty images are rejected") {
  SegmentationConfig cfg = quick_cfg();
  cfg.init.reset();
  RealField I = RealField::Constant(16, 16, 1.0);
  CHECK_THROWS_AS(run(I, cfg), std::invalid_argument);
  SegmentationConfig cfg2 = quick_cfg();
  RealField empty;
  CHECK_THROWS_AS(run(empty, cfg2), std::invalid_argument);
}
