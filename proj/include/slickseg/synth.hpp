#pragma once

#include "slickseg/field.hpp"
#include "slickseg/geometry.hpp"
#include "slickseg/models.hpp"

#include <cstdint>
#include <stdexcept>

namespace slickseg {

/// Recipe for a speckled two-region test scene with exact ground truth.
struct SceneSpec {
  Eigen::Index width = 128;
  Eigen::Index height = 128;
  Shape oil_shape = Circle{64, 64, 30};
  Real background_sigma = 1.0;
  Real oil_sigma = 0.2;  // oil is darker: must stay below background_sigma
  DistributionModel model = DistributionModel::exponential();
  std::uint64_t seed = 0;
};

struct Scene {
  RealField intensity;
  RealField truth;  // 1 inside the oil shape
};

namespace detail {

// SplitMix64 step; used to derive independent per-row streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

inline void validate(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0)
    throw std::invalid_argument("scene: dimensions must be positive");
  if (!(spec.background_sigma > 0) || !(spec.oil_sigma > 0))
    throw std::invalid_argument("scene: sigma values must be positive");
  if (!(spec.oil_sigma < spec.background_sigma))
    throw std::invalid_argument(
        "scene: oil_sigma must be smaller than background_sigma (oil is the "
        "darker region)");
  spec.model.validate();
}

/// Samples every pixel independently from the model, with the oil scale
/// inside the shape and the background scale outside. Rows draw from
/// independently seeded streams, so the result is reproducible even when
/// rows are generated in parallel.
inline Scene generate(const SceneSpec& spec) {
  validate(spec);
  Scene scene;
  scene.truth = rasterize(spec.oil_shape, spec.width, spec.height);
  const Real area = scene.truth.sum();
  const Real total = Real(spec.width) * Real(spec.height);
  if (area == 0) throw std::invalid_argument("scene: oil shape covers no pixel");
  if (area < 0.01 * total || area > 0.60 * total)
    throw std::invalid_argument(
        "scene: oil area must cover between 1% and 60% of the image");
  scene.intensity.resize(spec.height, spec.width);
  for (Eigen::Index y = 0; y < spec.height; ++y) {
    std::mt19937_64 rng(detail::mix_seed(spec.seed, std::uint64_t(y)));
    for (Eigen::Index x = 0; x < spec.width; ++x) {
      const Real s = scene.truth(y, x) > 0 ? spec.oil_sigma : spec.background_sigma;
      scene.intensity(y, x) = draw_intensity(spec.model, s, rng);
    }
  }
  return scene;
}

}  // namespace slickseg
