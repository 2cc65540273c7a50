// Synthetic acceptance corpus: five oil-blob shapes on 128x128 rasters, five
// seeds each, with three initialization rectangles per shape (inside the
// blob, straddling its boundary, loosely surrounding it).
#pragma once

#include "slickseg/geometry.hpp"
#include "slickseg/synth.hpp"

#include <cstdint>
#include <vector>

namespace fixture {

using slickseg::Circle;
using slickseg::Polygon;
using slickseg::Rect;
using slickseg::Shape;

struct ShapeCase {
  Shape blob;
  Rect inside;
  Rect straddle;
  Rect surround;
};

inline const std::vector<ShapeCase>& shape_cases() {
  static const std::vector<ShapeCase> cases = {
      {Circle{64, 64, 30},
       Rect{48, 48, 80, 80}, Rect{20, 30, 70, 80}, Rect{30, 30, 98, 98}},
      {Rect{30, 40, 95, 85},
       Rect{40, 50, 85, 75}, Rect{10, 20, 60, 70}, Rect{26, 36, 99, 89}},
      {Circle{50, 70, 24},
       Rect{36, 56, 64, 84}, Rect{40, 60, 90, 110}, Rect{22, 42, 78, 98}},
      {Polygon{{{20, 30}, {70, 20}, {100, 60}, {80, 100}, {35, 90}}},
       Rect{40, 40, 75, 75}, Rect{55, 50, 115, 105}, Rect{16, 16, 104, 104}},
      {Rect{40, 20, 75, 108},
       Rect{48, 32, 68, 96}, Rect{20, 60, 60, 100}, Rect{36, 16, 79, 112}},
  };
  return cases;
}

inline const std::vector<std::uint64_t>& seeds() {
  static const std::vector<std::uint64_t> s = {11, 23, 37, 41, 59};
  return s;
}

inline slickseg::SceneSpec scene_spec(std::size_t shape_index,
                                      std::size_t seed_index) {
  slickseg::SceneSpec spec;
  spec.width = 128;
  spec.height = 128;
  spec.oil_shape = shape_cases()[shape_index].blob;
  spec.background_sigma = 1.0;
  spec.oil_sigma = 0.2;
  spec.model = slickseg::DistributionModel::exponential(1.0);
  spec.seed = seeds()[seed_index] + 101 * shape_index;
  return spec;
}

}  // namespace fixture
