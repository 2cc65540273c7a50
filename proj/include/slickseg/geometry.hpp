#pragma once

#include "slickseg/field.hpp"

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

namespace slickseg {

// Shapes live in continuous pixel coordinates; pixel (x, y) covers
// [x, x+1) x [y, y+1) and is tested at its center (x+0.5, y+0.5).

struct Rect {
  Real x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

struct Circle {
  Real cx = 0, cy = 0, r = 0;
};

struct Polygon {
  std::vector<std::pair<Real, Real>> vertices;  // (x, y)
};

using Shape = std::variant<Rect, Circle, Polygon>;

inline bool contains(const Rect& s, Real px, Real py) {
  return px > s.x0 && px < s.x1 && py > s.y0 && py < s.y1;
}

inline bool contains(const Circle& s, Real px, Real py) {
  const Real dx = px - s.cx, dy = py - s.cy;
  return dx * dx + dy * dy < s.r * s.r;
}

// Even-odd crossing rule.
inline bool contains(const Polygon& s, Real px, Real py) {
  const std::size_t n = s.vertices.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& [xi, yi] = s.vertices[i];
    const auto& [xj, yj] = s.vertices[j];
    if ((yi > py) != (yj > py) &&
        px < (xj - xi) * (py - yi) / (yj - yi) + xi)
      inside = !inside;
  }
  return inside;
}

inline bool contains(const Shape& s, Real px, Real py) {
  return std::visit([&](const auto& g) { return contains(g, px, py); }, s);
}

/// Indicator field of the shape over a width x height raster (1 inside).
inline RealField rasterize(const Shape& s, Eigen::Index width,
                           Eigen::Index height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("rasterize: raster dimensions must be positive");
  RealField mask(height, width);
  for (Eigen::Index y = 0; y < height; ++y)
    for (Eigen::Index x = 0; x < width; ++x)
      mask(y, x) = contains(s, Real(x) + 0.5, Real(y) + 0.5) ? 1.0 : 0.0;
  return mask;
}

}  // namespace slickseg
