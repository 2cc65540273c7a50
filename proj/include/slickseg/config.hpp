#pragma once

#include "slickseg/geometry.hpp"
#include "slickseg/models.hpp"
#include "slickseg/synth.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slickseg {

/// All segmentation tunables. Defaults follow the stable parameter regime:
/// fitting weights just above 2.3 with the region-1 weight smaller, a small
/// contour weight, and an explicit time step satisfying dt * mu <= 1/4.
struct SegmentationConfig {
  Real gamma1 = 2.3;    // region-1 (positive phi) fitting weight
  Real gamma2 = 2.304;  // region-2 fitting weight
  Real nu = 0.0001;     // contour-length weight
  Real mu = 1.0;        // distance-regularization weight
  Real epsilon = 1.5;   // Heaviside smoothing, pixels
  Real tau = 9.0;       // localization kernel scale, pixels
  Real dt = 0.2;        // explicit time step
  Real c0 = 4.0;        // initialization step height
  int max_iters = 3000;
  Real tol = 1e-5;      // relative energy-change convergence threshold
  DistributionModel model = DistributionModel::exponential();
  std::optional<Shape> init;  // initialization geometry (rect or circle)

  /// Throws on impossible values; logs warnings for values outside the
  /// recommended ranges (nu window, gamma ordering).
  void validate() const;
};

/// One parameter-sweep cell: fitting weights, contour weight, model.
struct SweepCell {
  Real gamma1 = 2.3;
  Real gamma2 = 2.304;
  Real nu = 0.0001;
  DistributionModel model = DistributionModel::exponential();
};

// --- flat key=value parsing ("#" comments, one pair per line) --------------

std::string format_real(Real v);  // shortest round-trip decimal
Real parse_real(const std::string& token, const std::string& context);
long long parse_int(const std::string& token, const std::string& context);

/// "rect:x0,y0,x1,y1", "circle:cx,cy,r" or "polygon:x1,y1;x2,y2;..."
Shape parse_shape(const std::string& value);
std::string shape_to_string(const Shape& shape);

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::string& text, const std::string& source_name);

/// Applies one key=value pair; throws on unknown keys or bad values.
void apply_config_pair(SegmentationConfig& cfg, const std::string& key,
                       const std::string& value);

SegmentationConfig parse_config(const std::string& text,
                                const std::string& source_name = "<config>");
SegmentationConfig load_config(const std::string& path);

/// Canonical dump; parse_config(dump_config(c)) reproduces c exactly.
std::string dump_config(const SegmentationConfig& cfg);

/// Scene list files share the key=value format. Unprefixed keys set defaults
/// for every scene; "sceneN.key" overrides scene N. "scenes = N" sets the
/// count (default 1). Scenes without an explicit seed get base seed + index.
std::vector<SceneSpec> parse_scene_file(const std::string& text,
                                        const std::string& source_name);
std::vector<SceneSpec> load_scene_file(const std::string& path);

/// Sweep grids: "cells = N" plus "cellK.gamma1/gamma2/nu/model[/ks/upsilon/
/// kappa]" entries; unprefixed keys set defaults for every cell.
std::vector<SweepCell> parse_grid_file(const std::string& text,
                                       const std::string& source_name);
std::vector<SweepCell> load_grid_file(const std::string& path);

}  // namespace slickseg
