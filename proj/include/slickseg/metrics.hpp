#pragma once

#include "slickseg/field.hpp"
#include "slickseg/log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace slickseg {

struct ConfusionCounts {
  long long tp = 0, fp = 0, tn = 0, fn = 0;  // positive = oil
  long long total() const { return tp + fp + tn + fn; }
};

namespace detail {

inline void require_binary(const RealField& f, const char* what) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (f(i) != 0.0 && f(i) != 1.0)
      throw std::invalid_argument(std::string(what) +
                                  ": field is not binary (values must be 0 or 1)");
}

}  // namespace detail

inline ConfusionCounts confusion(const RealField& mask, const RealField& truth) {
  detail::require_same_dims(mask.rows(), mask.cols(), truth.rows(), truth.cols(),
                            "confusion");
  detail::require_binary(mask, "confusion: mask");
  detail::require_binary(truth, "confusion: truth");
  ConfusionCounts c;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    const bool m = mask(i) != 0.0, t = truth(i) != 0.0;
    if (m && t)
      ++c.tp;
    else if (m && !t)
      ++c.fp;
    else if (!m && t)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

inline Real accuracy(const ConfusionCounts& c) {
  if (c.total() <= 0) throw std::invalid_argument("accuracy: no pixels counted");
  return Real(c.tp + c.tn) / Real(c.total());
}

/// tp / (tp + fp). With no detections: 1.0 if there was nothing to detect,
/// else 0.0 (logged).
inline Real precision(const ConfusionCounts& c) {
  if (c.tp + c.fp == 0) {
    warn_once("precision.empty",
              "precision requested with no detected pixels; applying the "
              "no-detection convention");
    return c.fn == 0 ? 1.0 : 0.0;
  }
  return Real(c.tp) / Real(c.tp + c.fp);
}

struct RocCurve {
  std::vector<std::pair<Real, Real>> points;  // (fpr, tpr), fpr non-decreasing
  std::vector<Real> thresholds;               // matching; +/-inf at endpoints
  bool degenerate = false;                    // constant score field
};

/// Threshold sweep over the score oil_sign * phi (larger score = more oil).
/// Thresholds run from the score maximum down to the minimum; the (0,0) and
/// (1,1) endpoints are appended.
inline RocCurve roc_sweep(const RealField& phi, const RealField& truth,
                          int oil_sign, int n_thresholds) {
  detail::require_same_dims(phi.rows(), phi.cols(), truth.rows(), truth.cols(),
                            "roc_sweep");
  detail::require_binary(truth, "roc_sweep: truth");
  if (oil_sign != 1 && oil_sign != -1)
    throw std::invalid_argument("roc_sweep: oil_sign must be +1 or -1");
  if (n_thresholds < 2)
    throw std::invalid_argument("roc_sweep: need at least 2 thresholds");

  const RealField score = oil_sign > 0 ? phi : RealField(-phi);
  const Real lo = score.minCoeff(), hi = score.maxCoeff();
  const Real inf = std::numeric_limits<Real>::infinity();

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  curve.thresholds.push_back(inf);
  if (lo == hi) {
    curve.degenerate = true;
    log_info("roc_sweep: constant score field, returning the degenerate "
             "two-point curve");
  } else {
    const long long pos = static_cast<long long>(truth.sum());
    const long long neg = static_cast<long long>(truth.size()) - pos;
    for (int i = 0; i < n_thresholds; ++i) {
      const Real t = hi - (hi - lo) * Real(i) / Real(n_thresholds - 1);
      long long tp = 0, fp = 0;
      for (Eigen::Index j = 0; j < score.size(); ++j) {
        if (score(j) >= t) {
          if (truth(j) != 0.0)
            ++tp;
          else
            ++fp;
        }
      }
      const Real tpr = pos > 0 ? Real(tp) / Real(pos) : 1.0;
      const Real fpr = neg > 0 ? Real(fp) / Real(neg) : 0.0;
      curve.points.emplace_back(fpr, tpr);
      curve.thresholds.push_back(t);
    }
  }
  curve.points.emplace_back(1.0, 1.0);
  curve.thresholds.push_back(-inf);

  // Loosening the threshold can only grow the mask, so the sweep is already
  // monotone; the sort keeps the invariant explicit for exotic inputs.
  std::vector<std::size_t> order(curve.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return curve.points[a] < curve.points[b];
  });
  RocCurve sorted;
  sorted.degenerate = curve.degenerate;
  for (std::size_t i : order) {
    sorted.points.push_back(curve.points[i]);
    sorted.thresholds.push_back(curve.thresholds[i]);
  }
  return sorted;
}

/// Trapezoidal area under the curve.
inline Real roc_auc(const RocCurve& curve) {
  Real area = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& [x0, y0] = curve.points[i - 1];
    const auto& [x1, y1] = curve.points[i];
    area += (x1 - x0) * 0.5 * (y0 + y1);
  }
  return area;
}

struct BatchStats {
  Real mean = 0;
  Real stddev = 0;  // population
  Real min = 0;
  Real max = 0;
  Real q1 = 0, median = 0, q3 = 0;
};

/// Mean, population standard deviation, extremes and linearly interpolated
/// quartiles of a non-empty sample.
inline BatchStats batch_stats(const std::vector<Real>& values) {
  if (values.empty())
    throw std::invalid_argument("batch_stats: empty value list");
  BatchStats s;
  const std::size_t n = values.size();
  Real sum = 0;
  for (Real v : values) sum += v;
  s.mean = sum / Real(n);
  Real sq = 0;
  for (Real v : values) sq += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(sq / Real(n));
  std::vector<Real> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  auto quantile = [&](Real p) {
    const Real pos = p * Real(n - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const Real frac = pos - Real(i);
    return i + 1 < n ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
                     : sorted[i];
  };
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  return s;
}

}  // namespace slickseg
