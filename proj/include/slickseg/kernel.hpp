#pragma once

#include "slickseg/field.hpp"

#include <cmath>
#include <stdexcept>

namespace slickseg {

/// Unnormalized isotropic Gaussian window weight at offset (fx, fy):
/// exp(-|f|^2 / (2 tau^2)) / (2 pi tau^2).
template <class Scalar>
Scalar gaussian_amplitude(Scalar tau, Scalar fx, Scalar fy) {
  const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
  return std::exp(-(fx * fx + fy * fy) / (Scalar(2) * tau * tau)) /
         (two_pi * tau * tau);
}

/// Truncated, discretely renormalized Gaussian localization window.
/// Truncation at 3 tau keeps >99.7% of the mass; renormalization restores the
/// unit sum that makes kernel-weighted ratios plain weighted averages.
template <class Scalar>
struct GaussianKernel {
  Scalar tau = 1;
  int radius = 0;                              // truncation half-width, pixels
  Eigen::Array<Scalar, Eigen::Dynamic, 1> taps;  // 1-D factor, sums to 1
  Field<Scalar> weights;                         // (2r+1)^2 outer product

  int size() const { return 2 * radius + 1; }
};

template <class Scalar>
GaussianKernel<Scalar> build_kernel(Scalar tau, int radius_override = 0) {
  if (!(tau > Scalar(0)))
    throw std::invalid_argument("build_kernel: tau must be positive");
  GaussianKernel<Scalar> k;
  k.tau = tau;
  k.radius = radius_override > 0
                 ? radius_override
                 : static_cast<int>(std::ceil(Scalar(3) * tau));
  if (k.radius < 1) k.radius = 1;
  const int n = k.size();
  k.taps.resize(n);
  for (int i = 0; i < n; ++i) {
    const Scalar o = Scalar(i - k.radius);
    k.taps[i] = std::exp(-o * o / (Scalar(2) * tau * tau));
  }
  k.taps /= k.taps.sum();
  k.weights = (k.taps.matrix() * k.taps.matrix().transpose()).array();
  return k;
}

/// Discrete correlation with the (symmetric) kernel under a replicate-edge
/// boundary, computed separably; identical to the direct 2-D form because the
/// edge clamp acts per axis. Both passes walk contiguous row segments.
template <class Scalar>
Field<Scalar> convolve(const GaussianKernel<Scalar>& k, const Field<Scalar>& f) {
  const Eigen::Index h = f.rows(), w = f.cols();
  const int r = k.radius;
  using RowExpr = Eigen::Array<Scalar, 1, Eigen::Dynamic>;
  Field<Scalar> tmp(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    RowExpr acc = RowExpr::Zero(w);
    for (int o = -r; o <= r; ++o) {
      const Scalar t = k.taps[o + r];
      const Eigen::Index lo = std::max<Eigen::Index>(0, -o);
      const Eigen::Index hi = std::min<Eigen::Index>(w - 1, w - 1 - o);
      if (lo <= hi)
        acc.segment(lo, hi - lo + 1) += t * f.row(y).segment(lo + o, hi - lo + 1);
      const Eigen::Index head_n = std::min(lo, w);       // x + o below 0
      const Eigen::Index tail_n = std::min(w - 1 - hi, w);  // x + o above w-1
      if (head_n > 0) acc.head(head_n) += t * f(y, 0);
      if (tail_n > 0) acc.tail(tail_n) += t * f(y, w - 1);
    }
    tmp.row(y) = acc;
  }
  Field<Scalar> out(h, w);
  for (Eigen::Index y = 0; y < h; ++y) {
    RowExpr acc = RowExpr::Zero(w);
    for (int o = -r; o <= r; ++o) {
      Eigen::Index src = y + o;
      if (src < 0) src = 0;
      if (src > h - 1) src = h - 1;
      acc += k.taps[o + r] * tmp.row(src);
    }
    out.row(y) = acc;
  }
  return out;
}

}  // namespace slickseg
