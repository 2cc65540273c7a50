#pragma once

#include "slickseg/field.hpp"
#include "slickseg/geometry.hpp"
#include "slickseg/log.hpp"

#include <cmath>
#include <stdexcept>

namespace slickseg {

// Level-set convention: phi < 0 inside the current contour, phi > 0 outside.
// Soft memberships are M1 = heaviside(phi), M2 = 1 - M1.

/// Smoothed step 1/2 [1 + (2/pi) arctan(v/eps)], strictly inside (0, 1).
template <class Scalar>
Scalar heaviside(Scalar v, Scalar eps) {
  return Scalar(0.5) *
         (Scalar(1) + (Scalar(2) / Scalar(EIGEN_PI)) * std::atan(v / eps));
}

/// Derivative of the smoothed step: (1/pi) eps / (eps^2 + v^2).
template <class Scalar>
Scalar dirac(Scalar v, Scalar eps) {
  return (Scalar(1) / Scalar(EIGEN_PI)) * eps / (eps * eps + v * v);
}

template <class Scalar>
Field<Scalar> heaviside(const Field<Scalar>& phi, Scalar eps) {
  return Scalar(0.5) *
         (Scalar(1) + (Scalar(2) / Scalar(EIGEN_PI)) * (phi / eps).atan());
}

template <class Scalar>
Field<Scalar> dirac(const Field<Scalar>& phi, Scalar eps) {
  return (Scalar(1) / Scalar(EIGEN_PI)) * eps / (eps * eps + phi.square());
}

/// Binary-step initialization: -c0 strictly inside the shape, +c0 outside.
/// The distance regularizer repairs the profile during evolution, so no
/// signed-distance construction is needed.
inline RealField init_phi(const Shape& shape, Eigen::Index width,
                          Eigen::Index height, Real c0) {
  if (!(c0 > 0)) throw std::invalid_argument("init_phi: c0 must be positive");
  const RealField inside = rasterize(shape, width, height);
  const Real area = inside.sum();
  if (area == 0)
    throw std::invalid_argument(
        "init_phi: initialization geometry covers no pixel of the domain");
  if (area == Real(width * height))
    log_info("init_phi: geometry covers the whole domain (no exterior pixels)");
  return RealField(c0 - 2.0 * c0 * inside);
}

/// dirac(phi) * div(grad phi / |grad phi|): the descent force of the smoothed
/// contour-length penalty.
template <class Scalar>
Field<Scalar> contour_regularization_force(const Field<Scalar>& phi, Scalar eps,
                                           Scalar grad_floor) {
  return dirac(phi, eps) * curvature(phi, grad_floor);
}

/// laplacian(phi) - div(grad phi / |grad phi|): the descent force of the
/// penalty on deviation of |grad phi| from 1. The diffusion part uses the
/// compact stencil; the composed central-difference Laplacian leaves
/// grid-frequency modes undamped and the evolution then accumulates them.
template <class Scalar>
Field<Scalar> distance_regularization_force(const Field<Scalar>& phi,
                                            Scalar grad_floor) {
  return laplacian_compact(phi) - curvature(phi, grad_floor);
}

}  // namespace slickseg
