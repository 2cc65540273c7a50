#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <utility>

namespace slickseg {

using Real = double;

/// 2-D raster of scalar values, row-major, unit pixel spacing.
/// Indexing is (row, col) = (y, x); width() == cols(), height() == rows().
template <class Scalar>
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using RealField = Field<Real>;

/// Gradient magnitude floor used when normalizing ∇f in curvature terms.
inline constexpr Real kGradFloor = 1e-8;

template <class Scalar>
struct Grad {
  Field<Scalar> x;  // ∂f/∂x (along columns)
  Field<Scalar> y;  // ∂f/∂y (along rows)
};

namespace detail {

// d/dx along columns: central differences in the interior, one-sided at the
// first/last column. Single-column fields get a zero derivative.
template <class Scalar>
Field<Scalar> diff_x(const Field<Scalar>& f) {
  const Eigen::Index h = f.rows(), w = f.cols();
  Field<Scalar> d(h, w);
  if (w < 2) {
    d.setZero();
    return d;
  }
  d.col(0) = f.col(1) - f.col(0);
  d.col(w - 1) = f.col(w - 1) - f.col(w - 2);
  if (w > 2)
    d.middleCols(1, w - 2) =
        (f.middleCols(2, w - 2) - f.middleCols(0, w - 2)) * Scalar(0.5);
  return d;
}

template <class Scalar>
Field<Scalar> diff_y(const Field<Scalar>& f) {
  const Eigen::Index h = f.rows(), w = f.cols();
  Field<Scalar> d(h, w);
  if (h < 2) {
    d.setZero();
    return d;
  }
  d.row(0) = f.row(1) - f.row(0);
  d.row(h - 1) = f.row(h - 1) - f.row(h - 2);
  if (h > 2)
    d.middleRows(1, h - 2) =
        (f.middleRows(2, h - 2) - f.middleRows(0, h - 2)) * Scalar(0.5);
  return d;
}

inline void require_same_dims(Eigen::Index r1, Eigen::Index c1, Eigen::Index r2,
                              Eigen::Index c2, const char* what) {
  if (r1 != r2 || c1 != c2)
    throw std::invalid_argument(std::string(what) + ": field dimensions differ");
}

}  // namespace detail

template <class Scalar>
Grad<Scalar> gradient(const Field<Scalar>& f) {
  return {detail::diff_x(f), detail::diff_y(f)};
}

template <class Scalar>
Field<Scalar> divergence(const Field<Scalar>& vx, const Field<Scalar>& vy) {
  detail::require_same_dims(vx.rows(), vx.cols(), vy.rows(), vy.cols(),
                            "divergence");
  return detail::diff_x(vx) + detail::diff_y(vy);
}

/// Laplacian as the exact composition div(grad f), so that the discrete
/// identity laplacian(f) == divergence(gradient(f)) holds to rounding.
template <class Scalar>
Field<Scalar> laplacian(const Field<Scalar>& f) {
  Grad<Scalar> g = gradient(f);
  return divergence(g.x, g.y);
}

/// Compact nearest-neighbor Laplacian (replicate boundary). The composed
/// central-difference form above is blind to grid-frequency modes; the
/// evolution uses this stencil so those modes stay damped.
template <class Scalar>
Field<Scalar> laplacian_compact(const Field<Scalar>& f) {
  const Eigen::Index h = f.rows(), w = f.cols();
  Field<Scalar> out = Field<Scalar>::Zero(h, w);
  if (w >= 2) {
    out.leftCols(w - 1) += f.rightCols(w - 1);
    out.col(w - 1) += f.col(w - 1);  // replicate edge
    out.rightCols(w - 1) += f.leftCols(w - 1);
    out.col(0) += f.col(0);
  } else {
    out += 2 * f;
  }
  if (h >= 2) {
    out.topRows(h - 1) += f.bottomRows(h - 1);
    out.row(h - 1) += f.row(h - 1);
    out.bottomRows(h - 1) += f.topRows(h - 1);
    out.row(0) += f.row(0);
  } else {
    out += 2 * f;
  }
  out -= 4 * f;
  return out;
}

/// div(∇f/|∇f|) with |∇f| floored at grad_floor, so flat regions map to 0
/// instead of dividing by zero.
template <class Scalar>
Field<Scalar> curvature(const Field<Scalar>& f, Scalar grad_floor) {
  if (!(grad_floor > Scalar(0)))
    throw std::invalid_argument("curvature: grad_floor must be positive");
  Grad<Scalar> g = gradient(f);
  Field<Scalar> mag = (g.x.square() + g.y.square()).sqrt().max(grad_floor);
  Field<Scalar> nx = g.x / mag;
  Field<Scalar> ny = g.y / mag;
  return divergence(nx, ny);
}

}  // namespace slickseg
