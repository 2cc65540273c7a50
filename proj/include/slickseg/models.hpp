#pragma once

#include "slickseg/field.hpp"
#include "slickseg/kernel.hpp"
#include "slickseg/log.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace slickseg {

// Intensity models for speckled radar-like imagery. Each model exposes a
// pointwise fitting integrand (negative log-likelihood up to terms constant
// in sigma), the closed-form kernel-weighted sigma update that makes the
// integrand stationary, and the aggregated misfit field driving the contour
// evolution.
//
//   exponential: p(I) = 1/(ks s) exp(-I/(ks s)),        mean ks*s
//   weibull:     p(I) = (u/s^u) I^(u-1) exp(-(I/s)^u),  mean s*Gamma(1+1/u)
//   gamma:       p(I) = (k/s)^k I^(k-1) exp(-kI/s) / Gamma(k),  mean s

enum class ModelKind { exponential, weibull, gamma };

struct DistributionModel {
  ModelKind kind = ModelKind::exponential;
  Real ks = 1.0;       // detection system constant (exponential)
  Real upsilon = 1.0;  // Weibull shape
  Real kappa = 1.0;    // Gamma order

  static DistributionModel exponential(Real ks = 1.0) {
    DistributionModel m;
    m.kind = ModelKind::exponential;
    m.ks = ks;
    return m;
  }
  static DistributionModel weibull(Real upsilon) {
    DistributionModel m;
    m.kind = ModelKind::weibull;
    m.upsilon = upsilon;
    return m;
  }
  static DistributionModel gamma(Real kappa) {
    DistributionModel m;
    m.kind = ModelKind::gamma;
    m.kappa = kappa;
    return m;
  }

  Real shape_parameter() const {
    switch (kind) {
      case ModelKind::exponential: return ks;
      case ModelKind::weibull: return upsilon;
      case ModelKind::gamma: return kappa;
    }
    return 0;
  }

  void validate() const {
    if (!(shape_parameter() > 0))
      throw std::invalid_argument(
          "DistributionModel: shape parameter must be positive");
  }
};

inline const char* model_name(ModelKind k) {
  switch (k) {
    case ModelKind::exponential: return "exp";
    case ModelKind::weibull: return "weibull";
    case ModelKind::gamma: return "gamma";
  }
  return "?";
}

/// Clamping floors that keep the alternation total when a region empties out
/// or an intensity hits zero. Scaled to the image per the sigma/intensity
/// entries; the convolution denominator floor is absolute.
struct Floors {
  Real sigma = 1e-8;
  Real intensity = 1e-8;
  Real denominator = 1e-12;

  static Floors for_image(const RealField& intensity_field) {
    const Real m = intensity_field.maxCoeff();
    Floors f;
    const Real scale = m > 0 ? m : 1.0;
    f.sigma = 1e-8 * scale;
    f.intensity = 1e-8 * scale;
    return f;
  }
};

/// Per-pixel regional scale fields (sigma_1 over the positive-phi region,
/// sigma_2 over the complement).
struct RegionFit {
  RealField sigma1;
  RealField sigma2;
};

/// Pointwise fitting integrand at intensity I and regional scale sigma.
/// Inputs below the floors are clamped, not rejected.
inline Real fit_integrand(const DistributionModel& m, Real I, Real sigma,
                          const Floors& floors) {
  if (I < floors.intensity) {
    warn_once("fit_integrand.intensity",
              "intensity below floor; clamping for model evaluation");
    I = floors.intensity;
  }
  if (sigma < floors.sigma) {
    warn_once("fit_integrand.sigma",
              "sigma below floor; clamping for model evaluation");
    sigma = floors.sigma;
  }
  switch (m.kind) {
    case ModelKind::exponential:
      return I / (m.ks * sigma) + std::log(sigma);
    case ModelKind::weibull:
      return m.upsilon * std::log(sigma) + std::pow(I / sigma, m.upsilon) -
             (m.upsilon - 1.0) * std::log(I);
    case ModelKind::gamma:
      return m.kappa * std::log(sigma) + m.kappa * I / sigma -
             (m.kappa - 1.0) * std::log(I) + std::lgamma(m.kappa);
  }
  throw std::logic_error("fit_integrand: unknown model kind");
}

namespace detail {

inline void check_membership(const RealField& membership) {
  if (membership.size() == 0)
    throw std::invalid_argument("membership field is empty");
  const Real lo = membership.minCoeff(), hi = membership.maxCoeff();
  if (lo < -1e-12 || hi > 1.0 + 1e-12)
    throw std::invalid_argument("membership values must lie in [0, 1]");
}

}  // namespace detail

/// Closed-form stationary point of the kernel-localized fitting energy in
/// sigma, at fixed membership. Denominators and the result are floored.
inline RealField update_sigma(const DistributionModel& m,
                              const GaussianKernel<Real>& k, const RealField& I,
                              const RealField& membership,
                              const Floors& floors) {
  detail::require_same_dims(I.rows(), I.cols(), membership.rows(),
                            membership.cols(), "update_sigma");
  detail::check_membership(membership);
  m.validate();
  const RealField Ic = I.max(floors.intensity);
  RealField sigma;
  switch (m.kind) {
    case ModelKind::exponential: {
      const RealField num = convolve(k, RealField(membership * Ic));
      const RealField den =
          (m.ks * convolve(k, membership)).max(floors.denominator);
      sigma = num / den;
      break;
    }
    case ModelKind::weibull: {
      const RealField ipow = Ic.pow(m.upsilon);
      const RealField num = convolve(k, RealField(membership * ipow));
      const RealField den = convolve(k, membership).max(floors.denominator);
      sigma = (num / den).pow(1.0 / m.upsilon);
      break;
    }
    case ModelKind::gamma: {
      const RealField num = convolve(k, RealField(membership * Ic));
      const RealField den = convolve(k, membership).max(floors.denominator);
      sigma = num / den;
      break;
    }
  }
  return sigma.max(floors.sigma);
}

/// Kernel-weighted aggregation of the fitting integrand: the misfit of pixel
/// intensity I(x) against the regional scale sampled over the window around x.
/// Terms separable in sigma are pushed through the convolution.
inline RealField epsilon_field(const DistributionModel& m,
                               const GaussianKernel<Real>& k, const RealField& I,
                               const RealField& sigma, const Floors& floors) {
  detail::require_same_dims(I.rows(), I.cols(), sigma.rows(), sigma.cols(),
                            "epsilon_field");
  m.validate();
  if ((I < floors.intensity).any())
    warn_once("epsilon_field.intensity",
              "intensity below floor; clamping for model evaluation");
  if ((sigma < floors.sigma).any())
    warn_once("epsilon_field.sigma",
              "sigma below floor; clamping for model evaluation");
  const RealField Ic = I.max(floors.intensity);
  const RealField sc = sigma.max(floors.sigma);
  switch (m.kind) {
    case ModelKind::exponential:
      return (Ic / m.ks) * convolve(k, RealField(sc.inverse())) +
             convolve(k, RealField(sc.log()));
    case ModelKind::weibull:
      return m.upsilon * convolve(k, RealField(sc.log())) +
             Ic.pow(m.upsilon) * convolve(k, RealField(sc.pow(-m.upsilon))) -
             (m.upsilon - 1.0) * Ic.log();
    case ModelKind::gamma:
      return m.kappa * convolve(k, RealField(sc.log())) +
             m.kappa * Ic * convolve(k, RealField(sc.inverse())) -
             (m.kappa - 1.0) * Ic.log() + std::lgamma(m.kappa);
  }
  throw std::logic_error("epsilon_field: unknown model kind");
}

// ---------------------------------------------------------------------------
// Sampling. Explicit inverse-CDF / rejection samplers over mt19937_64 so the
// byte streams are pinned independent of the standard library build.

namespace detail {

inline Real uniform01(std::mt19937_64& rng) {
  return Real(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline Real standard_normal(std::mt19937_64& rng) {
  // Box-Muller; u1 in (0, 1].
  const Real u1 = 1.0 - uniform01(rng);
  const Real u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * EIGEN_PI * u2);
}

// Marsaglia-Tsang for shape >= 1; boosted from shape+1 below 1.
inline Real standard_gamma(Real shape, std::mt19937_64& rng) {
  if (shape < 1.0) {
    const Real g = standard_gamma(shape + 1.0, rng);
    const Real u = 1.0 - uniform01(rng);  // (0, 1]
    return g * std::pow(u, 1.0 / shape);
  }
  const Real d = shape - 1.0 / 3.0;
  const Real c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    Real x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const Real u = uniform01(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

}  // namespace detail

/// One intensity draw with regional scale sigma, advancing the given engine.
inline Real draw_intensity(const DistributionModel& m, Real sigma,
                           std::mt19937_64& rng) {
  switch (m.kind) {
    case ModelKind::exponential:
      return -m.ks * sigma * std::log(1.0 - detail::uniform01(rng));
    case ModelKind::weibull:
      return sigma *
             std::pow(-std::log(1.0 - detail::uniform01(rng)), 1.0 / m.upsilon);
    case ModelKind::gamma:
      return (sigma / m.kappa) * detail::standard_gamma(m.kappa, rng);
  }
  throw std::logic_error("draw_intensity: unknown model kind");
}

inline std::vector<Real> sample_intensity(const DistributionModel& m, Real sigma,
                                          std::uint64_t seed, std::size_t n) {
  if (!(sigma > 0))
    throw std::invalid_argument("sample_intensity: sigma must be positive");
  m.validate();
  std::vector<Real> out;
  out.reserve(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) out.push_back(draw_intensity(m, sigma, rng));
  return out;
}

}  // namespace slickseg
