#pragma once

#include "slickseg/config.hpp"
#include "slickseg/levelset.hpp"
#include "slickseg/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace slickseg {

/// Objective decomposition: total = fitting + nu * contour + mu * distance.
struct EnergyBreakdown {
  Real fitting = 0;
  Real contour = 0;   // smoothed contour length, >= 0
  Real distance = 0;  // deviation of |grad phi| from 1, >= 0
  Real total = 0;
};

namespace detail {

/// Fitting term from precomputed misfit fields:
/// gamma1 * sum(e1 * H(phi)) + gamma2 * sum(e2 * (1 - H(phi))).
inline Real fitting_energy(const RealField& e1, const RealField& e2,
                           const RealField& heavi, Real gamma1, Real gamma2) {
  return gamma1 * (e1 * heavi).sum() + gamma2 * (e2 * (1.0 - heavi)).sum();
}

inline EnergyBreakdown energy_from_fields(const RealField& e1,
                                          const RealField& e2,
                                          const RealField& phi,
                                          const SegmentationConfig& cfg) {
  EnergyBreakdown eb;
  const RealField heavi = heaviside(phi, cfg.epsilon);
  eb.fitting = fitting_energy(e1, e2, heavi, cfg.gamma1, cfg.gamma2);
  const Grad<Real> g = gradient(phi);
  const RealField mag = (g.x.square() + g.y.square()).sqrt();
  eb.contour = (dirac(phi, cfg.epsilon) * mag).sum();
  eb.distance = (0.5 * (mag - 1.0).square()).sum();
  eb.total = eb.fitting + cfg.nu * eb.contour + cfg.mu * eb.distance;
  return eb;
}

}  // namespace detail

inline EnergyBreakdown evaluate_energy(const DistributionModel& m,
                                       const GaussianKernel<Real>& k,
                                       const RealField& I, const RealField& phi,
                                       const RegionFit& fit,
                                       const SegmentationConfig& cfg) {
  detail::require_same_dims(I.rows(), I.cols(), phi.rows(), phi.cols(),
                            "evaluate_energy");
  detail::require_same_dims(I.rows(), I.cols(), fit.sigma1.rows(),
                            fit.sigma1.cols(), "evaluate_energy");
  detail::require_same_dims(I.rows(), I.cols(), fit.sigma2.rows(),
                            fit.sigma2.cols(), "evaluate_energy");
  const Floors floors = Floors::for_image(I);
  const RealField e1 = epsilon_field(m, k, I, fit.sigma1, floors);
  const RealField e2 = epsilon_field(m, k, I, fit.sigma2, floors);
  return detail::energy_from_fields(e1, e2, phi, cfg);
}

/// Compares central finite differences of the fitting term in phi(x), at
/// frozen sigma, against the analytic descent direction
/// (gamma1 e1 - gamma2 e2) * dirac(phi) on a random pixel subset. Returns the
/// largest relative deviation observed (a measurement, not an assertion).
inline Real fitting_gradient_check(const DistributionModel& m,
                                   const GaussianKernel<Real>& k,
                                   const RealField& I, const RealField& phi,
                                   const RegionFit& fit,
                                   const SegmentationConfig& cfg, Real h,
                                   int sample_count = 20,
                                   std::uint64_t seed = 42) {
  const Floors floors = Floors::for_image(I);
  const RealField e1 = epsilon_field(m, k, I, fit.sigma1, floors);
  const RealField e2 = epsilon_field(m, k, I, fit.sigma2, floors);

  const Eigen::Index n = phi.size();
  std::vector<Eigen::Index> indices(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) indices[static_cast<std::size_t>(i)] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(indices.begin(), indices.end(), rng);
  const std::size_t count =
      std::min<std::size_t>(indices.size(), std::max(sample_count, 1));

  auto fit_at = [&](const RealField& p) {
    return detail::fitting_energy(e1, e2, heaviside(p, cfg.epsilon), cfg.gamma1,
                                  cfg.gamma2);
  };

  Real worst = 0;
  RealField work = phi;
  for (std::size_t s = 0; s < count; ++s) {
    const Eigen::Index idx = indices[s];
    const Eigen::Index y = idx / phi.cols(), x = idx % phi.cols();
    const Real base = phi(y, x);
    work(y, x) = base + h;
    const Real up = fit_at(work);
    work(y, x) = base - h;
    const Real down = fit_at(work);
    work(y, x) = base;
    const Real fd = (up - down) / (2.0 * h);
    const Real analytic =
        (cfg.gamma1 * e1(y, x) - cfg.gamma2 * e2(y, x)) * dirac(base, cfg.epsilon);
    // Finite differencing a full N-term sum carries ~N eps |E| / h of
    // rounding noise; deviations below that resolution count as zero.
    const Real noise = Real(n) * std::numeric_limits<Real>::epsilon() *
                       (std::abs(up) + std::abs(down)) / (2.0 * h);
    const Real diff = std::abs(fd - analytic);
    if (diff <= noise) continue;
    worst = std::max(worst, diff / std::max(std::abs(analytic), noise));
  }
  return worst;
}

}  // namespace slickseg
