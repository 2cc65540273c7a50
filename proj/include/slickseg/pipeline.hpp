#pragma once

#include "slickseg/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slickseg {

/// Raised when the evolution produces a non-finite phi value.
class evolution_error : public std::runtime_error {
 public:
  evolution_error(int iteration, const std::string& what)
      : std::runtime_error("iteration " + std::to_string(iteration) + ": " +
                           what),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_ = 0;
};

struct SegmentationState {
  RealField phi;
  RegionFit sigma;
  int iter = 0;
  std::vector<EnergyBreakdown> trace;  // length iter + 1, includes the start
};

struct SegmentationResult {
  RealField oil_mask;  // 1 = oil (the darker region)
  std::vector<std::pair<int, int>> contour;  // (x, y), row-major scan order
  int iterations_used = 0;
  bool converged = false;
  EnergyBreakdown final_energy;
  std::pair<Real, Real> region_means;  // mean intensity: (phi > 0, phi <= 0)
};

/// Contour pixels: phi <= 0 with a strictly positive 4-neighbor, emitted in
/// row-major order.
inline std::vector<std::pair<int, int>> extract_contour(const RealField& phi) {
  std::vector<std::pair<int, int>> contour;
  const Eigen::Index h = phi.rows(), w = phi.cols();
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x) {
      if (phi(y, x) > 0) continue;
      const bool crossing = (x > 0 && phi(y, x - 1) > 0) ||
                            (x + 1 < w && phi(y, x + 1) > 0) ||
                            (y > 0 && phi(y - 1, x) > 0) ||
                            (y + 1 < h && phi(y + 1, x) > 0);
      if (crossing) contour.emplace_back(int(x), int(y));
    }
  return contour;
}

namespace detail {

inline RealField evolution_force(const RealField& phi, const RealField& e1,
                                 const RealField& e2,
                                 const SegmentationConfig& cfg) {
  const RealField data =
      (cfg.gamma2 * e2 - cfg.gamma1 * e1) * dirac(phi, cfg.epsilon);
  return data + cfg.nu * contour_regularization_force(phi, cfg.epsilon,
                                                      kGradFloor) +
         cfg.mu * distance_regularization_force(phi, kGradFloor);
}

struct StepFields {
  RegionFit sigma;
  RealField e1, e2;
};

inline StepFields refresh_fit(const GaussianKernel<Real>& k, const RealField& I,
                              const RealField& phi,
                              const SegmentationConfig& cfg,
                              const Floors& floors) {
  StepFields out;
  const RealField m1 = heaviside(phi, cfg.epsilon);
  const RealField m2 = 1.0 - m1;
  out.sigma.sigma1 = update_sigma(cfg.model, k, I, m1, floors);
  out.sigma.sigma2 = update_sigma(cfg.model, k, I, m2, floors);
  out.e1 = epsilon_field(cfg.model, k, I, out.sigma.sigma1, floors);
  out.e2 = epsilon_field(cfg.model, k, I, out.sigma.sigma2, floors);
  return out;
}

// Same contract as refresh_fit, with the complementary-membership identity
// conv(m2 * g) = conv(g) - conv(m1 * g) cutting two convolutions per
// iteration. conv_i / conv_ipow are conv(Ic) and conv(Ic^upsilon),
// precomputed once per run.
inline StepFields refresh_fit_fast(const GaussianKernel<Real>& k,
                                   const RealField& I, const RealField& conv_i,
                                   const RealField& conv_ipow,
                                   const RealField& phi,
                                   const SegmentationConfig& cfg,
                                   const Floors& floors) {
  StepFields out;
  const DistributionModel& m = cfg.model;
  const RealField m1 = heaviside(phi, cfg.epsilon);
  const RealField conv_m1 = convolve(k, m1);
  const RealField Ic = I.max(floors.intensity);
  switch (m.kind) {
    case ModelKind::exponential:
    case ModelKind::gamma: {
      const Real ks = m.kind == ModelKind::exponential ? m.ks : 1.0;
      const RealField num1 = convolve(k, RealField(m1 * Ic));
      out.sigma.sigma1 =
          (num1 / (ks * conv_m1).max(floors.denominator)).max(floors.sigma);
      out.sigma.sigma2 = ((conv_i - num1) /
                          (ks * (1.0 - conv_m1)).max(floors.denominator))
                             .max(floors.sigma);
      break;
    }
    case ModelKind::weibull: {
      const RealField ipow = Ic.pow(m.upsilon);
      const RealField num1 = convolve(k, RealField(m1 * ipow));
      out.sigma.sigma1 = (num1 / conv_m1.max(floors.denominator))
                             .pow(1.0 / m.upsilon)
                             .max(floors.sigma);
      out.sigma.sigma2 =
          ((conv_ipow - num1) / (1.0 - conv_m1).max(floors.denominator))
              .pow(1.0 / m.upsilon)
              .max(floors.sigma);
      break;
    }
  }
  out.e1 = epsilon_field(m, k, I, out.sigma.sigma1, floors);
  out.e2 = epsilon_field(m, k, I, out.sigma.sigma2, floors);
  return out;
}

}  // namespace detail

/// Initial state: binary-step phi from the configured geometry, the matching
/// sigma fields, and the starting energy as trace entry zero.
inline SegmentationState init_state(const RealField& I,
                                    const SegmentationConfig& cfg) {
  if (I.size() == 0) throw std::invalid_argument("run: image is empty");
  if (!cfg.init)
    throw std::invalid_argument("run: no initialization geometry configured");
  cfg.validate();
  SegmentationState state;
  state.phi = init_phi(*cfg.init, I.cols(), I.rows(), cfg.c0);
  const Floors floors = Floors::for_image(I);
  const GaussianKernel<Real> k = build_kernel(cfg.tau);
  detail::StepFields f = detail::refresh_fit(k, I, state.phi, cfg, floors);
  state.sigma = std::move(f.sigma);
  state.trace.push_back(detail::energy_from_fields(f.e1, f.e2, state.phi, cfg));
  return state;
}

/// One alternation: closed-form sigma refresh at the current memberships,
/// then an explicit gradient-flow step on phi, then the energy record.
inline SegmentationState step(const SegmentationState& state, const RealField& I,
                              const SegmentationConfig& cfg) {
  detail::require_same_dims(I.rows(), I.cols(), state.phi.rows(),
                            state.phi.cols(), "step");
  const Floors floors = Floors::for_image(I);
  const GaussianKernel<Real> k = build_kernel(cfg.tau);

  SegmentationState next;
  detail::StepFields f = detail::refresh_fit(k, I, state.phi, cfg, floors);
  next.phi = state.phi + cfg.dt * detail::evolution_force(state.phi, f.e1, f.e2, cfg);
  if (!next.phi.allFinite())
    throw evolution_error(state.iter + 1,
                          "level-set update produced a non-finite value");
  next.sigma = std::move(f.sigma);
  next.iter = state.iter + 1;
  next.trace = state.trace;
  next.trace.push_back(detail::energy_from_fields(f.e1, f.e2, next.phi, cfg));
  return next;
}

namespace detail {

inline Real mean_where(const RealField& I, const RealField& phi, bool positive) {
  Real sum = 0;
  long long count = 0;
  for (Eigen::Index i = 0; i < I.size(); ++i) {
    const bool in_region = positive ? (phi(i) > 0) : (phi(i) <= 0);
    if (in_region) {
      sum += I(i);
      ++count;
    }
  }
  return count > 0 ? sum / Real(count)
                   : std::numeric_limits<Real>::infinity();
}

}  // namespace detail

/// Runs the alternation until the relative total-energy change stays below
/// tol for five consecutive iterations or the budget runs out. The oil label
/// goes to the sign-region with the smaller mean intensity (region 1 on ties).
inline SegmentationResult run(const RealField& I, const SegmentationConfig& cfg,
                              std::vector<EnergyBreakdown>* trace_out = nullptr,
                              RealField* final_phi = nullptr) {
  SegmentationState state = init_state(I, cfg);
  const Floors floors = Floors::for_image(I);
  const GaussianKernel<Real> kernel = build_kernel(cfg.tau);
  const RealField Ic = I.max(floors.intensity);
  const RealField conv_i = convolve(kernel, Ic);
  const RealField conv_ipow =
      cfg.model.kind == ModelKind::weibull
          ? convolve(kernel, RealField(Ic.pow(cfg.model.upsilon)))
          : RealField();
  bool converged = false;
  int streak = 0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    detail::StepFields f = detail::refresh_fit_fast(kernel, I, conv_i,
                                                    conv_ipow, state.phi, cfg,
                                                    floors);
    RealField phi_next =
        state.phi + cfg.dt * detail::evolution_force(state.phi, f.e1, f.e2, cfg);
    if (!phi_next.allFinite())
      throw evolution_error(k, "level-set update produced a non-finite value");
    state.phi = std::move(phi_next);
    state.sigma = std::move(f.sigma);
    state.iter = k;
    state.trace.push_back(detail::energy_from_fields(f.e1, f.e2, state.phi, cfg));
    const Real prev = state.trace[state.trace.size() - 2].total;
    const Real cur = state.trace.back().total;
    const Real rel = std::abs(cur - prev) / std::max(std::abs(prev), Real(1));
    streak = rel < cfg.tol ? streak + 1 : 0;
    if (streak >= 5) {
      converged = true;
      break;
    }
  }

  SegmentationResult result;
  result.iterations_used = state.iter;
  result.converged = converged;
  result.final_energy = state.trace.back();
  result.region_means = {detail::mean_where(I, state.phi, true),
                         detail::mean_where(I, state.phi, false)};
  // Index-free labeling: oil is the darker region; ties go to region 1.
  const bool oil_is_region1 = result.region_means.first <= result.region_means.second;
  result.oil_mask.resize(I.rows(), I.cols());
  for (Eigen::Index i = 0; i < I.size(); ++i) {
    const bool in_region1 = state.phi(i) > 0;
    result.oil_mask(i) = (in_region1 == oil_is_region1) ? 1.0 : 0.0;
  }
  result.contour = extract_contour(state.phi);
  if (result.contour.empty())
    log_info("run: final level set has a single region (empty contour)");
  if (trace_out) *trace_out = state.trace;
  if (final_phi) *final_phi = state.phi;
  return result;
}

}  // namespace slickseg
