#pragma once

/**
 * @file detector.hpp
 * @brief Live vs. replayed-optics classification from cross-array consistency.
 *
 * Two rules, both following from Q = V |sin(alpha)| / D for a stationary
 * object at finite distance:
 *
 *  - flow without motion: optical rotation Q while the body is still
 *    (V < eps_v) cannot come from this body's motion. Residual = Q there,
 *    0 elsewhere.
 *  - scale inconsistency: the object position recovered from the body's
 *    displacement and the general estimate, x_k = s_k - D_k i_k, must stay put.
 *    Residual = RMS spread of x over a centred window divided by the window
 *    mean of D.
 */

#include <algorithm>
#include <cmath>
#include <string>

#include "garray/invariants.hpp"

namespace garray {

struct DetectorConfig {
  double flow_threshold{1e-3};   ///< [rad/s] flow-without-motion residual
  double scale_threshold{0.05};  ///< normalized spread of the recovered object
  double window{0.5};            ///< [s] scale-consistency window
  double verdict_fraction{0.10};  ///< share of samples that must exceed a threshold
  /// Share of informative samples (V >= eps_v or Q >= eps_q) required for any verdict.
  double min_informative_fraction{0.10};

  void validate() const {
    auto bad = [](double x) { return !std::isfinite(x) || !(x > 0.0); };
    if (bad(flow_threshold) || bad(scale_threshold) || bad(window)) {
      throw ConfigError("DetectorConfig: thresholds and window must be finite and > 0");
    }
    if (!(verdict_fraction > 0.0 && verdict_fraction <= 1.0) ||
        !(min_informative_fraction >= 0.0 && min_informative_fraction <= 1.0)) {
      throw ConfigError("DetectorConfig: fractions must lie in (0, 1]");
    }
  }
};

enum class Verdict { live, simulated, indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::live: return "live";
    case Verdict::simulated: return "simulated";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct DetectionReport {
  Series flow_residual;   ///< [rad/s], >= 0
  Series scale_residual;  ///< dimensionless, >= 0; NaN where not evaluable
  /// Per-sample max of the two residuals, each divided by its threshold.
  Series residual;
  double flow_exceed_fraction{0.0};
  double scale_exceed_fraction{0.0};
  double informative_fraction{0.0};
  Verdict verdict{Verdict::indeterminate};
  std::string rule_fired{"none"};
  DetectorConfig config;
};

inline DetectionReport detect(const OpticalStream& optics, const InertialStream& inertial,
                              const DetectorConfig& config = {}) {
  config.validate();
  detail::check_aligned(optics, inertial, "detect");
  const std::size_t n = optics.q_norm.size();
  const auto& eps = optics.config;

  DetectionReport rep;
  rep.config = config;
  rep.flow_residual.assign(n, 0.0);
  rep.scale_residual.assign(n, detail::nan());
  rep.residual.assign(n, 0.0);

  std::size_t informative = 0, flow_exceed = 0, scale_exceed = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const bool moving = inertial.speed_v[k] >= eps.eps_v;
    const bool flowing = optics.q_norm[k] >= eps.eps_q;
    if (moving || flowing) ++informative;
    if (!moving && flowing) rep.flow_residual[k] = optics.q_norm[k];
  }

  // Recovered object position relative to the body's first sample.
  const EstimateSeries d = estimate_eq3(optics, inertial);
  Series3 recovered(n);
  Flags usable(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (!d.valid[k] || !(inertial.speed_v[k] >= eps.eps_v)) continue;
    recovered[k] = inertial.displacement[k] - d.value[k] * optics.bearing[k];
    usable[k] = true;
  }
  const auto half = static_cast<std::size_t>(std::llround(0.5 * config.window * optics.grid.sample_rate));
  for (std::size_t k = 0; k < n; ++k) {
    if (!usable[k]) continue;
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n - 1, k + half);
    std::size_t count = 0;
    Vec3 mean = Vec3::Zero();
    double mean_d = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (!usable[j]) continue;
      ++count;
      mean += recovered[j];
      mean_d += d.value[j];
    }
    if (count < 2) continue;
    mean /= static_cast<double>(count);
    mean_d /= static_cast<double>(count);
    double spread = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (usable[j]) spread += (recovered[j] - mean).squaredNorm();
    }
    spread = std::sqrt(spread / static_cast<double>(count));
    rep.scale_residual[k] = mean_d > 0.0 ? spread / mean_d : detail::nan();
  }

  for (std::size_t k = 0; k < n; ++k) {
    const double f = rep.flow_residual[k];
    const double s = rep.scale_residual[k];
    if (f > config.flow_threshold) ++flow_exceed;
    if (std::isfinite(s) && s > config.scale_threshold) ++scale_exceed;
    rep.residual[k] = std::max(f / config.flow_threshold, std::isfinite(s) ? s / config.scale_threshold : 0.0);
  }

  const auto total = static_cast<double>(n);
  rep.informative_fraction = static_cast<double>(informative) / total;
  rep.flow_exceed_fraction = static_cast<double>(flow_exceed) / total;
  rep.scale_exceed_fraction = static_cast<double>(scale_exceed) / total;

  if (informative == 0 || rep.informative_fraction < config.min_informative_fraction) {
    rep.verdict = Verdict::indeterminate;
    rep.rule_fired = "none";
  } else if (rep.flow_exceed_fraction >= config.verdict_fraction) {
    rep.verdict = Verdict::simulated;
    rep.rule_fired = "flow-without-motion";
  } else if (rep.scale_exceed_fraction >= config.verdict_fraction) {
    rep.verdict = Verdict::simulated;
    rep.rule_fired = "scale-inconsistency";
  } else {
    rep.verdict = Verdict::live;
    rep.rule_fired = "none";
  }
  return rep;
}

}  // namespace garray
