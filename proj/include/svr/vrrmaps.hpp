// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "svr/raster.hpp"

namespace svr {

enum class EdgeVrrMode { gradient, perona_malik };

/// Parameters for gradient-driven (edge-preserving) ratio maps.
struct EdgeVrrConfig {
    double v0 = 1.0;                          // input image variance
    EdgeVrrMode mode = EdgeVrrMode::gradient;
    double q_cap = 1000.0;                    // upper bound on requested reduction
    double strength = 1000.0;                 // overall multiplier, perona_malik only
    double epsilon = 1e-6;                    // gradient floor, gradient mode only
    bool presmooth = false;                   // 3x3 box smooth before the gradient
};

/// q_i = max(1, v_i / target_variance).
VRRMap vrr_from_variance(const Raster& variances, double target_variance);

/// Pre-log counts: after-log variance is 1/count, so
/// q_i = max(1, 1 / (count_i * target_after_log_variance)).
/// Counts <= 0 raise validation_error unless count_floor > 0 substitutes them.
VRRMap vrr_from_counts(const Raster& counts, double target_after_log_variance,
                       double count_floor = 0.0);

/// Central-difference gradient magnitude, one-sided at the borders.
Raster gradient_magnitude(const Raster& f);

/// q = clamp(v0 / max(|grad|, epsilon), 1, q_cap).
VRRMap vrr_edge(const Raster& f, const EdgeVrrConfig& cfg);

/// q = clamp(strength * v0 / (v0 + |grad|^2), 1, q_cap). The printed
/// conductance alone never exceeds 1, hence the explicit strength factor.
VRRMap vrr_perona_malik(const Raster& f, const EdgeVrrConfig& cfg);

/// alpha * original + (1 - alpha) * filtered, per pixel.
Raster blend(const Raster& original, const Raster& filtered, double alpha);

} // namespace svr
