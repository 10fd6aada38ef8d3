// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "svr/svfilter.hpp"
#include "svr/vrrmaps.hpp"

namespace svr {

/// Edge-preserving denoising: gradient-driven ratio map, multi-pass filter,
/// optional blend-back of the original.
struct DenoisePipelineConfig {
    double v0 = 1.0;
    EdgeVrrMode mode = EdgeVrrMode::gradient;
    double blend_alpha = 0.0;  // 0 = fully filtered output
    double q_cap = 1000.0;
    double strength = 1000.0;  // perona_malik multiplier
    bool presmooth = true;     // denoising inputs are noisy; smooth the gradient source
    int half_width = 1;
    double q_min = kDefaultQMin;
    int max_iter = kDefaultMaxIterations;
};

struct DenoiseOutcome {
    Raster output;
    FilterReport report;
};

DenoiseOutcome denoise_image(const Raster& input, const DenoisePipelineConfig& cfg);

} // namespace svr
