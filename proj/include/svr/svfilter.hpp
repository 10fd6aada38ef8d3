// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "svr/convolve.hpp"
#include "svr/filterbank.hpp"
#include "svr/raster.hpp"

namespace svr {

/// Per-run diagnostics of the multi-pass filter.
struct FilterReport {
    int iterations_used = 0;
    std::vector<int64_t> pixels_active_per_iteration;
    double residual_q_max = 1.0;      // largest q still unmet on exit
    bool max_iter_reached = false;    // true when pixels were left above q_min
};

inline constexpr double kDefaultQMin = 1.01;
inline constexpr int kDefaultMaxIterations = 64;

/// One filtered sample: sum of kernel taps over the replicated (clamp-to-edge)
/// neighborhood of (x, y).
double convolve_at(const Raster& f, int x, int y, const Kernel2D& k);

/// Single-pass filter: each pixel is convolved with the bank kernel whose
/// VRP is nearest to min(q_i, p_max). Demands beyond p_max saturate at the
/// kernel-size limit. The bank must be a pass-0 (fixed) bank.
Raster apply_fixed(const Raster& f, const VRRMap& q, const FilterBank& bank);

/// Multi-pass filter: repeats space-variant passes until every pixel's
/// residual ratio is at or below q_min (or max_iter passes ran, which the
/// report flags). Within one pass every output pixel is a function of the
/// previous pass's buffer alone; pixels already at target copy through.
/// Residuals are divided by the VRP ratio the selected bin actually achieves
/// at the current pass, so bin quantization does not accumulate.
struct RecursiveResult {
    Raster output;
    FilterReport report;
};
RecursiveResult apply_recursive(const Raster& f, const VRRMap& q, const RecursiveBankSet& banks,
                                double q_min = kDefaultQMin,
                                int max_iter = kDefaultMaxIterations);

/// Per-pixel decisions of one multi-pass iteration: which bin serves each
/// pixel (-1 copies through) and the reduction ratio each bin contributes at
/// this pass. apply_recursive is defined by folding these plans; they are
/// exposed so tests can replay a pass in any pixel order.
struct RecursivePassPlan {
    double r_max = 1.0;              // largest ratio this pass can deliver
    std::vector<int32_t> bins;       // per pixel
    std::vector<double> achieved_r;  // per bin, >= 1
};

RecursivePassPlan plan_recursive_pass(const RecursiveBankSet& banks,
                                      const std::vector<double>& residuals, int pass,
                                      double q_min);

/// Divides each planned pixel's residual by its bin's achieved ratio.
void advance_residuals(const RecursivePassPlan& plan, std::vector<double>& residuals);

/// Coarse pass-count model: floor(q / K^2).
int estimate_iterations(double q, int half_width);

} // namespace svr
