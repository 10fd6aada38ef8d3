// SPDX-License-Identifier: Apache-2.0
#include "svr/svfilter.hpp"

#include <algorithm>
#include <cmath>

namespace svr {

namespace {

double convolve_clamped(const double* src, int width, int height, int x, int y, const double* kc,
                        int half_width) {
    double acc = 0.0;
    int t = 0;
    for (int j2 = -half_width; j2 <= half_width; ++j2) {
        const int yy = std::clamp(y - j2, 0, height - 1);
        const double* row = src + static_cast<ptrdiff_t>(yy) * width;
        for (int j1 = -half_width; j1 <= half_width; ++j1, ++t) {
            const int xx = std::clamp(x - j1, 0, width - 1);
            acc += kc[t] * row[xx];
        }
    }
    return acc;
}

/// One full space-variant pass over the image. Interior rows take the
/// dispatched inner kernel; the L-wide frame replicates edge samples.
void apply_bank_pass(const double* src, double* dst, int width, int height,
                     const FilterBank& bank, const int32_t* bins, conv::RowFn row_fn) {
    const int half_width = bank.half_width;
    const int taps = bank.taps();
    const double* coeffs = bank.coeffs.data();
    const int xi0 = std::min(half_width, width);
    const int xi1 = std::max(width - half_width, xi0);
    for (int y = 0; y < height; ++y) {
        const int32_t* brow = bins + static_cast<ptrdiff_t>(y) * width;
        double* drow = dst + static_cast<ptrdiff_t>(y) * width;
        const bool interior_y = y >= half_width && y < height - half_width;
        int x = 0;
        if (interior_y && xi1 > xi0) {
            for (; x < xi0; ++x)
                drow[x] = brow[x] < 0 ? src[static_cast<ptrdiff_t>(y) * width + x]
                                      : convolve_clamped(src, width, height, x, y,
                                                         coeffs + static_cast<ptrdiff_t>(brow[x]) * taps,
                                                         half_width);
            row_fn(src, width, y, xi0, xi1, coeffs, taps, half_width, brow, drow);
            x = xi1;
        }
        for (; x < width; ++x)
            drow[x] = brow[x] < 0 ? src[static_cast<ptrdiff_t>(y) * width + x]
                                  : convolve_clamped(src, width, height, x, y,
                                                     coeffs + static_cast<ptrdiff_t>(brow[x]) * taps,
                                                     half_width);
    }
}

void require_map_shape(const Raster& f, const VRRMap& q, const char* what) {
    if (f.width != q.width || f.height != q.height)
        throw validation_error(std::string(what) + ": shape mismatch, image " +
                               std::to_string(f.width) + "x" + std::to_string(f.height) +
                               " vs ratio map " + std::to_string(q.width) + "x" +
                               std::to_string(q.height));
}

} // namespace

double convolve_at(const Raster& f, int x, int y, const Kernel2D& k) {
    return convolve_clamped(f.values.data(), f.width, f.height, x, y, k.coeffs.data(),
                            k.half_width);
}

Raster apply_fixed(const Raster& f, const VRRMap& q, const FilterBank& bank) {
    require_map_shape(f, q, "apply_fixed");
    if (bank.iteration != 0)
        throw validation_error("apply_fixed needs a single-pass bank, got one built for pass " +
                               std::to_string(bank.iteration));
    std::vector<int32_t> bins(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        bins[i] = static_cast<int32_t>(bin_for_vrp(bank, std::min(q.q[i], bank.p_max)));
    Raster out(f.width, f.height);
    apply_bank_pass(f.values.data(), out.values.data(), f.width, f.height, bank, bins.data(),
                    conv::active_row_fn());
    return out;
}

RecursivePassPlan plan_recursive_pass(const RecursiveBankSet& banks,
                                      const std::vector<double>& residuals, int pass,
                                      double q_min) {
    const int half_width = banks.half_width;
    const FilterBank& bank = banks.bank_for(pass);
    const int bin_count = bank.bin_count;
    const double p_prev = pass == 0 ? 1.0 : p_max_at_iteration(pass - 1, half_width);

    RecursivePassPlan plan;
    plan.r_max = r_max_at_iteration(pass, half_width);
    plan.bins.resize(residuals.size());

    // Ratio each bin actually delivers at this pass. Within the stored pass
    // range this is the bank's own record; reuse passes re-evaluate the
    // stored parameter at the current pass index.
    plan.achieved_r.assign(bin_count, 1.0);
    if (pass <= banks.n_reuse) {
        for (int b = 0; b < bin_count; ++b)
            plan.achieved_r[b] = std::max(1.0, bank.bin_p[b] / p_prev);
    } else {
        const GeneratingKernel1D box = repeated_box_1d(pass, half_width);
        for (int b = 0; b < bin_count; ++b)
            plan.achieved_r[b] =
                std::max(1.0, vrp_iterated_given_box(box, bank.bin_a[b], half_width) / p_prev);
    }
    // Never hand an active pixel a bin that makes no progress.
    int min_bin = 0;
    while (min_bin < bin_count - 1 && plan.achieved_r[min_bin] <= 1.0 + 1e-6) ++min_bin;

    const double inv_span = 1.0 / (plan.r_max - 1.0);
    for (size_t i = 0; i < residuals.size(); ++i) {
        if (residuals[i] <= q_min) {
            plan.bins[i] = -1;
            continue;
        }
        const double r = std::min(residuals[i], plan.r_max);
        const long bin = std::lround((r - 1.0) * inv_span * (bin_count - 1));
        plan.bins[i] = static_cast<int32_t>(
            std::clamp(bin, static_cast<long>(min_bin), static_cast<long>(bin_count - 1)));
    }
    return plan;
}

void advance_residuals(const RecursivePassPlan& plan, std::vector<double>& residuals) {
    for (size_t i = 0; i < residuals.size(); ++i)
        if (plan.bins[i] >= 0) residuals[i] /= plan.achieved_r[plan.bins[i]];
}

RecursiveResult apply_recursive(const Raster& f, const VRRMap& q, const RecursiveBankSet& banks,
                                double q_min, int max_iter) {
    require_map_shape(f, q, "apply_recursive");
    if (!(q_min > 1.0))
        throw std::invalid_argument("q_min must be > 1, got " + std::to_string(q_min));
    if (max_iter < 0)
        throw std::invalid_argument("max_iter must be >= 0");

    conv::RowFn row_fn = conv::active_row_fn();

    RecursiveResult result;
    std::vector<double> cur = f.values;
    std::vector<double> next(f.size());
    std::vector<double> residual = q.q;

    int n = 0;
    bool exhausted = false;
    for (;; ++n) {
        int64_t active = 0;
        for (double r : residual)
            if (r > q_min) ++active;
        if (active == 0) break;
        if (n >= max_iter) {
            exhausted = true;
            break;
        }

        const RecursivePassPlan plan = plan_recursive_pass(banks, residual, n, q_min);
        apply_bank_pass(cur.data(), next.data(), f.width, f.height, banks.bank_for(n),
                        plan.bins.data(), row_fn);
        advance_residuals(plan, residual);
        std::swap(cur, next);
        result.report.pixels_active_per_iteration.push_back(active);
    }

    result.report.iterations_used =
        static_cast<int>(result.report.pixels_active_per_iteration.size());
    result.report.max_iter_reached = exhausted;
    result.report.residual_q_max =
        residual.empty() ? 1.0 : *std::max_element(residual.begin(), residual.end());
    result.output = Raster(f.width, f.height, std::move(cur));
    return result;
}

int estimate_iterations(double q, int half_width) {
    if (!(q >= 1.0))
        throw std::invalid_argument("variance ratio must be >= 1, got " + std::to_string(q));
    const double k2 = (2.0 * half_width + 1.0) * (2.0 * half_width + 1.0);
    return static_cast<int>(std::floor(q / k2));
}

} // namespace svr
