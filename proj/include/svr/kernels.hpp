// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "svr/errors.hpp"

namespace svr {

/// Symmetric non-negative 1D coefficient vector of length 2*half_width+1.
/// The separable 2D smoothing kernels below are self outer products of these.
struct GeneratingKernel1D {
    int half_width = 0;            // L; coeffs.size() == 2L+1
    std::vector<double> coeffs;

    int length() const { return 2 * half_width + 1; }
    double center() const { return coeffs[half_width]; }
};

/// Normalized K x K non-negative convolution kernel (K = 2L+1, sum == 1).
struct Kernel2D {
    int half_width = 0;            // L
    std::vector<double> coeffs;    // K*K, row-major

    int size() const { return 2 * half_width + 1; }
    double at(int dx, int dy) const {
        const int k = size();
        return coeffs[static_cast<size_t>(dy + half_width) * k + (dx + half_width)];
    }
};

// --- construction ------------------------------------------------------

/// 1D generator with entries a^(l^2), l in [-L, L]; unnormalized, center 1.
/// a = 0 gives the delta generator (0^0 := 1), a = 1 the box generator.
GeneratingKernel1D generating_kernel(double a, int half_width);

/// Separable kernel built from the a^(l^2) generator, normalized to sum 1.
/// Sweeps continuously from the delta kernel (a=0) to the box kernel (a=1).
Kernel2D atomic_kernel(double a, int half_width);

/// Identity kernel: center 1, zero elsewhere.
Kernel2D delta_kernel(int half_width);

/// Uniform kernel with entries 1/K^2; the strongest smoother at a given size.
Kernel2D box_kernel(int half_width);

/// Truncated, normalized Gaussian on the K x K support.
Kernel2D gaussian_kernel(double sigma, int half_width);

/// Width of the truncated Gaussian whose coefficients equal the a-generator
/// kernel: sigma = 1/sqrt(-2 ln a). Defined for a in (0, 1) only.
double sigma_from_a(double a);

// --- variance reduction power ------------------------------------------

/// Factor by which a normalized kernel reduces the variance of iid noise:
/// 1 / sum(c_j^2). Requires a normalized kernel (checked to 1e-9).
double vrp(const Kernel2D& k);

/// Same quantity via the main diagonal: 1/trace(k)^2. Valid only for
/// normalized self-outer-product kernels; the caller guarantees that.
double vrp_trace(const Kernel2D& k);

/// Closed evaluation for the a-parameter family without building the 2D
/// kernel: (sum a^(l^2))^4 / (sum a^(2 l^2))^2.
double vrp_atomic(double a, int half_width);

// --- recursive (multi-pass) variants -------------------------------------

/// 1D box of length 2L+1 self-convolved n times, normalized to sum 1.
/// n = 0 yields the length-1 identity so that convolving with it is exact.
GeneratingKernel1D repeated_box_1d(int n, int half_width);

/// Full linear convolution of repeated_box_1d(n, L) with the a-generator.
/// Describes the composite smoothing after n box passes followed by one
/// a-parameter pass; used for analysis only, never as a filter kernel.
GeneratingKernel1D iterated_generating(double a, int n, int half_width);

/// Total variance reduction of the composite pass sequence: n box passes
/// then one a-parameter pass. Equals vrp_atomic(a, L) at n = 0.
double vrp_iterated(double a, int n, int half_width);

/// vrp_iterated against a precomputed repeated-box factor, so bank-wide
/// sweeps can hoist the box construction out of their per-bin loop.
double vrp_iterated_given_box(const GeneratingKernel1D& repeated_box, double a, int half_width);

/// Largest total variance reduction reachable by pass n (all-box chain).
double p_max_at_iteration(int n, int half_width);

/// Largest incremental reduction pass n can add: K^2 for the first pass,
/// then p_max(n)/p_max(n-1). Strictly decreasing for n >= 1.
double r_max_at_iteration(int n, int half_width);

} // namespace svr
