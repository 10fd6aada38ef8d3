// SPDX-License-Identifier: Apache-2.0
#include "svr/kernels.hpp"

#include <cmath>
#include <string>

namespace svr {

namespace {

void check_a(double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw std::invalid_argument("kernel parameter a must lie in [0,1], got " +
                                    std::to_string(a));
}

void check_half_width(int half_width) {
    if (half_width < 1)
        throw std::invalid_argument("kernel half-width must be >= 1, got " +
                                    std::to_string(half_width));
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double sum_sq(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Full linear convolution; both inputs are short, dense vectors.
std::vector<double> convolve_full(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

Kernel2D outer_product_normalized(const GeneratingKernel1D& u) {
    const int k = u.length();
    double norm = sum(u.coeffs);
    norm *= norm;
    Kernel2D out;
    out.half_width = u.half_width;
    out.coeffs.resize(static_cast<size_t>(k) * k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            out.coeffs[static_cast<size_t>(r) * k + c] = u.coeffs[r] * u.coeffs[c] / norm;
    return out;
}

} // namespace

GeneratingKernel1D generating_kernel(double a, int half_width) {
    check_a(a);
    check_half_width(half_width);
    GeneratingKernel1D u;
    u.half_width = half_width;
    u.coeffs.resize(2 * half_width + 1);
    for (int l = -half_width; l <= half_width; ++l)
        u.coeffs[l + half_width] = std::pow(a, static_cast<double>(l) * l); // pow(0,0) == 1
    return u;
}

Kernel2D atomic_kernel(double a, int half_width) {
    return outer_product_normalized(generating_kernel(a, half_width));
}

Kernel2D delta_kernel(int half_width) {
    check_half_width(half_width);
    const int k = 2 * half_width + 1;
    Kernel2D out;
    out.half_width = half_width;
    out.coeffs.assign(static_cast<size_t>(k) * k, 0.0);
    out.coeffs[static_cast<size_t>(half_width) * k + half_width] = 1.0;
    return out;
}

Kernel2D box_kernel(int half_width) {
    check_half_width(half_width);
    const int k = 2 * half_width + 1;
    Kernel2D out;
    out.half_width = half_width;
    out.coeffs.assign(static_cast<size_t>(k) * k, 1.0 / (static_cast<double>(k) * k));
    return out;
}

Kernel2D gaussian_kernel(double sigma, int half_width) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian sigma must be > 0, got " + std::to_string(sigma));
    check_half_width(half_width);
    const int k = 2 * half_width + 1;
    Kernel2D out;
    out.half_width = half_width;
    out.coeffs.resize(static_cast<size_t>(k) * k);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    double norm = 0.0;
    for (int dy = -half_width; dy <= half_width; ++dy)
        for (int dx = -half_width; dx <= half_width; ++dx) {
            double g = std::exp(-(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) * inv2s2);
            out.coeffs[static_cast<size_t>(dy + half_width) * k + (dx + half_width)] = g;
            norm += g;
        }
    for (double& c : out.coeffs) c /= norm;
    return out;
}

double sigma_from_a(double a) {
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("sigma is defined for a in (0,1) only, got " +
                                    std::to_string(a));
    return 1.0 / std::sqrt(-2.0 * std::log(a));
}

double vrp(const Kernel2D& k) {
    double s = 0.0, ss = 0.0;
    for (double c : k.coeffs) {
        if (c < 0.0)
            throw std::invalid_argument("kernel has a negative coefficient");
        s += c;
        ss += c * c;
    }
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("kernel is not normalized: sum = " + std::to_string(s));
    return 1.0 / ss;
}

double vrp_trace(const Kernel2D& k) {
    const int n = k.size();
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += k.coeffs[static_cast<size_t>(i) * n + i];
    return 1.0 / (tr * tr);
}

double vrp_atomic(double a, int half_width) {
    return vrp_iterated(a, 0, half_width);
}

GeneratingKernel1D repeated_box_1d(int n, int half_width) {
    if (n < 0)
        throw std::invalid_argument("box repetition count must be >= 0, got " + std::to_string(n));
    check_half_width(half_width);
    GeneratingKernel1D b;
    if (n == 0) {
        b.half_width = 0;
        b.coeffs = {1.0};
        return b;
    }
    const int k = 2 * half_width + 1;
    std::vector<double> box(k, 1.0 / k);
    std::vector<double> acc = box;
    for (int i = 1; i < n; ++i) acc = convolve_full(acc, box);
    b.half_width = n * half_width;
    b.coeffs = std::move(acc);
    return b;
}

GeneratingKernel1D iterated_generating(double a, int n, int half_width) {
    GeneratingKernel1D u = generating_kernel(a, half_width);
    if (n == 0) return u;
    GeneratingKernel1D b = repeated_box_1d(n, half_width);
    GeneratingKernel1D out;
    out.half_width = b.half_width + u.half_width;
    out.coeffs = convolve_full(b.coeffs, u.coeffs);
    return out;
}

double vrp_iterated(double a, int n, int half_width) {
    GeneratingKernel1D u = iterated_generating(a, n, half_width);
    const double s1 = sum(u.coeffs);
    const double s2 = sum_sq(u.coeffs);
    return (s1 * s1 * s1 * s1) / (s2 * s2);
}

double vrp_iterated_given_box(const GeneratingKernel1D& repeated_box, double a, int half_width) {
    const GeneratingKernel1D u = generating_kernel(a, half_width);
    const std::vector<double> composite = convolve_full(repeated_box.coeffs, u.coeffs);
    const double s1 = sum(composite);
    const double s2 = sum_sq(composite);
    return (s1 * s1 * s1 * s1) / (s2 * s2);
}

double p_max_at_iteration(int n, int half_width) {
    return vrp_iterated(1.0, n, half_width);
}

double r_max_at_iteration(int n, int half_width) {
    if (n < 0)
        throw std::invalid_argument("iteration index must be >= 0, got " + std::to_string(n));
    if (n == 0) {
        const double k = 2.0 * half_width + 1.0;
        return k * k;
    }
    return p_max_at_iteration(n, half_width) / p_max_at_iteration(n - 1, half_width);
}

} // namespace svr
