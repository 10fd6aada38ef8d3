// SPDX-License-Identifier: Apache-2.0
#include "svr/vrrmaps.hpp"

#include <algorithm>
#include <cmath>

#include "svr/kernels.hpp"
#include "svr/svfilter.hpp"

namespace svr {

namespace {

VRRMap clamp_to_map(Raster&& r, double q_cap) {
    for (double& v : r.values) v = std::min(v, q_cap);
    return VRRMap::from_raster(r);
}

Raster presmooth_box3(const Raster& f) {
    const Kernel2D box = box_kernel(1);
    Raster out(f.width, f.height);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x)
            out.at(x, y) = convolve_at(f, x, y, box);
    return out;
}

} // namespace

VRRMap vrr_from_variance(const Raster& variances, double target_variance) {
    if (!(target_variance > 0.0))
        throw std::invalid_argument("target variance must be > 0, got " +
                                    std::to_string(target_variance));
    Raster q(variances.width, variances.height);
    for (size_t i = 0; i < q.size(); ++i) q.values[i] = variances.values[i] / target_variance;
    return VRRMap::from_raster(q);
}

VRRMap vrr_from_counts(const Raster& counts, double target_after_log_variance,
                       double count_floor) {
    if (!(target_after_log_variance > 0.0))
        throw std::invalid_argument("target after-log variance must be > 0, got " +
                                    std::to_string(target_after_log_variance));
    Raster q(counts.width, counts.height);
    for (size_t i = 0; i < q.size(); ++i) {
        double c = counts.values[i];
        if (!(c > 0.0)) {
            if (!(count_floor > 0.0))
                throw validation_error("count sample " + std::to_string(i) + " is " +
                                       std::to_string(c) + " and no count floor is configured");
            c = count_floor;
        }
        q.values[i] = 1.0 / (c * target_after_log_variance);
    }
    return VRRMap::from_raster(q);
}

Raster gradient_magnitude(const Raster& f) {
    if (f.width < 2 || f.height < 2)
        throw validation_error("gradient needs at least 2 samples per axis, got " +
                               std::to_string(f.width) + "x" + std::to_string(f.height));
    Raster g(f.width, f.height);
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, f.width - 1);
            const int ym = std::max(y - 1, 0), yp = std::min(y + 1, f.height - 1);
            const double fx = (f.at(xp, y) - f.at(xm, y)) / (xp - xm);
            const double fy = (f.at(x, yp) - f.at(x, ym)) / (yp - ym);
            g.at(x, y) = std::hypot(fx, fy);
        }
    }
    return g;
}

VRRMap vrr_edge(const Raster& f, const EdgeVrrConfig& cfg) {
    if (cfg.mode != EdgeVrrMode::gradient)
        throw std::invalid_argument("vrr_edge expects gradient mode");
    if (!(cfg.v0 > 0.0) || !(cfg.epsilon > 0.0) || !(cfg.q_cap >= 1.0))
        throw std::invalid_argument("edge VRR config out of range");
    Raster g = gradient_magnitude(cfg.presmooth ? presmooth_box3(f) : f);
    for (double& v : g.values) v = cfg.v0 / std::max(v, cfg.epsilon);
    return clamp_to_map(std::move(g), cfg.q_cap);
}

VRRMap vrr_perona_malik(const Raster& f, const EdgeVrrConfig& cfg) {
    if (cfg.mode != EdgeVrrMode::perona_malik)
        throw std::invalid_argument("vrr_perona_malik expects perona_malik mode");
    if (!(cfg.v0 > 0.0) || !(cfg.strength > 0.0) || !(cfg.q_cap >= 1.0))
        throw std::invalid_argument("edge VRR config out of range");
    Raster g = gradient_magnitude(cfg.presmooth ? presmooth_box3(f) : f);
    for (double& v : g.values) v = cfg.strength * cfg.v0 / (cfg.v0 + v * v);
    return clamp_to_map(std::move(g), cfg.q_cap);
}

Raster blend(const Raster& original, const Raster& filtered, double alpha) {
    require_same_shape(original, filtered, "blend");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("blend weight must lie in [0,1], got " +
                                    std::to_string(alpha));
    Raster out(original.width, original.height);
    for (size_t i = 0; i < out.size(); ++i)
        out.values[i] = alpha * original.values[i] + (1.0 - alpha) * filtered.values[i];
    return out;
}

} // namespace svr
