// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "svr/errors.hpp"

namespace svr {

/// W x H grid of real-valued samples, row-major.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<double> values; // row-major, width*height entries

    Raster() = default;
    Raster(int w, int h, double fill = 0.0);
    Raster(int w, int h, std::vector<double> v);

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return values.size(); }
    bool same_shape(const Raster& o) const { return width == o.width && height == o.height; }
};

/// Throws validation_error unless a and b have identical dimensions.
void require_same_shape(const Raster& a, const Raster& b, const char* what);

/// Per-pixel variance-reduction ratios, q >= 1 everywhere after construction.
struct VRRMap {
    int width = 0;
    int height = 0;
    std::vector<double> q;          // row-major
    int64_t clamped_count = 0;      // input values < 1 raised to 1

    VRRMap() = default;

    /// Clamps entries below 1 up to 1 and counts them; rejects non-finite input.
    static VRRMap from_raster(const Raster& r);
    /// Uniform map (convenience for synthetic tests).
    static VRRMap uniform(int w, int h, double value);

    double at(int x, int y) const { return q[static_cast<size_t>(y) * width + x]; }
    Raster to_raster() const;
};

} // namespace svr
