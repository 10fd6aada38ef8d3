// SPDX-License-Identifier: Apache-2.0
#include "svr/raster.hpp"

#include <cmath>

namespace svr {

Raster::Raster(int w, int h, double fill) : width(w), height(h) {
    if (w <= 0 || h <= 0)
        throw validation_error("raster dimensions must be positive, got " +
                               std::to_string(w) + "x" + std::to_string(h));
    values.assign(static_cast<size_t>(w) * h, fill);
}

Raster::Raster(int w, int h, std::vector<double> v) : width(w), height(h), values(std::move(v)) {
    if (w <= 0 || h <= 0)
        throw validation_error("raster dimensions must be positive, got " +
                               std::to_string(w) + "x" + std::to_string(h));
    if (values.size() != static_cast<size_t>(w) * h)
        throw validation_error("raster payload has " + std::to_string(values.size()) +
                               " samples, expected " + std::to_string(static_cast<size_t>(w) * h));
}

void require_same_shape(const Raster& a, const Raster& b, const char* what) {
    if (!a.same_shape(b))
        throw validation_error(std::string(what) + ": shape mismatch, " +
                               std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                               std::to_string(b.width) + "x" + std::to_string(b.height));
}

VRRMap VRRMap::from_raster(const Raster& r) {
    VRRMap m;
    m.width = r.width;
    m.height = r.height;
    m.q.resize(r.size());
    for (size_t i = 0; i < r.size(); ++i) {
        double v = r.values[i];
        if (!std::isfinite(v))
            throw validation_error("ratio map contains a non-finite value at index " +
                                   std::to_string(i));
        if (v < 1.0) {
            v = 1.0;
            ++m.clamped_count;
        }
        m.q[i] = v;
    }
    return m;
}

VRRMap VRRMap::uniform(int w, int h, double value) {
    return from_raster(Raster(w, h, value));
}

Raster VRRMap::to_raster() const {
    return Raster(width, height, q);
}

} // namespace svr
