// SPDX-License-Identifier: Apache-2.0
#include "svr/convolve.hpp"

namespace svr::conv {

void row_scalar(const double* src, int width, int y, int x0, int x1, const double* bank,
                int taps, int half_width, const int32_t* bin_of_x, double* dst_row) {
    const double* center_row = src + static_cast<ptrdiff_t>(y) * width;
    for (int x = x0; x < x1; ++x) {
        const int32_t bin = bin_of_x[x];
        if (bin < 0) {
            dst_row[x] = center_row[x];
            continue;
        }
        const double* kc = bank + static_cast<ptrdiff_t>(bin) * taps;
        double acc = 0.0;
        int t = 0;
        // tap t = (j2+L)*K + (j1+L) reads the source at (x - j1, y - j2)
        for (int j2 = -half_width; j2 <= half_width; ++j2) {
            const double* row = src + static_cast<ptrdiff_t>(y - j2) * width + x;
            for (int j1 = -half_width; j1 <= half_width; ++j1, ++t)
                acc += kc[t] * row[-j1];
        }
        dst_row[x] = acc;
    }
}

} // namespace svr::conv
