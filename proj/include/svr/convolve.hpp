// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace svr::conv {

/// Space-variant convolution of one row segment where every source access is
/// in bounds: caller guarantees x - L >= 0, x + L < width for x in [x0, x1)
/// and y - L >= 0, y + L < height.
///
/// bin_of_x[x] selects the kernel (bank + bin * taps); a negative bin copies
/// the source pixel through unchanged. All variants accumulate taps in the
/// same order with plain multiply-add, so their results are bit-identical.
using RowFn = void (*)(const double* src, int width, int y, int x0, int x1,
                       const double* bank, int taps, int half_width,
                       const int32_t* bin_of_x, double* dst_row);

void row_scalar(const double* src, int width, int y, int x0, int x1, const double* bank,
                int taps, int half_width, const int32_t* bin_of_x, double* dst_row);

#if defined(__x86_64__) || defined(__i386__)
#define SVR_HAVE_AVX2_BUILD 1
void row_avx2(const double* src, int width, int y, int x0, int x1, const double* bank, int taps,
              int half_width, const int32_t* bin_of_x, double* dst_row);
#endif

enum class Impl { scalar, avx2 };

bool impl_available(Impl impl);

/// Active implementation: resolved once from the SVR_SIMD environment
/// variable ("scalar", "avx2", or "auto"), defaulting to the fastest
/// supported variant. set_impl overrides it (throws if unsupported).
Impl active_impl();
void set_impl(Impl impl);
const char* impl_name(Impl impl);

/// Row function for the active implementation.
RowFn active_row_fn();
RowFn row_fn(Impl impl);

} // namespace svr::conv
