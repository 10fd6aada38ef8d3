// SPDX-License-Identifier: Apache-2.0
#include "svr/convolve.hpp"

#if defined(SVR_HAVE_AVX2_BUILD)

#include <immintrin.h>

namespace svr::conv {

// Four output pixels per step. Kernel coefficients are gathered per tap from
// the contiguous bank (each pixel may use a different bin); source samples
// for the four lanes are contiguous, so a plain unaligned load suffices.
// Multiply-add (no FMA) in scalar tap order keeps results bit-identical to
// row_scalar.
void row_avx2(const double* src, int width, int y, int x0, int x1, const double* bank, int taps,
              int half_width, const int32_t* bin_of_x, double* dst_row) {
    const double* center_row = src + static_cast<ptrdiff_t>(y) * width;
    const __m128i zero32 = _mm_setzero_si128();
    const __m128i taps32 = _mm_set1_epi32(taps);

    int x = x0;
    for (; x + 4 <= x1; x += 4) {
        const __m128i bins = _mm_loadu_si128(reinterpret_cast<const __m128i*>(bin_of_x + x));
        const __m128i copy32 = _mm_cmplt_epi32(bins, zero32);
        const __m128i safe = _mm_max_epi32(bins, zero32);
        const __m128i base_off = _mm_mullo_epi32(safe, taps32);

        __m256d acc = _mm256_setzero_pd();
        int t = 0;
        for (int j2 = -half_width; j2 <= half_width; ++j2) {
            const double* row = src + static_cast<ptrdiff_t>(y - j2) * width + x;
            for (int j1 = -half_width; j1 <= half_width; ++j1, ++t) {
                const __m128i off = _mm_add_epi32(base_off, _mm_set1_epi32(t));
                const __m256d c = _mm256_i32gather_pd(bank, off, 8);
                const __m256d v = _mm256_loadu_pd(row - j1);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(c, v));
            }
        }
        const __m256d cur = _mm256_loadu_pd(center_row + x);
        const __m256d copy_mask = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(copy32));
        acc = _mm256_blendv_pd(acc, cur, copy_mask);
        _mm256_storeu_pd(dst_row + x, acc);
    }
    if (x < x1) row_scalar(src, width, y, x, x1, bank, taps, half_width, bin_of_x, dst_row);
}

} // namespace svr::conv

#endif // SVR_HAVE_AVX2_BUILD
