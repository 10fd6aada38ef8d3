// SPDX-License-Identifier: Apache-2.0
#include "svr/convolve.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace svr::conv {

namespace {

bool cpu_has_avx2() {
#if defined(SVR_HAVE_AVX2_BUILD) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Impl resolve_default() {
    if (const char* env = std::getenv("SVR_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Impl::scalar;
        if (std::strcmp(env, "avx2") == 0 && impl_available(Impl::avx2)) return Impl::avx2;
        // anything else (including "auto") falls through to detection
    }
    return cpu_has_avx2() ? Impl::avx2 : Impl::scalar;
}

std::atomic<int>& impl_slot() {
    static std::atomic<int> slot{static_cast<int>(resolve_default())};
    return slot;
}

} // namespace

bool impl_available(Impl impl) {
    switch (impl) {
    case Impl::scalar: return true;
    case Impl::avx2: return cpu_has_avx2();
    }
    return false;
}

Impl active_impl() {
    return static_cast<Impl>(impl_slot().load(std::memory_order_relaxed));
}

void set_impl(Impl impl) {
    if (!impl_available(impl))
        throw std::invalid_argument(std::string("convolution implementation '") +
                                    impl_name(impl) + "' is not available on this machine");
    impl_slot().store(static_cast<int>(impl), std::memory_order_relaxed);
}

const char* impl_name(Impl impl) {
    switch (impl) {
    case Impl::scalar: return "scalar";
    case Impl::avx2: return "avx2";
    }
    return "?";
}

RowFn row_fn(Impl impl) {
#if defined(SVR_HAVE_AVX2_BUILD)
    if (impl == Impl::avx2) return &row_avx2;
#endif
    (void)impl;
    return &row_scalar;
}

RowFn active_row_fn() {
    return row_fn(active_impl());
}

} // namespace svr::conv
