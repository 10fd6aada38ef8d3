// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "svr/kernels.hpp"

namespace svr {

/// Sampled map from kernel parameter a (uniform grid on [0,1]) to the
/// variance reduction power at a given pass index. Strictly increasing.
struct VrpLookupTable {
    int half_width = 0;            // L
    int iteration = 0;             // n
    std::vector<double> a_samples;
    std::vector<double> p_values;
};

/// Precomputed array of kernels whose index is linear in VRP over
/// [p_min, p_max] for one pass. Kernels are stored contiguously so the
/// filtering inner loop can address them by bin * K * K.
struct FilterBank {
    int half_width = 0;            // L
    int iteration = 0;             // n (pass this bank was built for)
    double p_min = 1.0;
    double p_max = 1.0;
    int bin_count = 0;
    std::vector<double> coeffs;    // bin_count * K * K, row-major per kernel
    std::vector<double> bin_a;     // generator parameter per bin
    std::vector<double> bin_p;     // VRP the bin actually achieves at `iteration`

    int kernel_size() const { return 2 * half_width + 1; }
    int taps() const { return kernel_size() * kernel_size(); }
    const double* kernel_ptr(int bin) const {
        return coeffs.data() + static_cast<size_t>(bin) * taps();
    }
    /// Nominal VRP of bin i: p_min + i * (p_max - p_min) / (bin_count - 1).
    double bin_target_p(int bin) const {
        return p_min + (p_max - p_min) * bin / (bin_count - 1);
    }
};

/// Banks for passes 0..n_reuse; later passes reuse the last bank
/// (its bin->kernel map stops changing noticeably after the third pass).
struct RecursiveBankSet {
    int half_width = 0;
    int n_reuse = 0;               // banks.size() == n_reuse + 1
    std::vector<FilterBank> banks;

    const FilterBank& bank_for(int n) const {
        return banks[static_cast<size_t>(n < n_reuse ? n : n_reuse)];
    }
};

inline constexpr int kDefaultBankBins = 1024;
inline constexpr int kDefaultLookupSamples = 1000;
inline constexpr int kDefaultReuseIteration = 2;

/// Tabulates vrp_iterated(a, n, L) on a uniform a-grid with `samples` points.
VrpLookupTable build_lookup_table(int half_width, int iteration, int samples);

/// Inverse of the tabulated VRP curve: the a whose VRP equals p. Linear
/// interpolation between the bracketing samples, then a few safeguarded
/// secant steps against the exact curve (the interpolation alone is not
/// accurate enough next to the flat approach into a = 1).
double invert_vrp(const VrpLookupTable& table, double p);

/// Closed-form inverse for the 3x3 family, passes 0..2. Validated against
/// invert_vrp; the constants differ from a naive quadratic-formula
/// transcription (see the regression tests).
double a_from_p_closed(double p, int iteration);

/// Single-pass bank spanning [1, K^2] with `bins` uniformly spaced VRP bins.
FilterBank build_fixed_bank(int half_width, int bins);

/// Banks for passes 0..2 (later passes reuse pass 2). use_closed_form is
/// valid for half_width == 1 only.
RecursiveBankSet build_recursive_banks(int half_width, int bins, bool use_closed_form);

/// Bin index for VRP p, clamped into range. Constant time.
int bin_for_vrp(const FilterBank& bank, double p);

/// Kernel whose VRP is nearest to p (clamped indexing, never throws).
Kernel2D select_kernel(const FilterBank& bank, double p);

// --- persistence ---------------------------------------------------------

/// Versioned little-endian container, magic "SVRB", trailing checksum.
/// Round-trips bit-exactly.
void save_bank(const RecursiveBankSet& set, const std::string& path);
RecursiveBankSet load_bank(const std::string& path);

/// Throws validation_error if the loaded set was built for a different
/// kernel size than the caller needs.
void require_bank_half_width(const RecursiveBankSet& set, int half_width);

/// Diagnostic text dump: one line per bin (index, p, a) per bank.
void dump_bank(const RecursiveBankSet& set, std::ostream& out);

} // namespace svr
