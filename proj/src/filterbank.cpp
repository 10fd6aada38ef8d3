// SPDX-License-Identifier: Apache-2.0
#include "svr/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "svr/detail/bytes.hpp"

namespace svr {

namespace {

constexpr char kBankMagic[4] = {'S', 'V', 'R', 'B'};
constexpr uint32_t kBankVersion = 1;

double closed_form_pass0(double t) {
    // Rationalized root of (1+2a)^4 = p (1+2a^2)^2; no singularity at p = 4.
    return (t - 1.0) / (2.0 + std::sqrt(2.0 * t * (3.0 - t)));
}

double closed_form_pass1(double t) {
    return -0.5 + std::sqrt(t / (4.0 * (9.0 - 2.0 * t)));
}

double closed_form_pass2(double t) {
    return (32.0 * t - 162.0 + std::sqrt(6.0 * t * (81.0 - 13.0 * t))) / (324.0 - 58.0 * t);
}

FilterBank build_bank_for_pass(int half_width, int bins, int iteration,
                               double p_lo, double p_hi, bool use_closed_form,
                               const VrpLookupTable* table) {
    FilterBank bank;
    bank.half_width = half_width;
    bank.iteration = iteration;
    bank.p_min = p_lo;
    bank.p_max = p_hi;
    bank.bin_count = bins;
    bank.bin_a.resize(bins);
    bank.bin_p.resize(bins);
    bank.coeffs.resize(static_cast<size_t>(bins) * bank.taps());
    for (int i = 0; i < bins; ++i) {
        const double p = (i == bins - 1) ? p_hi : p_lo + (p_hi - p_lo) * i / (bins - 1);
        const double a = use_closed_form ? a_from_p_closed(p, iteration) : invert_vrp(*table, p);
        Kernel2D k = atomic_kernel(a, half_width);
        bank.bin_a[i] = a;
        bank.bin_p[i] = vrp_iterated(a, iteration, half_width);
        std::copy(k.coeffs.begin(), k.coeffs.end(),
                  bank.coeffs.begin() + static_cast<size_t>(i) * bank.taps());
    }
    return bank;
}

} // namespace

VrpLookupTable build_lookup_table(int half_width, int iteration, int samples) {
    if (samples < 2)
        throw std::invalid_argument("lookup table needs at least 2 samples, got " +
                                    std::to_string(samples));
    VrpLookupTable t;
    t.half_width = half_width;
    t.iteration = iteration;
    t.a_samples.resize(samples);
    t.p_values.resize(samples);
    for (int k = 0; k < samples; ++k) {
        const double a = (k == samples - 1) ? 1.0 : static_cast<double>(k) / (samples - 1);
        t.a_samples[k] = a;
        t.p_values[k] = vrp_iterated(a, iteration, half_width);
    }
    for (int k = 1; k < samples; ++k)
        if (!(t.p_values[k] > t.p_values[k - 1]))
            throw validation_error("VRP table is not strictly increasing at sample " +
                                   std::to_string(k));
    return t;
}

double invert_vrp(const VrpLookupTable& table, double p) {
    const auto& pv = table.p_values;
    const auto& av = table.a_samples;
    const double tol = 1e-9 * (1.0 + std::abs(p));
    if (p < pv.front() - tol || p > pv.back() + tol)
        throw std::out_of_range("VRP " + std::to_string(p) + " outside table range [" +
                                std::to_string(pv.front()) + ", " + std::to_string(pv.back()) + "]");
    if (p <= pv.front()) return av.front();
    if (p >= pv.back()) return av.back();

    const auto it = std::lower_bound(pv.begin(), pv.end(), p);
    const size_t hi = static_cast<size_t>(it - pv.begin());
    if (pv[hi] == p) return av[hi];
    const size_t lo = hi - 1;

    double a_lo = av[lo], a_hi = av[hi];
    double g_lo = pv[lo] - p, g_hi = pv[hi] - p; // g_lo < 0 < g_hi
    double a = a_lo + (a_hi - a_lo) * (-g_lo) / (g_hi - g_lo);

    // The curve flattens into a = 1 on the first pass, where interpolation
    // alone leaves a few-1e-6 error in a; polish against the exact curve.
    for (int iter = 0; iter < 40; ++iter) {
        const double g = vrp_iterated(a, table.iteration, table.half_width) - p;
        if (std::abs(g) <= 1e-13 * p) break;
        if (g > 0.0) {
            a_hi = a;
            g_hi = g;
        } else {
            a_lo = a;
            g_lo = g;
        }
        double next = a_lo + (a_hi - a_lo) * (-g_lo) / (g_hi - g_lo);
        if (!(next > a_lo && next < a_hi)) next = 0.5 * (a_lo + a_hi);
        if (std::abs(next - a) < 1e-16) {
            a = next;
            break;
        }
        a = next;
    }
    return a;
}

double a_from_p_closed(double p, int iteration) {
    double p_lo, p_hi;
    switch (iteration) {
    case 0:
        p_lo = 1.0;
        p_hi = 9.0;
        break;
    case 1:
        p_lo = 9.0;
        p_hi = p_max_at_iteration(1, 1);
        break;
    case 2:
        p_lo = p_max_at_iteration(1, 1);
        p_hi = p_max_at_iteration(2, 1);
        break;
    default:
        throw std::invalid_argument("closed-form inversion exists for passes 0..2, got " +
                                    std::to_string(iteration));
    }
    const double tol = 1e-9 * p_hi;
    if (p < p_lo - tol || p > p_hi + tol)
        throw std::out_of_range("VRP " + std::to_string(p) + " outside pass-" +
                                std::to_string(iteration) + " range [" + std::to_string(p_lo) +
                                ", " + std::to_string(p_hi) + "]");
    p = std::clamp(p, p_lo, p_hi);
    const double t = std::sqrt(p);
    double a;
    switch (iteration) {
    case 0: a = closed_form_pass0(t); break;
    case 1: a = closed_form_pass1(t); break;
    default: a = closed_form_pass2(t); break;
    }
    return std::clamp(a, 0.0, 1.0);
}

FilterBank build_fixed_bank(int half_width, int bins) {
    if (bins < 2)
        throw std::invalid_argument("bank needs at least 2 bins, got " + std::to_string(bins));
    const double k2 = (2.0 * half_width + 1.0) * (2.0 * half_width + 1.0);
    VrpLookupTable table = build_lookup_table(half_width, 0, kDefaultLookupSamples);
    return build_bank_for_pass(half_width, bins, 0, 1.0, k2, false, &table);
}

RecursiveBankSet build_recursive_banks(int half_width, int bins, bool use_closed_form) {
    if (bins < 2)
        throw std::invalid_argument("bank needs at least 2 bins, got " + std::to_string(bins));
    if (use_closed_form && half_width != 1)
        throw std::invalid_argument("closed-form bank construction is available for 3x3 kernels "
                                    "only (half-width 1)");
    RecursiveBankSet set;
    set.half_width = half_width;
    set.n_reuse = kDefaultReuseIteration;
    for (int n = 0; n <= set.n_reuse; ++n) {
        const double p_lo = (n == 0) ? 1.0 : p_max_at_iteration(n - 1, half_width);
        const double p_hi = p_max_at_iteration(n, half_width);
        VrpLookupTable table;
        if (!use_closed_form) table = build_lookup_table(half_width, n, kDefaultLookupSamples);
        set.banks.push_back(build_bank_for_pass(half_width, bins, n, p_lo, p_hi, use_closed_form,
                                                use_closed_form ? nullptr : &table));
    }
    return set;
}

int bin_for_vrp(const FilterBank& bank, double p) {
    p = std::clamp(p, bank.p_min, bank.p_max);
    const double u = (p - bank.p_min) / (bank.p_max - bank.p_min);
    const long bin = std::lround(u * (bank.bin_count - 1));
    return static_cast<int>(std::clamp(bin, 0L, static_cast<long>(bank.bin_count - 1)));
}

Kernel2D select_kernel(const FilterBank& bank, double p) {
    const int bin = bin_for_vrp(bank, p);
    Kernel2D k;
    k.half_width = bank.half_width;
    const double* src = bank.kernel_ptr(bin);
    k.coeffs.assign(src, src + bank.taps());
    return k;
}

void save_bank(const RecursiveBankSet& set, const std::string& path) {
    std::vector<uint8_t> buf;
    buf.insert(buf.end(), kBankMagic, kBankMagic + 4);
    detail::put_u32(buf, kBankVersion);
    detail::put_u32(buf, static_cast<uint32_t>(set.half_width));
    detail::put_u32(buf, set.banks.empty() ? 0u : static_cast<uint32_t>(set.banks[0].bin_count));
    detail::put_u32(buf, static_cast<uint32_t>(set.banks.size()));
    detail::put_u32(buf, static_cast<uint32_t>(set.n_reuse));
    for (const FilterBank& b : set.banks) {
        detail::put_u32(buf, static_cast<uint32_t>(b.iteration));
        detail::put_f64(buf, b.p_min);
        detail::put_f64(buf, b.p_max);
        for (double a : b.bin_a) detail::put_f64(buf, a);
        for (double p : b.bin_p) detail::put_f64(buf, p);
        for (double c : b.coeffs) detail::put_f64(buf, c);
    }
    detail::put_u64(buf, detail::fnv1a64(buf.data(), buf.size()));
    detail::atomic_write_file(path, buf.data(), buf.size());
}

RecursiveBankSet load_bank(const std::string& path) {
    const std::vector<uint8_t> buf = detail::read_file(path);
    if (buf.size() < 4 + 20 + 8)
        throw format_error("bank file '" + path + "' is too small (" +
                           std::to_string(buf.size()) + " bytes)");
    if (std::memcmp(buf.data(), kBankMagic, 4) != 0)
        throw format_error("bank file '" + path + "' has wrong magic string");
    const uint64_t stored = [&] {
        detail::ByteReader tail(buf.data() + buf.size() - 8, 8);
        return tail.read_u64("checksum");
    }();
    const uint64_t actual = detail::fnv1a64(buf.data(), buf.size() - 8);
    if (stored != actual)
        throw format_error("bank file '" + path + "' failed its checksum");

    detail::ByteReader r(buf.data() + 4, buf.size() - 4 - 8);
    const uint32_t version = r.read_u32("version");
    if (version != kBankVersion)
        throw format_error("bank file '" + path + "' has unsupported version " +
                           std::to_string(version));
    RecursiveBankSet set;
    set.half_width = static_cast<int>(r.read_u32("half-width"));
    const uint32_t bins = r.read_u32("bin count");
    const uint32_t bank_count = r.read_u32("bank count");
    set.n_reuse = static_cast<int>(r.read_u32("reuse index"));
    if (set.half_width < 1 || set.half_width > 64 || bins < 2 || bank_count == 0 ||
        bank_count > 64)
        throw format_error("bank file '" + path + "' has an implausible header");
    const int k = 2 * set.half_width + 1;
    for (uint32_t bi = 0; bi < bank_count; ++bi) {
        FilterBank b;
        b.half_width = set.half_width;
        b.bin_count = static_cast<int>(bins);
        b.iteration = static_cast<int>(r.read_u32("bank iteration"));
        b.p_min = r.read_f64("bank p_min");
        b.p_max = r.read_f64("bank p_max");
        b.bin_a.resize(bins);
        b.bin_p.resize(bins);
        b.coeffs.resize(static_cast<size_t>(bins) * k * k);
        for (auto& v : b.bin_a) v = r.read_f64("bin parameter");
        for (auto& v : b.bin_p) v = r.read_f64("bin VRP");
        for (auto& v : b.coeffs) v = r.read_f64("kernel coefficients");
        set.banks.push_back(std::move(b));
    }
    if (r.remaining() != 0)
        throw format_error("bank file '" + path + "' has " + std::to_string(r.remaining()) +
                           " unexpected trailing bytes");
    return set;
}

void require_bank_half_width(const RecursiveBankSet& set, int half_width) {
    if (set.half_width != half_width)
        throw validation_error("bank was built for kernel half-width " +
                               std::to_string(set.half_width) + ", but half-width " +
                               std::to_string(half_width) + " was requested");
}

void dump_bank(const RecursiveBankSet& set, std::ostream& out) {
    out << "half_width=" << set.half_width << " kernel=" << 2 * set.half_width + 1 << 'x'
        << 2 * set.half_width + 1 << " banks=" << set.banks.size() << " reuse_from="
        << set.n_reuse << '\n';
    char line[96];
    for (const FilterBank& b : set.banks) {
        std::snprintf(line, sizeof line, "bank iteration=%d p_min=%.17g p_max=%.17g bins=%d\n",
                      b.iteration, b.p_min, b.p_max, b.bin_count);
        out << line;
        for (int i = 0; i < b.bin_count; ++i) {
            std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", i, b.bin_target_p(i),
                          b.bin_a[i]);
            out << line;
        }
    }
}

} // namespace svr
