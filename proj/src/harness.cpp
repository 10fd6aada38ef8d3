// SPDX-License-Identifier: Apache-2.0
#include "svr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "svr/svfilter.hpp"
#include "svr/vrrmaps.hpp"

namespace svr {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

NoiseRng NoiseRng::for_stream(uint64_t seed, uint64_t sample, uint64_t repeat) {
    uint64_t s = splitmix64(seed ^ 0x5851f42d4c957f2dull);
    s = splitmix64(s ^ sample);
    s = splitmix64(s ^ (repeat * 0xda942042e4dd58b5ull));
    return NoiseRng(s);
}

double NoiseRng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double NoiseRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

long NoiseRng::poisson(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("poisson rate must be > 0, got " + std::to_string(lambda));
    if (lambda < 30.0) {
        // sequential CDF inversion
        const long cutoff = static_cast<long>(lambda + 40.0 * std::sqrt(lambda) + 100.0);
        double p = std::exp(-lambda);
        double cdf = p;
        const double u = uniform();
        long x = 0;
        while (u > cdf && x < cutoff) {
            ++x;
            p *= lambda / x;
            cdf += p;
        }
        return x;
    }
    // transformed rejection with squeeze (PTRS)
    const double b = 0.931 + 2.53 * std::sqrt(lambda);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_lambda = std::log(lambda);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_lambda - lambda - std::lgamma(kf + 1.0))
            return static_cast<long>(kf);
    }
}

Raster gen_gaussian_sample(int dim, double mean, double variance, NoiseRng& rng) {
    if (variance < 0.0)
        throw std::invalid_argument("variance must be >= 0, got " + std::to_string(variance));
    Raster r(dim, dim);
    const double sd = std::sqrt(variance);
    for (double& v : r.values) v = mean + sd * rng.normal();
    return r;
}

Raster gen_poisson_sample(int dim, double lambda, NoiseRng& rng) {
    Raster r(dim, dim);
    for (double& v : r.values) v = static_cast<double>(rng.poisson(lambda));
    return r;
}

namespace {

struct RoiBounds {
    int x0, y0, x1, y1;
    long count() const { return static_cast<long>(x1 - x0) * (y1 - y0); }
};

RoiBounds centered_roi(const Raster& f, int roi_dim) {
    if (roi_dim < 2 || roi_dim > f.width || roi_dim > f.height)
        throw validation_error("ROI " + std::to_string(roi_dim) + " does not fit a " +
                               std::to_string(f.width) + "x" + std::to_string(f.height) +
                               " raster");
    const int x0 = (f.width - roi_dim) / 2;
    const int y0 = (f.height - roi_dim) / 2;
    return {x0, y0, x0 + roi_dim, y0 + roi_dim};
}

} // namespace

double measure_mean(const Raster& f, int roi_dim) {
    const RoiBounds roi = centered_roi(f, roi_dim);
    double sum = 0.0;
    for (int y = roi.y0; y < roi.y1; ++y)
        for (int x = roi.x0; x < roi.x1; ++x) sum += f.at(x, y);
    return sum / static_cast<double>(roi.count());
}

double measure_variance(const Raster& f, int roi_dim) {
    const RoiBounds roi = centered_roi(f, roi_dim);
    const double mean = measure_mean(f, roi_dim);
    double acc = 0.0;
    for (int y = roi.y0; y < roi.y1; ++y)
        for (int x = roi.x0; x < roi.x1; ++x) {
            const double d = f.at(x, y) - mean;
            acc += d * d;
        }
    return acc / static_cast<double>(roi.count() - 1);
}

double monte_carlo_vrp(const Kernel2D& k, long trials, NoiseRng& rng) {
    if (trials < 100)
        throw std::invalid_argument("monte_carlo_vrp needs at least 100 trials");
    const int dim = std::max(32, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(trials)))));
    const int full = dim + 2 * k.half_width;
    Raster field(full, full);
    for (double& v : field.values) v = rng.normal();

    Raster out(full, full);
    const std::vector<int32_t> bins(full, 0);
    conv::RowFn row_fn = conv::active_row_fn();
    for (int y = k.half_width; y < full - k.half_width; ++y)
        row_fn(field.values.data(), full, y, k.half_width, full - k.half_width, k.coeffs.data(),
               static_cast<int>(k.coeffs.size()), k.half_width, bins.data(),
               out.values.data() + static_cast<ptrdiff_t>(y) * full);

    return measure_variance(field, dim) / measure_variance(out, dim);
}

std::string FilterSpec::to_string() const {
    const int k = 2 * half_width + 1;
    return (mode == Mode::fixed ? "fixed:" : "recursive:") + std::to_string(k);
}

FilterSpec parse_filter_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("filter spec must look like 'fixed:7' or 'recursive:3', got '" +
                                    text + "'");
    const std::string mode = text.substr(0, colon);
    FilterSpec spec;
    if (mode == "fixed")
        spec.mode = FilterSpec::Mode::fixed;
    else if (mode == "recursive")
        spec.mode = FilterSpec::Mode::recursive;
    else
        throw std::invalid_argument("unknown filter mode '" + mode + "'");
    int k = 0;
    try {
        k = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad kernel size in filter spec '" + text + "'");
    }
    if (k < 3 || k % 2 == 0)
        throw std::invalid_argument("kernel size must be an odd integer >= 3, got " +
                                    std::to_string(k));
    spec.half_width = (k - 1) / 2;
    return spec;
}

namespace {

/// One filter instance reused across samples; banks are built once.
class FilterRunner {
public:
    explicit FilterRunner(const FilterSpec& spec) : spec_(spec) {
        if (spec.mode == FilterSpec::Mode::fixed)
            fixed_ = build_fixed_bank(spec.half_width, kDefaultBankBins);
        else
            recursive_ = build_recursive_banks(spec.half_width, kDefaultBankBins, false);
    }

    Raster apply(const Raster& f, const VRRMap& q) const {
        if (spec_.mode == FilterSpec::Mode::fixed) return apply_fixed(f, q, fixed_);
        return apply_recursive(f, q, recursive_).output;
    }

private:
    FilterSpec spec_;
    FilterBank fixed_;
    RecursiveBankSet recursive_;
};

} // namespace

Test1Result run_test1(const Test1Config& cfg) {
    if (cfg.n_samples < 1 || cfg.repeats < 1)
        throw std::invalid_argument("test1 needs n_samples >= 1 and repeats >= 1");
    const FilterRunner runner(cfg.filter);
    Test1Result result;
    result.config = cfg;
    result.rows.reserve(cfg.n_samples);
    for (int n = 1; n <= cfg.n_samples; ++n) {
        double v_sum = 0.0, vf_sum = 0.0;
        for (int rep = 1; rep <= cfg.repeats; ++rep) {
            NoiseRng rng = NoiseRng::for_stream(cfg.seed, static_cast<uint64_t>(n),
                                                static_cast<uint64_t>(rep));
            const Raster sample = gen_gaussian_sample(cfg.sample_dim, 0.0, n, rng);
            const double v = measure_variance(sample, cfg.roi_dim);
            const VRRMap q = VRRMap::uniform(cfg.sample_dim, cfg.sample_dim,
                                             std::max(1.0, v / cfg.v_target));
            const Raster filtered = runner.apply(sample, q);
            v_sum += v;
            vf_sum += measure_variance(filtered, cfg.roi_dim);
        }
        Test1Row row;
        row.sample_index = n;
        row.v_expected = n;
        row.v_measured_mean = v_sum / cfg.repeats;
        row.v_filtered_mean = vf_sum / cfg.repeats;
        row.v_target = cfg.v_target;
        result.rows.push_back(row);
    }
    return result;
}

Test2Result run_test2(const Test2Config& cfg) {
    if (cfg.n_samples < 1 || cfg.repeats < 1)
        throw std::invalid_argument("test2 needs n_samples >= 1 and repeats >= 1");
    if (!(cfg.lambda_min > 0.0) || !(cfg.lambda_max >= cfg.lambda_min))
        throw std::invalid_argument("test2 needs 0 < lambda_min <= lambda_max");
    const FilterRunner runner(cfg.filter);
    const double u_t = cfg.resolved_u_target();
    Test2Result result;
    result.config = cfg;
    result.rows.reserve(cfg.n_samples);

    Raster log_buf(cfg.sample_dim, cfg.sample_dim);
    for (int k = 1; k <= cfg.n_samples; ++k) {
        const double lambda =
            cfg.n_samples == 1
                ? cfg.lambda_min
                : cfg.lambda_min + (cfg.lambda_max - cfg.lambda_min) * (k - 1) / (cfg.n_samples - 1);
        // ratio map from expected counts, uniform across the sample
        const VRRMap q =
            vrr_from_counts(Raster(cfg.sample_dim, cfg.sample_dim, lambda), u_t);

        double u_meas_sum = 0.0, u_filt_sum = 0.0, m_pre_sum = 0.0, m_post_sum = 0.0;
        for (int rep = 1; rep <= cfg.repeats; ++rep) {
            NoiseRng rng = NoiseRng::for_stream(cfg.seed, static_cast<uint64_t>(k),
                                                static_cast<uint64_t>(rep));
            const Raster counts = gen_poisson_sample(cfg.sample_dim, lambda, rng);

            // raw counts can be zero at the low end; floor at one count for the log
            for (size_t i = 0; i < counts.size(); ++i)
                log_buf.values[i] = std::log(std::max(counts.values[i], 1.0));
            u_meas_sum += measure_variance(log_buf, cfg.roi_dim);

            const Raster filtered = runner.apply(counts, q);
            for (size_t i = 0; i < filtered.size(); ++i)
                log_buf.values[i] = std::log(std::max(filtered.values[i], 1e-6));
            u_filt_sum += measure_variance(log_buf, cfg.roi_dim);

            m_pre_sum += measure_mean(counts, cfg.roi_dim);
            m_post_sum += measure_mean(filtered, cfg.roi_dim);
        }
        Test2Row row;
        row.sample_index = k;
        row.lambda = lambda;
        row.u_expected = 1.0 / lambda;
        row.u_measured = u_meas_sum / cfg.repeats;
        row.u_filtered = u_filt_sum / cfg.repeats;
        row.u_target = u_t;
        row.prelog_mean_unfiltered = m_pre_sum / cfg.repeats;
        row.prelog_mean_filtered = m_post_sum / cfg.repeats;
        result.rows.push_back(row);
    }
    return result;
}

TablesResult emit_tables(const std::vector<int>& half_widths, int iterations) {
    if (half_widths.empty() || iterations < 1)
        throw std::invalid_argument("tables need at least one kernel size and one iteration");
    TablesResult t;
    t.half_widths = half_widths;
    t.iterations = iterations;
    t.p_max.resize(iterations);
    t.r_max.resize(iterations);
    for (int m = 1; m <= iterations; ++m) {
        for (int hw : half_widths) {
            t.p_max[m - 1].push_back(p_max_at_iteration(m - 1, hw));
            t.r_max[m - 1].push_back(r_max_at_iteration(m - 1, hw));
        }
    }
    return t;
}

namespace {

void append_common_meta(std::ostringstream& out, uint64_t seed) {
    out << "# tool=" << kToolName << ' ' << kToolVersion << '\n';
    out << "# rng=" << NoiseRng::kAlgorithmId << '\n';
    out << "# seed=" << seed << '\n';
}

} // namespace

std::string test1_to_csv(const Test1Result& result) {
    const Test1Config& c = result.config;
    std::ostringstream out;
    out << "# test=test1\n";
    append_common_meta(out, c.seed);
    out << "# filter=" << c.filter.to_string() << '\n';
    out << "# n_samples=" << c.n_samples << '\n';
    out << "# sample_dim=" << c.sample_dim << '\n';
    out << "# roi_dim=" << c.roi_dim << '\n';
    out << "# repeats=" << c.repeats << '\n';
    out << "# v_target=" << format_double(c.v_target) << '\n';
    out << "sample_index,v_expected,v_measured_mean,v_filtered_mean,v_target\n";
    for (const Test1Row& r : result.rows)
        out << r.sample_index << ',' << format_double(r.v_expected) << ','
            << format_double(r.v_measured_mean) << ',' << format_double(r.v_filtered_mean) << ','
            << format_double(r.v_target) << '\n';
    return out.str();
}

std::string test2_to_csv(const Test2Result& result) {
    const Test2Config& c = result.config;
    std::ostringstream out;
    out << "# test=test2\n";
    append_common_meta(out, c.seed);
    out << "# filter=" << c.filter.to_string() << '\n';
    out << "# n_samples=" << c.n_samples << '\n';
    out << "# sample_dim=" << c.sample_dim << '\n';
    out << "# roi_dim=" << c.roi_dim << '\n';
    out << "# repeats=" << c.repeats << '\n';
    out << "# lambda_min=" << format_double(c.lambda_min) << '\n';
    out << "# lambda_max=" << format_double(c.lambda_max) << '\n';
    out << "# u_target=" << format_double(c.resolved_u_target()) << '\n';
    out << "k,lambda,u_expected,u_measured,u_filtered,u_target\n";
    for (const Test2Row& r : result.rows)
        out << r.sample_index << ',' << format_double(r.lambda) << ','
            << format_double(r.u_expected) << ',' << format_double(r.u_measured) << ','
            << format_double(r.u_filtered) << ',' << format_double(r.u_target) << '\n';
    return out.str();
}

std::string tables_to_csv(const TablesResult& result) {
    std::ostringstream out;
    out << "# tool=" << kToolName << ' ' << kToolVersion << '\n';
    out << "# table=max_and_incremental_variance_reduction\n";
    out << "iteration";
    for (int hw : result.half_widths) {
        const int k = 2 * hw + 1;
        out << ",pmax_" << k << 'x' << k;
    }
    for (int hw : result.half_widths) {
        const int k = 2 * hw + 1;
        out << ",rmax_" << k << 'x' << k;
    }
    out << '\n';
    for (int m = 1; m <= result.iterations; ++m) {
        out << m;
        for (double v : result.p_max[m - 1]) out << ',' << format_double(v);
        for (double v : result.r_max[m - 1]) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

} // namespace svr
