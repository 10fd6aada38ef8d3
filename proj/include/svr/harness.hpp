// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "svr/kernels.hpp"
#include "svr/raster.hpp"

namespace svr {

inline constexpr const char* kToolName = "svrfilter";
inline constexpr const char* kToolVersion = "1.0.0";

/// Deterministic noise source. The algorithm identifier below names every
/// piece that affects the generated stream so runs can be reproduced
/// bit-exactly from CSV metadata alone.
class NoiseRng {
public:
    static constexpr const char* kAlgorithmId = "mt19937_64/polar-normal/poisson-inv-ptrs";

    explicit NoiseRng(uint64_t seed) : gen_(seed) {}

    /// Independent stream for a (sample, repeat) pair under one run seed.
    static NoiseRng for_stream(uint64_t seed, uint64_t sample, uint64_t repeat);

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal via the Marsaglia polar method.
    double normal();

    /// Poisson sample: CDF inversion below lambda = 30, transformed
    /// rejection (PTRS) above.
    long poisson(double lambda);

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// iid normal samples with the given mean/variance; variance 0 is constant.
Raster gen_gaussian_sample(int dim, double mean, double variance, NoiseRng& rng);

/// iid Poisson(lambda) samples.
Raster gen_poisson_sample(int dim, double lambda, NoiseRng& rng);

/// Unbiased sample variance (divisor count-1) over the centered roi x roi block.
double measure_variance(const Raster& f, int roi_dim);
double measure_mean(const Raster& f, int roi_dim);

/// Empirical variance reduction of a kernel on iid unit-variance noise:
/// generates a field with at least `trials` interior samples, convolves the
/// interior, and returns the input/output variance ratio.
double monte_carlo_vrp(const Kernel2D& k, long trials, NoiseRng& rng);

// --- experiment runners ---------------------------------------------------

struct FilterSpec {
    enum class Mode { fixed, recursive };
    Mode mode = Mode::recursive;
    int half_width = 1;

    std::string to_string() const;
};

/// Parses "fixed:7" / "recursive:5" (the number is the kernel size K).
FilterSpec parse_filter_spec(const std::string& text);

struct Test1Config {
    int n_samples = 200;
    int sample_dim = 128;
    int roi_dim = 100;
    double v_target = 1.0;
    int repeats = 100;
    uint64_t seed = 1;
    FilterSpec filter;
};

struct Test1Row {
    int sample_index = 0;
    double v_expected = 0.0;
    double v_measured_mean = 0.0;
    double v_filtered_mean = 0.0;
    double v_target = 0.0;
};

struct Test1Result {
    Test1Config config;
    std::vector<Test1Row> rows;
};

/// Gaussian noise ramp: sample n has expected variance n; a per-repeat
/// uniform ratio map is derived from the measured variance, the filter is
/// applied, and the filtered variance is averaged over repeats.
Test1Result run_test1(const Test1Config& cfg);

struct Test2Config {
    int n_samples = 100;
    int sample_dim = 128;
    int roi_dim = 100;
    double lambda_min = 10.0;
    double lambda_max = 1000.0;
    double u_target = 0.0; // <= 0 means 1/lambda_max
    int repeats = 10;
    uint64_t seed = 1;
    FilterSpec filter;

    double resolved_u_target() const { return u_target > 0.0 ? u_target : 1.0 / lambda_max; }
};

struct Test2Row {
    int sample_index = 0;
    double lambda = 0.0;
    double u_expected = 0.0;
    double u_measured = 0.0;
    double u_filtered = 0.0;
    double u_target = 0.0;
    // not part of the CSV contract, used by verification code
    double prelog_mean_unfiltered = 0.0;
    double prelog_mean_filtered = 0.0;
};

struct Test2Result {
    Test2Config config;
    std::vector<Test2Row> rows;
};

/// Poisson count ramp: the ratio map comes from the expected counts, the
/// filter runs on pre-log counts, and the after-log variance of the
/// filtered samples is compared to the after-log target.
Test2Result run_test2(const Test2Config& cfg);

struct TablesResult {
    std::vector<int> half_widths;
    int iterations = 8;
    // [iteration][index into half_widths]
    std::vector<std::vector<double>> p_max;
    std::vector<std::vector<double>> r_max;
};

/// Cumulative and incremental maximum variance reduction per pass.
TablesResult emit_tables(const std::vector<int>& half_widths, int iterations);

// --- CSV serialization ('#'-prefixed metadata, then header row, then data) --

std::string test1_to_csv(const Test1Result& result);
std::string test2_to_csv(const Test2Result& result);
std::string tables_to_csv(const TablesResult& result);

} // namespace svr
