// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface: bank building and inspection, table regeneration,
// space-variant filtering, ratio-map construction, the synthetic noise
// experiments, and the edge-preserving denoise pipeline.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svr/detail/bytes.hpp"
#include "svr/filterbank.hpp"
#include "svr/harness.hpp"
#include "svr/pipeline.hpp"
#include "svr/rasterio.hpp"
#include "svr/svfilter.hpp"
#include "svr/vrrmaps.hpp"

namespace {

using namespace svr;

/// Resolved-configuration echo written next to each output file.
class MetaSidecar {
public:
    explicit MetaSidecar(const std::string& subcommand) {
        add("tool", std::string(kToolName) + " " + kToolVersion);
        add("subcommand", subcommand);
        add("simd", conv::impl_name(conv::active_impl()));
    }

    void add(const std::string& key, const std::string& value) {
        lines_ += key + "=" + value + "\n";
    }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "1" : "0")); }
    void add(const std::string& key, double value) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        add(key, std::string(buf));
    }
    template <typename T>
    void add(const std::string& key, T value)
        requires std::is_integral_v<T>
    {
        add(key, std::to_string(value));
    }

    void write_for(const std::string& out_path) const {
        detail::atomic_write_file(out_path + ".meta", lines_.data(), lines_.size());
    }

private:
    std::string lines_;
};

void write_text_file(const std::string& path, const std::string& text) {
    detail::atomic_write_file(path, text.data(), text.size());
}

std::string report_to_csv(const FilterReport& report) {
    std::ostringstream out;
    out << "# tool=" << kToolName << ' ' << kToolVersion << '\n';
    out << "# iterations_used=" << report.iterations_used << '\n';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", report.residual_q_max);
    out << "# residual_q_max=" << buf << '\n';
    out << "# max_iter_reached=" << (report.max_iter_reached ? 1 : 0) << '\n';
    out << "iteration,pixels_active\n";
    for (size_t i = 0; i < report.pixels_active_per_iteration.size(); ++i)
        out << i << ',' << report.pixels_active_per_iteration[i] << '\n';
    return out.str();
}

int run(int argc, char** argv) {
    CLI::App app{"space-variant variance-reduction filtering"};
    app.require_subcommand(1);

    const CLI::Validator filter_spec_validator(
        [](std::string& text) -> std::string {
            try {
                parse_filter_spec(text);
                return {};
            } catch (const std::exception& e) {
                return std::string(e.what());
            }
        },
        "FILTERSPEC");

    // ---- bank build/dump ---------------------------------------------------
    auto* bank_cmd = app.add_subcommand("bank", "precompute or inspect kernel banks");
    bank_cmd->require_subcommand(1);

    struct {
        int half_width = 1;
        std::string mode = "recursive";
        int bins = kDefaultBankBins;
        bool closed_form = false;
        std::string out;
    } bank_build;
    auto* build_cmd = bank_cmd->add_subcommand("build", "build a bank file");
    build_cmd->add_option("--L", bank_build.half_width, "kernel half-width")->required();
    build_cmd->add_option("--mode", bank_build.mode, "fixed|recursive")
        ->check(CLI::IsMember({"fixed", "recursive"}))
        ->required();
    build_cmd->add_option("--bins", bank_build.bins, "bins per bank");
    build_cmd->add_flag("--closed-form", bank_build.closed_form,
                        "use the 3x3 closed-form inversion (recursive mode, --L 1 only)");
    build_cmd->add_option("--out", bank_build.out, "output bank file")->required();
    build_cmd->callback([&] {
        RecursiveBankSet set;
        if (bank_build.mode == "fixed") {
            if (bank_build.closed_form)
                throw validation_error("--closed-form applies to recursive banks only");
            set.half_width = bank_build.half_width;
            set.n_reuse = 0;
            set.banks.push_back(build_fixed_bank(bank_build.half_width, bank_build.bins));
        } else {
            set = build_recursive_banks(bank_build.half_width, bank_build.bins,
                                        bank_build.closed_form);
        }
        save_bank(set, bank_build.out);
        MetaSidecar meta("bank build");
        meta.add("L", bank_build.half_width);
        meta.add("mode", bank_build.mode);
        meta.add("bins", bank_build.bins);
        meta.add("closed_form", bank_build.closed_form);
        meta.add("out", bank_build.out);
        meta.write_for(bank_build.out);
    });

    std::string bank_dump_in;
    auto* dump_cmd = bank_cmd->add_subcommand("dump", "print a bank file as text");
    dump_cmd->add_option("--in", bank_dump_in, "bank file")->required();
    dump_cmd->callback([&] { dump_bank(load_bank(bank_dump_in), std::cout); });

    // ---- tables -------------------------------------------------------------
    struct {
        std::vector<int> half_widths{1, 2, 3};
        int iters = 8;
        std::string out;
    } tables;
    auto* tables_cmd =
        app.add_subcommand("tables", "cumulative/incremental variance-reduction limits per pass");
    tables_cmd->add_option("--L", tables.half_widths, "kernel half-widths (comma separated)")
        ->delimiter(',');
    tables_cmd->add_option("--iters", tables.iters, "number of passes");
    tables_cmd->add_option("--out", tables.out, "output CSV")->required();
    tables_cmd->callback([&] {
        write_text_file(tables.out, tables_to_csv(emit_tables(tables.half_widths, tables.iters)));
        MetaSidecar meta("tables");
        std::string ls;
        for (size_t i = 0; i < tables.half_widths.size(); ++i)
            ls += (i ? "," : "") + std::to_string(tables.half_widths[i]);
        meta.add("L", ls);
        meta.add("iters", tables.iters);
        meta.add("out", tables.out);
        meta.write_for(tables.out);
    });

    // ---- filter -------------------------------------------------------------
    struct {
        std::string in, q, out, report;
        std::string mode = "recursive";
        int half_width = 1;
        double q_min = kDefaultQMin;
        int max_iter = kDefaultMaxIterations;
        bool log_after = false;
    } filter;
    auto* filter_cmd = app.add_subcommand("filter", "apply the space-variant filter to a raster");
    filter_cmd->add_option("--in", filter.in, "input raster (.fraw or .pgm)")->required();
    filter_cmd->add_option("--q", filter.q, "ratio map (FRAW)")->required();
    filter_cmd->add_option("--mode", filter.mode, "fixed|recursive")
        ->check(CLI::IsMember({"fixed", "recursive"}));
    filter_cmd->add_option("--L", filter.half_width, "kernel half-width");
    filter_cmd->add_option("--q-min", filter.q_min, "stop once every residual ratio is below this");
    filter_cmd->add_option("--max-iter", filter.max_iter, "pass limit for the recursive mode");
    filter_cmd->add_flag("--log-after", filter.log_after,
                         "log-transform the output (count-data pipelines filter before the log)");
    filter_cmd->add_option("--out", filter.out, "output raster")->required();
    filter_cmd->add_option("--report", filter.report, "per-pass diagnostics CSV");
    filter_cmd->callback([&] {
        const Raster input = read_raster_auto(filter.in);
        const VRRMap qmap = VRRMap::from_raster(read_fraw(filter.q));
        if (input.width != qmap.width || input.height != qmap.height)
            throw validation_error("filter: shape mismatch, image " + std::to_string(input.width) +
                                   "x" + std::to_string(input.height) + " vs ratio map " +
                                   std::to_string(qmap.width) + "x" + std::to_string(qmap.height));
        Raster output;
        FilterReport report;
        if (filter.mode == "fixed") {
            output = apply_fixed(input, qmap, build_fixed_bank(filter.half_width, kDefaultBankBins));
        } else {
            RecursiveResult r =
                apply_recursive(input, qmap,
                                build_recursive_banks(filter.half_width, kDefaultBankBins, false),
                                filter.q_min, filter.max_iter);
            output = std::move(r.output);
            report = r.report;
        }
        if (filter.log_after)
            for (double& v : output.values) v = std::log(std::max(v, 1e-6));
        write_raster_auto(output, filter.out);
        if (!filter.report.empty()) write_text_file(filter.report, report_to_csv(report));
        MetaSidecar meta("filter");
        meta.add("in", filter.in);
        meta.add("q", filter.q);
        meta.add("mode", filter.mode);
        meta.add("L", filter.half_width);
        meta.add("q_min", filter.q_min);
        meta.add("max_iter", filter.max_iter);
        meta.add("log_after", filter.log_after);
        meta.add("clamped_pixels", qmap.clamped_count);
        meta.add("iterations_used", report.iterations_used);
        meta.add("max_iter_reached", report.max_iter_reached);
        meta.add("out", filter.out);
        meta.write_for(filter.out);
    });

    // ---- vrr ----------------------------------------------------------------
    auto* vrr_cmd = app.add_subcommand("vrr", "build variance-reduction-ratio maps");
    vrr_cmd->require_subcommand(1);

    struct {
        std::string in, out;
        double target = 1.0;
    } vrr_var;
    auto* vrr_var_cmd = vrr_cmd->add_subcommand("variance", "ratio map from a variance raster");
    vrr_var_cmd->add_option("--in", vrr_var.in, "per-pixel variance raster (FRAW)")->required();
    vrr_var_cmd->add_option("--target", vrr_var.target, "target variance")->required();
    vrr_var_cmd->add_option("--out", vrr_var.out, "output ratio map (FRAW)")->required();
    vrr_var_cmd->callback([&] {
        const VRRMap q = vrr_from_variance(read_fraw(vrr_var.in), vrr_var.target);
        write_fraw(q.to_raster(), vrr_var.out);
        MetaSidecar meta("vrr variance");
        meta.add("in", vrr_var.in);
        meta.add("target", vrr_var.target);
        meta.add("clamped_pixels", q.clamped_count);
        meta.add("out", vrr_var.out);
        meta.write_for(vrr_var.out);
    });

    struct {
        std::string in, out;
        double target = 0.001;
    } vrr_counts_opt;
    auto* vrr_counts_cmd =
        vrr_cmd->add_subcommand("counts", "ratio map from pre-log counts (after-log variance 1/count)");
    vrr_counts_cmd->add_option("--in", vrr_counts_opt.in, "count raster (FRAW)")->required();
    vrr_counts_cmd->add_option("--target", vrr_counts_opt.target, "target after-log variance")
        ->required();
    vrr_counts_cmd->add_option("--out", vrr_counts_opt.out, "output ratio map (FRAW)")->required();
    vrr_counts_cmd->callback([&] {
        const VRRMap q = vrr_from_counts(read_fraw(vrr_counts_opt.in), vrr_counts_opt.target);
        write_fraw(q.to_raster(), vrr_counts_opt.out);
        MetaSidecar meta("vrr counts");
        meta.add("in", vrr_counts_opt.in);
        meta.add("target", vrr_counts_opt.target);
        meta.add("clamped_pixels", q.clamped_count);
        meta.add("out", vrr_counts_opt.out);
        meta.write_for(vrr_counts_opt.out);
    });

    struct {
        std::string in, out;
        std::string method = "grad";
        double v0 = 1.0;
        double strength = 1000.0;
        double q_cap = 1000.0;
        bool presmooth = false;
    } vrr_edge_opt;
    auto* vrr_edge_cmd = vrr_cmd->add_subcommand("edge", "edge-preserving ratio map from gradients");
    vrr_edge_cmd->add_option("--in", vrr_edge_opt.in, "input raster (.fraw or .pgm)")->required();
    vrr_edge_cmd->add_option("--v0", vrr_edge_opt.v0, "input image variance")->required();
    vrr_edge_cmd->add_option("--method", vrr_edge_opt.method, "grad|pm")
        ->check(CLI::IsMember({"grad", "pm"}));
    vrr_edge_cmd->add_option("--strength", vrr_edge_opt.strength, "pm overall multiplier");
    vrr_edge_cmd->add_option("--q-cap", vrr_edge_opt.q_cap, "ratio upper bound");
    vrr_edge_cmd->add_flag("--presmooth", vrr_edge_opt.presmooth,
                           "3x3 box smooth before the gradient");
    vrr_edge_cmd->add_option("--out", vrr_edge_opt.out, "output ratio map (FRAW)")->required();
    vrr_edge_cmd->callback([&] {
        EdgeVrrConfig cfg;
        cfg.v0 = vrr_edge_opt.v0;
        cfg.q_cap = vrr_edge_opt.q_cap;
        cfg.strength = vrr_edge_opt.strength;
        cfg.presmooth = vrr_edge_opt.presmooth;
        const Raster input = read_raster_auto(vrr_edge_opt.in);
        VRRMap q;
        if (vrr_edge_opt.method == "grad") {
            cfg.mode = EdgeVrrMode::gradient;
            q = vrr_edge(input, cfg);
        } else {
            cfg.mode = EdgeVrrMode::perona_malik;
            q = vrr_perona_malik(input, cfg);
        }
        write_fraw(q.to_raster(), vrr_edge_opt.out);
        MetaSidecar meta("vrr edge");
        meta.add("in", vrr_edge_opt.in);
        meta.add("v0", vrr_edge_opt.v0);
        meta.add("method", vrr_edge_opt.method);
        meta.add("strength", vrr_edge_opt.strength);
        meta.add("q_cap", vrr_edge_opt.q_cap);
        meta.add("presmooth", vrr_edge_opt.presmooth);
        meta.add("out", vrr_edge_opt.out);
        meta.write_for(vrr_edge_opt.out);
    });

    // ---- test1 / test2 -------------------------------------------------------
    struct {
        std::string filter_text;
        int repeats = 20; // desk scale; pass 100 for the full-size run
        uint64_t seed = 1;
        int samples = 200;
        std::string out;
    } t1;
    auto* test1_cmd = app.add_subcommand("test1", "Gaussian noise-ramp experiment");
    test1_cmd->add_option("--filter", t1.filter_text, "fixed:K or recursive:K")
        ->required()
        ->check(filter_spec_validator);
    test1_cmd->add_option("--repeats", t1.repeats, "repeats per sample");
    test1_cmd->add_option("--samples", t1.samples, "number of variance steps");
    test1_cmd->add_option("--seed", t1.seed, "run seed");
    test1_cmd->add_option("--out", t1.out, "output CSV")->required();
    test1_cmd->callback([&] {
        Test1Config cfg;
        cfg.filter = parse_filter_spec(t1.filter_text);
        cfg.repeats = t1.repeats;
        cfg.n_samples = t1.samples;
        cfg.seed = t1.seed;
        write_text_file(t1.out, test1_to_csv(run_test1(cfg)));
        MetaSidecar meta("test1");
        meta.add("filter", cfg.filter.to_string());
        meta.add("repeats", cfg.repeats);
        meta.add("samples", cfg.n_samples);
        meta.add("sample_dim", cfg.sample_dim);
        meta.add("roi_dim", cfg.roi_dim);
        meta.add("v_target", cfg.v_target);
        meta.add("seed", cfg.seed);
        meta.add("rng", NoiseRng::kAlgorithmId);
        meta.add("out", t1.out);
        meta.write_for(t1.out);
    });

    struct {
        std::string filter_text;
        uint64_t seed = 1;
        int repeats = 10;
        std::string out;
    } t2;
    auto* test2_cmd = app.add_subcommand("test2", "Poisson count-ramp experiment");
    test2_cmd->add_option("--filter", t2.filter_text, "fixed:K or recursive:K")
        ->required()
        ->check(filter_spec_validator);
    test2_cmd->add_option("--seed", t2.seed, "run seed");
    test2_cmd->add_option("--repeats", t2.repeats, "repeats per sample");
    test2_cmd->add_option("--out", t2.out, "output CSV")->required();
    test2_cmd->callback([&] {
        Test2Config cfg;
        cfg.filter = parse_filter_spec(t2.filter_text);
        cfg.seed = t2.seed;
        cfg.repeats = t2.repeats;
        write_text_file(t2.out, test2_to_csv(run_test2(cfg)));
        MetaSidecar meta("test2");
        meta.add("filter", cfg.filter.to_string());
        meta.add("repeats", cfg.repeats);
        meta.add("samples", cfg.n_samples);
        meta.add("sample_dim", cfg.sample_dim);
        meta.add("roi_dim", cfg.roi_dim);
        meta.add("lambda_min", cfg.lambda_min);
        meta.add("lambda_max", cfg.lambda_max);
        meta.add("u_target", cfg.resolved_u_target());
        meta.add("seed", cfg.seed);
        meta.add("rng", NoiseRng::kAlgorithmId);
        meta.add("out", t2.out);
        meta.write_for(t2.out);
    });

    // ---- denoise --------------------------------------------------------------
    struct {
        std::string in, out;
        std::string method = "grad";
        double v0 = 1.0;
        double blend_alpha = 0.0;
        double strength = 1000.0;
        double q_cap = 1000.0;
        bool presmooth = true;
    } dn;
    auto* denoise_cmd =
        app.add_subcommand("denoise", "edge-preserving denoise (ratio map + filter + blend)");
    denoise_cmd->add_option("--in", dn.in, "input raster (.fraw or .pgm)")->required();
    denoise_cmd->add_option("--v0", dn.v0, "input image variance")->required();
    denoise_cmd->add_option("--method", dn.method, "grad|pm")
        ->check(CLI::IsMember({"grad", "pm"}));
    denoise_cmd->add_option("--blend", dn.blend_alpha, "weight of the original in the output");
    denoise_cmd->add_option("--strength", dn.strength, "pm overall multiplier");
    denoise_cmd->add_option("--q-cap", dn.q_cap, "ratio upper bound");
    denoise_cmd->add_flag("--presmooth,!--no-presmooth", dn.presmooth,
                          "3x3 box smooth before the gradient (default on)");
    denoise_cmd->add_option("--out", dn.out, "output raster")->required();
    denoise_cmd->callback([&] {
        DenoisePipelineConfig cfg;
        cfg.v0 = dn.v0;
        cfg.mode = dn.method == "grad" ? EdgeVrrMode::gradient : EdgeVrrMode::perona_malik;
        cfg.blend_alpha = dn.blend_alpha;
        cfg.strength = dn.strength;
        cfg.q_cap = dn.q_cap;
        cfg.presmooth = dn.presmooth;
        const DenoiseOutcome outcome = denoise_image(read_raster_auto(dn.in), cfg);
        write_raster_auto(outcome.output, dn.out);
        MetaSidecar meta("denoise");
        meta.add("in", dn.in);
        meta.add("v0", dn.v0);
        meta.add("method", dn.method);
        meta.add("blend", dn.blend_alpha);
        meta.add("strength", dn.strength);
        meta.add("q_cap", dn.q_cap);
        meta.add("presmooth", dn.presmooth);
        meta.add("iterations_used", outcome.report.iterations_used);
        meta.add("max_iter_reached", outcome.report.max_iter_reached);
        meta.add("out", dn.out);
        meta.write_for(dn.out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage error
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const svr::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const svr::format_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const svr::validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
