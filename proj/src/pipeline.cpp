// SPDX-License-Identifier: Apache-2.0
#include "svr/pipeline.hpp"

namespace svr {

DenoiseOutcome denoise_image(const Raster& input, const DenoisePipelineConfig& cfg) {
    EdgeVrrConfig edge;
    edge.v0 = cfg.v0;
    edge.mode = cfg.mode;
    edge.q_cap = cfg.q_cap;
    edge.strength = cfg.strength;
    edge.presmooth = cfg.presmooth;
    const VRRMap q = cfg.mode == EdgeVrrMode::gradient ? vrr_edge(input, edge)
                                                       : vrr_perona_malik(input, edge);
    const RecursiveBankSet banks = build_recursive_banks(cfg.half_width, kDefaultBankBins, false);
    RecursiveResult filtered = apply_recursive(input, q, banks, cfg.q_min, cfg.max_iter);
    DenoiseOutcome out;
    out.report = filtered.report;
    out.output = cfg.blend_alpha > 0.0 ? blend(input, filtered.output, cfg.blend_alpha)
                                       : std::move(filtered.output);
    return out;
}

} // namespace svr
