// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "svr/raster.hpp"

namespace svr {

enum class FrawValueKind { f32, f64 };

/// "FRAW" interchange format: a single 32-byte ASCII header line
/// ("FRAW 1 <width> <height> <f32|f64>", space padded, terminated by '\n'),
/// then the row-major payload as little-endian IEEE floats regardless of
/// host byte order. Inspectable with any hex viewer.
void write_fraw(const Raster& r, const std::string& path,
                FrawValueKind kind = FrawValueKind::f64);
Raster read_fraw(const std::string& path);

/// How write_pgm maps sample values onto [0, maxval].
enum class PgmScaling {
    minmax, // min -> 0, max -> maxval (constant rasters write 0)
    clamp,  // values taken as already being gray levels; clamp and round
};

/// PGM (P2/P5) for viewing results. Reads return raw gray levels as doubles.
/// Writes emit binary P5, rounding half away from zero; maxval up to 65535
/// (two-byte samples are big-endian per the format).
void write_pgm(const Raster& r, const std::string& path, int maxval = 255,
               PgmScaling scaling = PgmScaling::minmax);
Raster read_pgm(const std::string& path);

/// Dispatch on file extension: ".pgm" uses PGM, anything else FRAW.
Raster read_raster_auto(const std::string& path);
void write_raster_auto(const Raster& r, const std::string& path);

} // namespace svr
