// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace svr {

/// File could not be read/written (missing file, short read, rename failure).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File exists but its contents are not a valid instance of the format
/// (bad magic, unsupported version, checksum mismatch, truncated payload).
class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Inputs are individually well-formed but mutually inconsistent
/// (dimension mismatch, bank/metadata mismatch, non-finite samples).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace svr
