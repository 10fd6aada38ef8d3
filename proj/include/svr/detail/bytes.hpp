// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "svr/errors.hpp"

namespace svr::detail {

// Little-endian byte-level serialization, independent of host endianness.

inline void put_u32(std::vector<uint8_t>& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<uint8_t>& buf, uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::vector<uint8_t>& buf, double v) {
    put_u64(buf, std::bit_cast<uint64_t>(v));
}

inline void put_f32(std::vector<uint8_t>& buf, float v) {
    put_u32(buf, std::bit_cast<uint32_t>(v));
}

/// Cursor over a byte buffer; throws format_error on overrun with counts.
class ByteReader {
public:
    ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

    size_t remaining() const { return size_ - pos_; }
    size_t position() const { return pos_; }

    void need(size_t n, const char* what) const {
        if (remaining() < n)
            throw format_error(std::string("truncated data while reading ") + what + ": need " +
                               std::to_string(n) + " bytes at offset " + std::to_string(pos_) +
                               ", have " + std::to_string(remaining()));
    }

    void read_bytes(void* out, size_t n, const char* what) {
        need(n, what);
        std::memcpy(out, data_ + pos_, n);
        pos_ += n;
    }

    uint32_t read_u32(const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    uint64_t read_u64(const char* what) {
        need(8, what);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    double read_f64(const char* what) { return std::bit_cast<double>(read_u64(what)); }
    float read_f32(const char* what) { return std::bit_cast<float>(read_u32(what)); }

private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

inline uint64_t fnv1a64(const uint8_t* data, size_t size) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < size; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Reads a whole file; throws io_error if unreadable.
std::vector<uint8_t> read_file(const std::string& path);

/// Writes via a temp file in the same directory, then renames into place.
void atomic_write_file(const std::string& path, const void* data, size_t size);

} // namespace svr::detail
