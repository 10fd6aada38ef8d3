// SPDX-License-Identifier: Apache-2.0
#include "svr/rasterio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>

#include "svr/detail/bytes.hpp"

namespace svr {

namespace {

constexpr size_t kFrawHeaderBytes = 32;
constexpr int kMaxRasterDim = 1 << 24;

void check_dims_or_format(long w, long h, const std::string& path) {
    if (w <= 0 || h <= 0 || w > kMaxRasterDim || h > kMaxRasterDim)
        throw format_error("'" + path + "' declares invalid dimensions " + std::to_string(w) +
                           "x" + std::to_string(h));
}

long round_half_away(double v) {
    return static_cast<long>(v < 0.0 ? std::ceil(v - 0.5) : std::floor(v + 0.5));
}

} // namespace

void write_fraw(const Raster& r, const std::string& path, FrawValueKind kind) {
    char header[kFrawHeaderBytes];
    std::memset(header, ' ', sizeof header);
    const int n = std::snprintf(header, sizeof header, "FRAW 1 %d %d %s", r.width, r.height,
                                kind == FrawValueKind::f32 ? "f32" : "f64");
    if (n < 0 || static_cast<size_t>(n) >= sizeof header)
        throw io_error("raster dimensions too large for the FRAW header");
    header[n] = ' '; // snprintf wrote a terminator; restore padding
    header[kFrawHeaderBytes - 1] = '\n';

    std::vector<uint8_t> buf;
    buf.reserve(kFrawHeaderBytes + r.size() * (kind == FrawValueKind::f32 ? 4 : 8));
    buf.insert(buf.end(), header, header + kFrawHeaderBytes);
    if (kind == FrawValueKind::f32)
        for (double v : r.values) detail::put_f32(buf, static_cast<float>(v));
    else
        for (double v : r.values) detail::put_f64(buf, v);
    detail::atomic_write_file(path, buf.data(), buf.size());
}

Raster read_fraw(const std::string& path) {
    const std::vector<uint8_t> buf = detail::read_file(path);
    if (buf.size() < kFrawHeaderBytes)
        throw format_error("'" + path + "' is too small for a FRAW header: " +
                           std::to_string(buf.size()) + " of " +
                           std::to_string(kFrawHeaderBytes) + " bytes");
    if (std::memcmp(buf.data(), "FRAW ", 5) != 0)
        throw format_error("'" + path + "' has wrong magic string (not a FRAW file)");
    if (buf[kFrawHeaderBytes - 1] != '\n')
        throw format_error("'" + path + "' has a malformed FRAW header line");

    std::string line(reinterpret_cast<const char*>(buf.data()) + 5, kFrawHeaderBytes - 6);
    std::istringstream fields(line);
    long version = 0, w = 0, h = 0;
    std::string kind_str;
    if (!(fields >> version >> w >> h >> kind_str))
        throw format_error("'" + path + "' has an unparsable FRAW header: '" + line + "'");
    if (version != 1)
        throw format_error("'" + path + "' has unsupported FRAW version " +
                           std::to_string(version));
    check_dims_or_format(w, h, path);
    FrawValueKind kind;
    if (kind_str == "f32")
        kind = FrawValueKind::f32;
    else if (kind_str == "f64")
        kind = FrawValueKind::f64;
    else
        throw format_error("'" + path + "' declares unknown value kind '" + kind_str + "'");

    const size_t count = static_cast<size_t>(w) * static_cast<size_t>(h);
    const size_t value_bytes = kind == FrawValueKind::f32 ? 4 : 8;
    const size_t expected = kFrawHeaderBytes + count * value_bytes;
    if (buf.size() != expected)
        throw format_error("'" + path + "' payload is " +
                           std::to_string(buf.size() - kFrawHeaderBytes) + " bytes, expected " +
                           std::to_string(count * value_bytes));

    detail::ByteReader rd(buf.data() + kFrawHeaderBytes, buf.size() - kFrawHeaderBytes);
    Raster r(static_cast<int>(w), static_cast<int>(h));
    for (size_t i = 0; i < count; ++i) {
        const double v = kind == FrawValueKind::f32 ? rd.read_f32("payload") : rd.read_f64("payload");
        if (!std::isfinite(v))
            throw validation_error("'" + path + "' contains a non-finite sample at index " +
                                   std::to_string(i));
        r.values[i] = v;
    }
    return r;
}

namespace {

// PNM header tokens separated by whitespace; '#' starts a comment to end of line.
class PnmTokenizer {
public:
    PnmTokenizer(const uint8_t* data, size_t size, std::string path)
        : data_(data), size_(size), path_(std::move(path)) {}

    std::string next_token() {
        skip_space_and_comments();
        if (pos_ >= size_)
            throw format_error("'" + path_ + "': unexpected end of PGM header");
        std::string tok;
        while (pos_ < size_ && !std::isspace(data_[pos_])) tok.push_back(static_cast<char>(data_[pos_++]));
        return tok;
    }

    long next_int(const char* what) {
        const std::string tok = next_token();
        try {
            size_t used = 0;
            const long v = std::stol(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw format_error("'" + path_ + "': expected integer for " + what + ", got '" + tok +
                               "'");
        }
    }

    /// Consumes exactly one whitespace byte (the separator before binary data).
    size_t binary_payload_offset() {
        if (pos_ >= size_ || !std::isspace(data_[pos_]))
            throw format_error("'" + path_ + "': missing whitespace before PGM payload");
        return pos_ + 1;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < size_) {
            if (std::isspace(data_[pos_])) {
                ++pos_;
            } else if (data_[pos_] == '#') {
                while (pos_ < size_ && data_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
    std::string path_;
};

} // namespace

void write_pgm(const Raster& r, const std::string& path, int maxval, PgmScaling scaling) {
    if (maxval < 1 || maxval > 65535)
        throw std::invalid_argument("PGM maxval must lie in [1, 65535], got " +
                                    std::to_string(maxval));
    double lo = 0.0, scale = 1.0;
    if (scaling == PgmScaling::minmax) {
        const auto [mn, mx] = std::minmax_element(r.values.begin(), r.values.end());
        lo = *mn;
        scale = (*mx > *mn) ? maxval / (*mx - *mn) : 0.0;
    }
    std::vector<uint8_t> buf;
    char header[64];
    const int n = std::snprintf(header, sizeof header, "P5\n%d %d\n%d\n", r.width, r.height, maxval);
    buf.insert(buf.end(), header, header + n);
    for (double v : r.values) {
        const double mapped = scaling == PgmScaling::minmax ? (v - lo) * scale : v;
        const long g = std::clamp(round_half_away(mapped), 0L, static_cast<long>(maxval));
        if (maxval > 255) buf.push_back(static_cast<uint8_t>(g >> 8)); // two-byte samples: MSB first
        buf.push_back(static_cast<uint8_t>(g & 0xff));
    }
    detail::atomic_write_file(path, buf.data(), buf.size());
}

Raster read_pgm(const std::string& path) {
    const std::vector<uint8_t> buf = detail::read_file(path);
    if (buf.size() < 2)
        throw format_error("'" + path + "' is too small to be a PGM file");
    const bool ascii = buf[0] == 'P' && buf[1] == '2';
    const bool binary = buf[0] == 'P' && buf[1] == '5';
    if (!ascii && !binary) {
        if (buf[0] == 'P' && buf[1] >= '1' && buf[1] <= '7')
            throw format_error("'" + path + "' is a P" + std::string(1, static_cast<char>(buf[1])) +
                               " PNM file; only P2/P5 grayscale is supported");
        throw format_error("'" + path + "' has wrong magic string (not a PGM file)");
    }
    PnmTokenizer tok(buf.data() + 2, buf.size() - 2, path);
    const long w = tok.next_int("width");
    const long h = tok.next_int("height");
    const long maxval = tok.next_int("maxval");
    check_dims_or_format(w, h, path);
    if (maxval < 1 || maxval > 65535)
        throw format_error("'" + path + "' declares unsupported maxval " + std::to_string(maxval));

    Raster r(static_cast<int>(w), static_cast<int>(h));
    const size_t count = r.size();
    if (ascii) {
        for (size_t i = 0; i < count; ++i) {
            const long v = tok.next_int("sample");
            if (v < 0 || v > maxval)
                throw format_error("'" + path + "' sample " + std::to_string(i) +
                                   " out of range: " + std::to_string(v));
            r.values[i] = static_cast<double>(v);
        }
    } else {
        const size_t offset = 2 + tok.binary_payload_offset();
        const size_t value_bytes = maxval > 255 ? 2 : 1;
        if (buf.size() - offset < count * value_bytes)
            throw format_error("'" + path + "' payload is " + std::to_string(buf.size() - offset) +
                               " bytes, expected " + std::to_string(count * value_bytes));
        const uint8_t* p = buf.data() + offset;
        for (size_t i = 0; i < count; ++i) {
            long v;
            if (value_bytes == 2) {
                v = (static_cast<long>(p[0]) << 8) | p[1];
                p += 2;
            } else {
                v = *p++;
            }
            r.values[i] = static_cast<double>(v);
        }
    }
    return r;
}

namespace {

bool has_pgm_extension(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return false;
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(c));
    return ext == "pgm";
}

} // namespace

Raster read_raster_auto(const std::string& path) {
    return has_pgm_extension(path) ? read_pgm(path) : read_fraw(path);
}

void write_raster_auto(const Raster& r, const std::string& path) {
    if (has_pgm_extension(path))
        write_pgm(r, path, 255, PgmScaling::clamp);
    else
        write_fraw(r, path);
}

} // namespace svr
