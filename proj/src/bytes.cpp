// SPDX-License-Identifier: Apache-2.0
#include "svr/detail/bytes.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace svr::detail {

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open '" + path + "' for reading");
    in.seekg(0, std::ios::end);
    const auto size = static_cast<size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<uint8_t> buf(size);
    if (size > 0) in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(size));
    if (!in)
        throw io_error("short read from '" + path + "'");
    return buf;
}

void atomic_write_file(const std::string& path, const void* data, size_t size) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot open '" + tmp.string() + "' for writing");
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        out.flush();
        if (!out)
            throw io_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw io_error("cannot move temporary file into place at '" + path + "'");
    }
}

} // namespace svr::detail
