#include "axrec/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace axrec {

// Code paths below assume a little-endian host (x86/ARM64); the on-disk
// formats are defined little-endian.
static_assert(sizeof(float) == 4 && sizeof(double) == 8);

void write_f32(const std::string& path, const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    std::vector<float> buf(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) buf[i] = float(values[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              std::streamsize(buf.size() * sizeof(float)));
    if (!out) throw std::runtime_error("short write: " + path);
}

std::vector<double> read_f32(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open: " + path);
    const auto bytes = std::size_t(in.tellg());
    if (bytes % sizeof(float) != 0)
        throw std::runtime_error("file size not a multiple of 4: " + path);
    in.seekg(0);
    std::vector<float> buf(bytes / sizeof(float));
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(bytes));
    if (!in) throw std::runtime_error("short read: " + path);
    return std::vector<double>(buf.begin(), buf.end());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw std::runtime_error("short write: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) {
    std::error_code ec;
    return std::filesystem::exists(path, ec);
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t hash_file(const std::string& path) {
    const std::string bytes = read_text(path);
    return fnv1a64(bytes.data(), bytes.size());
}

} // namespace axrec
