#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace axrec {

/// Writes doubles as a flat little-endian f32 array, row-major.
void write_f32(const std::string& path, const std::vector<double>& values);
std::vector<double> read_f32(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

bool file_exists(const std::string& path);

/// FNV-1a over bytes; used for config hashes and byte-identity checks.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t hash_file(const std::string& path);

} // namespace axrec
