#pragma once

#include <string>

namespace nnids {

/// SHA-256 of a byte buffer, lowercase hex.
std::string sha256_hex(const void* data, std::size_t size);

/// SHA-256 of a file's contents, lowercase hex. Throws on I/O failure.
std::string sha256_file(const std::string& path);

}  // namespace nnids
