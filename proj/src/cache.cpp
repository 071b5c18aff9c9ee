#include "nnids/cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nnids {

namespace {

constexpr char kMagic[6] = {'N', 'N', 'I', 'D', 'S', '1'};

static_assert(std::endian::native == std::endian::little,
              "cache I/O assumes a little-endian host");

void put_u64(std::ofstream& out, std::uint64_t value) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

std::uint64_t get_u64(std::ifstream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return value;
}

}  // namespace

void write_cache(const std::string& path, const float* features, std::size_t rows,
                 std::size_t columns, const std::uint8_t* labels) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open cache file for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    put_u64(out, rows);
    put_u64(out, columns);
    out.write(reinterpret_cast<const char*>(features),
              static_cast<std::streamsize>(rows * columns * sizeof(float)));
    out.write(reinterpret_cast<const char*>(labels), static_cast<std::streamsize>(rows));
    if (!out) throw std::runtime_error("write failed for cache file: " + path);
}

CachedMatrix read_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open cache file: " + path);

    char magic[6];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("unrecognized cache format: " + path);

    CachedMatrix m;
    const std::uint64_t rows = get_u64(in);
    const std::uint64_t columns = get_u64(in);
    if (!in) throw std::runtime_error("unrecognized cache format: " + path);
    m.columns = static_cast<std::size_t>(columns);
    m.features.resize(static_cast<std::size_t>(rows * columns));
    m.labels.resize(static_cast<std::size_t>(rows));
    in.read(reinterpret_cast<char*>(m.features.data()),
            static_cast<std::streamsize>(m.features.size() * sizeof(float)));
    in.read(reinterpret_cast<char*>(m.labels.data()), static_cast<std::streamsize>(rows));
    if (!in || in.gcount() != static_cast<std::streamsize>(rows))
        throw std::runtime_error("truncated cache file: " + path);
    in.peek();
    if (!in.eof()) throw std::runtime_error("trailing bytes in cache file: " + path);
    return m;
}

}  // namespace nnids
