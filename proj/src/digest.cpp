#include "nnids/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace nnids {

namespace {

struct DigestCtx {
    EVP_MD_CTX* ctx;
    DigestCtx() : ctx(EVP_MD_CTX_new()) {
        if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256: failed to initialize digest");
    }
    ~DigestCtx() { EVP_MD_CTX_free(ctx); }

    void update(const void* data, std::size_t size) {
        if (EVP_DigestUpdate(ctx, data, size) != 1)
            throw std::runtime_error("sha256: digest update failed");
    }

    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> raw{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx, raw.data(), &len) != 1)
            throw std::runtime_error("sha256: digest finalize failed");
        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(2 * len);
        for (unsigned int i = 0; i < len; ++i) {
            out.push_back(digits[raw[i] >> 4]);
            out.push_back(digits[raw[i] & 0xf]);
        }
        return out;
    }
};

}  // namespace

std::string sha256_hex(const void* data, std::size_t size) {
    DigestCtx d;
    d.update(data, size);
    return d.hex();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256: cannot open file: " + path);
    DigestCtx d;
    std::vector<char> buffer(1 << 20);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = in.gcount();
        if (got > 0) d.update(buffer.data(), static_cast<std::size_t>(got));
    }
    if (in.bad()) throw std::runtime_error("sha256: read failed: " + path);
    return d.hex();
}

}  // namespace nnids
