#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace repute {

using Bytes = std::vector<unsigned char>;

inline Bytes sha256(const Bytes& data) {
    Bytes out(32);
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != 32) {
        throw std::runtime_error("sha256: digest failed");
    }
    return out;
}

inline Bytes sha256(const std::string& s) {
    return sha256(Bytes(s.begin(), s.end()));
}

inline std::string bytes_to_hex(const Bytes& b) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * b.size());
    for (unsigned char c : b) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

inline void append_bytes(Bytes& out, const Bytes& b) {
    out.insert(out.end(), b.begin(), b.end());
}

inline void append_bytes(Bytes& out, const std::string& s) {
    out.insert(out.end(), s.begin(), s.end());
}

// first 8 bytes of sha256, big-endian; used to key deterministic substreams
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& tag) {
    Bytes msg;
    for (int i = 7; i >= 0; --i) {
        msg.push_back(static_cast<unsigned char>((master >> (8 * i)) & 0xff));
    }
    append_bytes(msg, tag);
    Bytes h = sha256(msg);
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) {
        out = (out << 8) | h[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace repute
