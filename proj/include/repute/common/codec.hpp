#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "repute/common/bigint.hpp"
#include "repute/common/hash.hpp"

// Canonical byte encoding used for wire messages, hash inputs and the
// append-only store: every field is length-prefixed with eight lowercase hex
// digits, integers are minimal lowercase big-endian hex. The encoding is
// injective on field sequences, so two distinct messages never share bytes.
namespace repute {

struct CodecError : std::runtime_error {
    explicit CodecError(const std::string& what) : std::runtime_error(what) {}
};

inline void put_raw_len(Bytes& out, std::size_t len) {
    static const char digits[] = "0123456789abcdef";
    if (len > 0xffffffffu) {
        throw CodecError("field too long");
    }
    for (int shift = 28; shift >= 0; shift -= 4) {
        out.push_back(static_cast<unsigned char>(digits[(len >> shift) & 0xf]));
    }
}

inline void put_bytes_field(Bytes& out, const Bytes& data) {
    put_raw_len(out, data.size());
    out.insert(out.end(), data.begin(), data.end());
}

inline void put_str(Bytes& out, const std::string& s) {
    put_raw_len(out, s.size());
    out.insert(out.end(), s.begin(), s.end());
}

inline void put_int(Bytes& out, const Int& v) {
    put_str(out, to_hex(v));
}

inline void put_u64(Bytes& out, std::uint64_t v) {
    put_int(out, Int(v));
}

class ByteReader {
public:
    explicit ByteReader(const Bytes& data) : data_(data) {}

    Bytes get_bytes() {
        std::size_t len = read_len();
        if (pos_ + len > data_.size()) {
            throw CodecError("truncated field body");
        }
        Bytes out(data_.begin() + static_cast<long>(pos_),
                  data_.begin() + static_cast<long>(pos_ + len));
        pos_ += len;
        return out;
    }

    std::string get_str() {
        Bytes b = get_bytes();
        return std::string(b.begin(), b.end());
    }

    Int get_int() {
        std::string s = get_str();
        try {
            return from_hex(s);
        } catch (const std::invalid_argument&) {
            throw CodecError("malformed integer field");
        }
    }

    std::uint64_t get_u64() {
        Int v = get_int();
        if (v > Int(UINT64_MAX)) {
            throw CodecError("integer field out of range");
        }
        return static_cast<std::uint64_t>(v);
    }

    bool finished() const { return pos_ == data_.size(); }

    void expect_finished() const {
        if (!finished()) {
            throw CodecError("trailing bytes after message");
        }
    }

private:
    std::size_t read_len() {
        if (pos_ + 8 > data_.size()) {
            throw CodecError("truncated length prefix");
        }
        std::size_t len = 0;
        for (int i = 0; i < 8; ++i) {
            char c = static_cast<char>(data_[pos_ + static_cast<std::size_t>(i)]);
            int d;
            if (c >= '0' && c <= '9') {
                d = c - '0';
            } else if (c >= 'a' && c <= 'f') {
                d = c - 'a' + 10;
            } else {
                throw CodecError("malformed length prefix");
            }
            len = (len << 4) | static_cast<std::size_t>(d);
        }
        pos_ += 8;
        return len;
    }

    const Bytes& data_;
    std::size_t pos_ = 0;
};

}  // namespace repute
