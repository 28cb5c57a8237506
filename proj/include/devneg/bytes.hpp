#pragma once

// Byte-buffer helpers shared by the wire formats. All multi-byte integers
// in serialized artifacts are big-endian; text and blobs are u32
// length-prefixed. Readers are bounds-checked and throw DecodeError, which
// callers that must never crash (verifiers, file loaders) translate into a
// reject result.

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace devneg {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u16be(uint16_t v) {
        buf_.push_back(uint8_t(v >> 8));
        buf_.push_back(uint8_t(v));
    }
    void u32be(uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) buf_.push_back(uint8_t(v >> s));
    }
    void u64be(uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) buf_.push_back(uint8_t(v >> s));
    }
    void raw(ByteView b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    void raw(const void* p, size_t n) {
        const auto* u = static_cast<const uint8_t*>(p);
        buf_.insert(buf_.end(), u, u + n);
    }
    // u32 length prefix + payload
    void lp(ByteView b) {
        u32be(static_cast<uint32_t>(b.size()));
        raw(b);
    }
    void lp_str(std::string_view s) {
        u32be(static_cast<uint32_t>(s.size()));
        raw(s.data(), s.size());
    }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }
    size_t size() const { return buf_.size(); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(ByteView b) : data_(b) {}

    uint8_t u8() { return *take(1); }
    uint16_t u16be() {
        const uint8_t* p = take(2);
        return uint16_t(p[0]) << 8 | p[1];
    }
    uint32_t u32be() {
        const uint8_t* p = take(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | p[i];
        return v;
    }
    uint64_t u64be() {
        const uint8_t* p = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | p[i];
        return v;
    }
    ByteView raw(size_t n) { return {take(n), n}; }
    Bytes lp() {
        uint32_t n = u32be();
        ByteView v = raw(n);
        return Bytes(v.begin(), v.end());
    }
    std::string lp_str() {
        uint32_t n = u32be();
        ByteView v = raw(n);
        return std::string(v.begin(), v.end());
    }

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    void expect_done() const {
        if (!done()) throw DecodeError("trailing bytes");
    }

private:
    const uint8_t* take(size_t n) {
        if (remaining() < n) throw DecodeError("truncated input");
        const uint8_t* p = data_.data() + pos_;
        pos_ += n;
        return p;
    }
    ByteView data_;
    size_t pos_ = 0;
};

inline std::string to_hex(ByteView b) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(b.size() * 2);
    for (uint8_t c : b) {
        s.push_back(digits[c >> 4]);
        s.push_back(digits[c & 0xf]);
    }
    return s;
}

inline Bytes from_hex(std::string_view s) {
    if (s.size() % 2 != 0) throw DecodeError("odd hex length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw DecodeError("bad hex digit");
    };
    Bytes out(s.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = uint8_t(nib(s[2 * i]) << 4 | nib(s[2 * i + 1]));
    return out;
}

}  // namespace devneg
