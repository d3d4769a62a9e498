#include "pmm/bytes.hpp"

namespace pmm {

void ByteWriter::u32(uint32_t v) {
    for (int i = 0; i < 4; i++) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(uint64_t v) {
    for (int i = 0; i < 8; i++) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::raw(std::span<const uint8_t> data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void ByteWriter::lp_bytes(std::span<const uint8_t> data) {
    if (data.size() > UINT32_MAX) throw std::length_error("lp_bytes: field too large");
    u32(static_cast<uint32_t>(data.size()));
    raw(data);
}

void ByteWriter::lp_string(const std::string& s) {
    lp_bytes(std::span(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

uint8_t ByteReader::u8() {
    if (remaining() < 1) throw DecodeError("u8: truncated");
    return data_[pos_++];
}

uint32_t ByteReader::u32() {
    if (remaining() < 4) throw DecodeError("u32: truncated");
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
    return v;
}

uint64_t ByteReader::u64() {
    if (remaining() < 8) throw DecodeError("u64: truncated");
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
    return v;
}

Bytes ByteReader::raw(size_t n) {
    if (remaining() < n) throw DecodeError("raw: truncated");
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
    pos_ += n;
    return out;
}

Bytes ByteReader::lp_bytes() {
    uint32_t n = u32();
    if (remaining() < n) throw DecodeError("lp_bytes: length prefix past end");
    return raw(n);
}

std::string ByteReader::lp_string() {
    Bytes b = lp_bytes();
    return std::string(b.begin(), b.end());
}

void ByteReader::expect_end() const {
    if (pos_ != data_.size()) throw DecodeError("trailing bytes after decode");
}

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(std::span<const uint8_t> data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xf]);
    }
    return out;
}

static int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw DecodeError("from_hex: odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_val(hex[i]), lo = hex_val(hex[i + 1]);
        if (hi < 0 || lo < 0) throw DecodeError("from_hex: bad digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

}  // namespace pmm
