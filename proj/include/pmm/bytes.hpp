#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmm {

using Bytes = std::vector<uint8_t>;

struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

/* Little-endian, length-prefixed primitives shared by every canonical
 * encoding in the project. Writers never fail; readers throw DecodeError
 * on truncation or trailing garbage so malformed inputs surface as data
 * errors rather than UB. */
class ByteWriter {
  public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v);
    void u64(uint64_t v);
    void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
    void raw(std::span<const uint8_t> data);
    void lp_bytes(std::span<const uint8_t> data);  // u32 length prefix
    void lp_string(const std::string& s);

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

  private:
    Bytes buf_;
};

class ByteReader {
  public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8();
    uint32_t u32();
    uint64_t u64();
    int64_t i64() { return static_cast<int64_t>(u64()); }
    Bytes raw(size_t n);
    Bytes lp_bytes();
    std::string lp_string();

    size_t remaining() const { return data_.size() - pos_; }
    void expect_end() const;

  private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

std::string to_hex(std::span<const uint8_t> data);
Bytes from_hex(const std::string& hex);  // throws DecodeError on bad input

}  // namespace pmm
