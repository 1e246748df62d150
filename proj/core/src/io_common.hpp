#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "frostman/errors.hpp"

// Little-endian stream helpers with a running CRC32 of the payload (bytes
// after the magic), shared by the tree and measure formats.  Internal to the
// library; not installed.

namespace frostman::detail {

class CrcSink {
 public:
  explicit CrcSink(std::ostream* os) : os_(os), crc_(crc32(0L, Z_NULL, 0)) {}

  void raw(const void* p, std::size_t n) {
    if (os_) os_->write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void payload(const void* p, std::size_t n) {
    crc_ = crc32(crc_, static_cast<const Bytef*>(p), static_cast<uInt>(n));
    raw(p, n);
  }
  void u8(std::uint8_t v) { payload(&v, 1); }
  void u16(std::uint16_t v) {
    std::uint8_t b[2] = {std::uint8_t(v & 0xff), std::uint8_t(v >> 8)};
    payload(b, 2);
  }
  void u32_payload(std::uint32_t v) {
    std::uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = std::uint8_t(v >> (8 * i));
    payload(b, 4);
  }
  void u32_raw(std::uint32_t v) {
    std::uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = std::uint8_t(v >> (8 * i));
    raw(b, 4);
  }
  void u64(std::uint64_t v) {
    std::uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = std::uint8_t(v >> (8 * i));
    payload(b, 8);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  std::uint32_t crc() const { return static_cast<std::uint32_t>(crc_); }

 private:
  std::ostream* os_;
  uLong crc_;
};

class Reader {
 public:
  Reader(std::istream& is, const char* what) : is_(is), what_(what), crc_(crc32(0L, Z_NULL, 0)) {}

  void payload(void* p, std::size_t n) {
    is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n)
      throw format_error(format_error::kind::truncated,
                         std::string("unexpected end of ") + what_ + " stream");
    crc_ = crc32(crc_, static_cast<const Bytef*>(p), static_cast<uInt>(n));
  }
  std::uint8_t u8() {
    std::uint8_t v;
    payload(&v, 1);
    return v;
  }
  std::uint16_t u16() {
    std::uint8_t b[2];
    payload(b, 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }
  std::uint32_t u32_payload() {
    std::uint8_t b[4];
    payload(b, 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint32_t u32_raw() {
    std::uint8_t b[4];
    is_.read(reinterpret_cast<char*>(b), 4);
    if (is_.gcount() != 4)
      throw format_error(format_error::kind::truncated,
                         std::string("unexpected end of ") + what_ + " stream");
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint64_t u64() {
    std::uint8_t b[8];
    payload(b, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::uint32_t crc() const { return static_cast<std::uint32_t>(crc_); }
  std::istream& stream() { return is_; }

 private:
  std::istream& is_;
  const char* what_;
  uLong crc_;
};

}  // namespace frostman::detail
