#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace slt {

/// Null node / missing position. Node ids and positions are 1-based.
inline constexpr std::uint64_t kNone = 0;

/// Number of bits needed to store values in [0, v].
inline unsigned bits_for(std::uint64_t v) {
  return v == 0 ? 1u : static_cast<unsigned>(std::bit_width(v));
}

/// Fixed-width packed integer array (0-based).
class IntVector {
 public:
  IntVector() = default;
  IntVector(std::size_t size, unsigned width)
      : size_(size), width_(width), words_((size * width + 63) / 64 + 1, 0) {
    if (width == 0 || width > 64) throw std::invalid_argument("IntVector: width must be in [1,64]");
  }

  std::size_t size() const { return size_; }
  unsigned width() const { return width_; }

  std::uint64_t get(std::size_t i) const {
    const std::size_t bit = i * width_;
    const std::size_t w = bit >> 6;
    const unsigned off = bit & 63;
    std::uint64_t v = words_[w] >> off;
    if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
    return width_ == 64 ? v : v & ((std::uint64_t{1} << width_) - 1);
  }

  void set(std::size_t i, std::uint64_t v) {
    const std::uint64_t mask = width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1;
    v &= mask;
    const std::size_t bit = i * width_;
    const std::size_t w = bit >> 6;
    const unsigned off = bit & 63;
    words_[w] = (words_[w] & ~(mask << off)) | (v << off);
    if (off + width_ > 64) {
      const unsigned spill = off + width_ - 64;
      const std::uint64_t hi_mask = (std::uint64_t{1} << spill) - 1;
      words_[w + 1] = (words_[w + 1] & ~hi_mask) | (v >> (64 - off));
    }
  }

  std::uint64_t size_in_bits() const { return static_cast<std::uint64_t>(size_) * width_; }

 private:
  std::size_t size_ = 0;
  unsigned width_ = 1;
  std::vector<std::uint64_t> words_;
};

/// Little-endian byte sink used by the index container.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  std::vector<std::uint8_t>& buffer() { return buf_; }
  const std::vector<std::uint8_t>& buffer() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::vector<std::uint8_t>& v) : ByteReader(v.data(), v.size()) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t{data_[pos_++]} << (8 * k);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t{data_[pos_++]} << (8 * k);
    return v;
  }
  void bytes(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const { return size_ - pos_; }

 private:
  void need(std::size_t n) const {
    if (size_ - pos_ < n) throw std::runtime_error("truncated input");
  }
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

}  // namespace slt
