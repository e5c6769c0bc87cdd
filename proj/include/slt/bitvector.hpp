#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "slt/bits.hpp"

namespace slt {

/// Uncompressed bit sequence with rank/select directories.
///
/// Positions are 1-based; rank takes a prefix length in [0, n]. A cumulative
/// count is kept every 512 bits; select binary-searches those counts and
/// finishes with a word scan.
class PlainBitVector {
 public:
  PlainBitVector() { index(); }
  explicit PlainBitVector(const std::vector<bool>& bits);
  PlainBitVector(std::vector<std::uint64_t> words, std::uint64_t size);

  std::uint64_t size() const { return size_; }
  std::uint64_t ones() const { return ones_; }

  bool access(std::uint64_t i) const {  // unchecked, 1-based
    const std::uint64_t b = i - 1;
    return (words_[b >> 6] >> (b & 63)) & 1u;
  }
  std::uint64_t rank1(std::uint64_t i) const;  // unchecked
  std::uint64_t rank0(std::uint64_t i) const { return i - rank1(i); }
  std::uint64_t select1(std::uint64_t j) const;  // unchecked, 1 <= j <= ones
  std::uint64_t select0(std::uint64_t j) const;  // unchecked, 1 <= j <= zeros

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::uint64_t size_in_bits() const;

 private:
  static constexpr std::uint64_t kSuper = 512;
  void index();

  std::vector<std::uint64_t> words_;
  std::vector<std::uint64_t> super_;  // ones before each 512-bit superblock
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
};

/// Elias–Fano encoding of the positions of the 1-bits; suited to sparse vectors.
class EliasFanoBitVector {
 public:
  EliasFanoBitVector() = default;
  explicit EliasFanoBitVector(const std::vector<bool>& bits);

  std::uint64_t size() const { return size_; }
  std::uint64_t ones() const { return ones_; }

  std::uint64_t select1(std::uint64_t j) const;  // unchecked
  std::uint64_t rank1(std::uint64_t i) const;    // unchecked
  std::uint64_t select0(std::uint64_t j) const;  // unchecked
  bool access(std::uint64_t i) const { return rank1(i) - rank1(i - 1) == 1; }
  std::uint64_t size_in_bits() const;

 private:
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
  unsigned low_width_ = 0;
  IntVector low_;
  PlainBitVector high_;
};

/// Binary rank/select dictionary. Picks the Elias–Fano layout when fewer than
/// one bit in eight is set; the layout is not part of the contract, only the
/// answers and the reported size.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(const std::vector<bool>& bits);
  explicit BitVector(std::string_view bits01);  // "0101" convenience

  std::uint64_t size() const { return size_; }
  std::uint64_t count(bool b) const { return b ? ones_ : size_ - ones_; }
  bool sparse() const { return sparse_; }

  /// Count of b among the first i bits, 0 <= i <= n.
  std::uint64_t rank(bool b, std::uint64_t i) const;
  /// Position of the j-th b, 1 <= j <= count(b).
  std::uint64_t select(bool b, std::uint64_t j) const;
  /// Bit at position i, 1 <= i <= n.
  bool access(std::uint64_t i) const;

  std::uint64_t size_in_bits() const;
  std::vector<bool> to_bits() const;

  void save(ByteWriter& out) const;
  static BitVector load(ByteReader& in);

 private:
  std::uint64_t size_ = 0;
  std::uint64_t ones_ = 0;
  bool sparse_ = false;
  PlainBitVector plain_;
  EliasFanoBitVector ef_;
};

}  // namespace slt
