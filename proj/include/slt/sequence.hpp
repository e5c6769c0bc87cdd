#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slt/bitvector.hpp"

namespace slt {

/// Rank/select/access over a string with alphabet [1, sigma].
///
/// Backed by a Huffman-shaped wavelet tree, so the payload is close to
/// n * H0 bits. Symbols that never occur are legal query arguments: their
/// rank is 0 and select reports "no such occurrence".
class LabeledSequence {
 public:
  LabeledSequence() = default;
  LabeledSequence(std::span<const std::uint32_t> chars, std::uint32_t sigma);

  std::uint64_t size() const { return size_; }
  std::uint32_t sigma() const { return sigma_; }
  std::uint64_t count(std::uint32_t c) const { return c >= 1 && c <= sigma_ ? counts_[c] : 0; }

  std::uint32_t access(std::uint64_t i) const;
  std::uint64_t rank(std::uint32_t c, std::uint64_t i) const;
  std::uint64_t select(std::uint32_t c, std::uint64_t j) const;

  /// Zero-order empirical entropy in bits per symbol; 0 for the empty string.
  double entropy() const;
  std::uint64_t size_in_bits() const;
  std::vector<std::uint32_t> to_vector() const;

 private:
  struct Node {
    BitVector bits;          // internal nodes only
    std::int32_t child[2] = {-1, -1};
    std::int32_t parent = -1;
    std::uint32_t symbol = 0;  // leaves only
    bool which = false;        // side of the parent this node hangs on
  };

  void check_symbol(std::uint32_t c) const;

  std::uint64_t size_ = 0;
  std::uint32_t sigma_ = 0;
  std::vector<std::uint64_t> counts_;  // indexed by symbol, [0] unused
  std::vector<Node> nodes_;            // nodes_[0] is the root
  std::vector<std::int32_t> leaf_;     // symbol -> leaf node, -1 if absent
  std::vector<std::uint64_t> code_;    // symbol -> root-to-leaf bits, LSB first
  std::vector<std::uint8_t> code_len_;
};

}  // namespace slt
