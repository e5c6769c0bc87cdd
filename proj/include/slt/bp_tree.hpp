#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slt/bitvector.hpp"
#include "slt/blocked_search.hpp"

namespace slt {

/// Thrown for malformed parenthesis input; carries the 1-based position of
/// the first violation (the string length when the input ends unbalanced).
class ParenError : public std::invalid_argument {
 public:
  ParenError(const std::string& what, std::uint64_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t position_;
};

/// Ordinal tree in balanced-parenthesis form ('(' = 1, ')' = 0).
///
/// Node ids are preorder ranks 1..n, so the i-th open parenthesis is node i.
/// Navigation runs on an excess directory (BlockedSearch over +1/-1 steps);
/// every operation is O(B + log n).
class OrdinalTree {
 public:
  OrdinalTree() = default;
  explicit OrdinalTree(const std::vector<bool>& parens, std::uint32_t block = 1024);
  explicit OrdinalTree(std::string_view parens, std::uint32_t block = 1024);

  std::uint64_t size() const { return n_; }
  std::uint64_t length() const { return 2 * n_; }

  std::uint64_t parent(std::uint64_t x) const;
  bool is_ancestor(std::uint64_t a, std::uint64_t x) const;  // ancestor-or-self
  std::uint64_t lca(std::uint64_t x, std::uint64_t y) const;
  std::uint64_t depth(std::uint64_t x) const;  // root has depth 1
  std::uint64_t subtree_size(std::uint64_t x) const;
  std::uint64_t degree(std::uint64_t x) const;
  std::uint64_t level_ancestor(std::uint64_t x, std::uint64_t d) const;
  std::uint64_t child_rank(std::uint64_t x) const;  // root -> 1
  std::uint64_t child_select(std::uint64_t x, std::uint64_t i) const;
  std::uint64_t postorder_rank(std::uint64_t x) const;
  std::uint64_t postorder_select(std::uint64_t i) const;

  std::uint64_t open_of(std::uint64_t x) const;
  std::uint64_t close_of(std::uint64_t x) const;
  std::uint64_t node_of(std::uint64_t i) const;
  bool paren(std::uint64_t i) const;  // 1 = open

  /// Ones before position i+1, i.e. rank of open parens in [1, i].
  std::uint64_t rank_open(std::uint64_t i) const { return bits_.rank1(i); }
  std::uint64_t select_close(std::uint64_t j) const { return bits_.select0(j); }

  const PlainBitVector& bits() const { return bits_; }
  std::vector<bool> parens() const;
  std::string to_string() const;
  std::uint64_t size_in_bits() const { return bits_.size_in_bits() + excess_.size_in_bits(); }
  std::uint32_t block_size() const { return block_; }

 private:
  struct StepFill {
    const PlainBitVector* bits;
    void operator()(std::uint64_t first, std::uint64_t count, std::int64_t* out) const;
  };

  void check_node(std::uint64_t x) const {
    if (x == 0 || x > n_) throw std::out_of_range("node " + std::to_string(x) + " out of range");
  }
  std::int64_t excess(std::uint64_t i) const {  // prefix sum through position i
    return 2 * static_cast<std::int64_t>(bits_.rank1(i)) - static_cast<std::int64_t>(i);
  }
  std::uint64_t find_close(std::uint64_t p) const;
  std::uint64_t find_open(std::uint64_t c) const;
  StepFill fill() const { return StepFill{&bits_}; }

  PlainBitVector bits_;
  BlockedSearch excess_;
  std::uint64_t n_ = 0;
  std::uint32_t block_ = 1024;
};

/// Parent array of a tree whose nodes are numbered in preorder (parent[1] = 0,
/// entry 0 unused). Light-weight input for builders.
struct TreeShape {
  std::vector<std::uint32_t> parent;
  std::uint64_t size() const { return parent.empty() ? 0 : parent.size() - 1; }
};

TreeShape shape_of(const OrdinalTree& t);
std::vector<bool> parens_of(const TreeShape& s);

}  // namespace slt
