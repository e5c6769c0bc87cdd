#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "slt/bits.hpp"
#include "slt/blocked_search.hpp"
#include "slt/bp_tree.hpp"

namespace slt {

/// Step function over the tuple string of a weighted tree. Weight index 0 is
/// the constant-zero weight.
struct StepFunction {
  enum class Kind : std::uint8_t { phi, pi, eps };
  Kind kind = Kind::eps;
  std::uint32_t a = 0;
  std::uint32_t b = 0;

  static StepFunction phi(std::uint32_t a, std::uint32_t b) { return {Kind::phi, a, b}; }
  static StepFunction pi(std::uint32_t a) { return {Kind::pi, a, 0}; }
  static StepFunction eps() { return {Kind::eps, 0, 0}; }
  bool operator==(const StepFunction&) const = default;
};

/// Ordinal tree carrying s weight functions w_1..w_s with values in [0, X-1].
///
/// The tuple string P is never materialized. Position i of the paren string
/// decodes to the weights of node_of(i); opens are read from a preorder
/// array, closes from a postorder copy kept only for the weights that some
/// directory reads at closes. Each directory is a BlockedSearch over one
/// step function. Queries on a function without a directory build a
/// temporary one (linear time).
class WeightedTree {
 public:
  WeightedTree() = default;
  /// `weights[a-1][x-1]` is w_a(x). `functions` lists the step functions that
  /// get permanent directories; empty means eps plus pi(a) for every a.
  WeightedTree(OrdinalTree skeleton, const std::vector<std::vector<std::uint32_t>>& weights, std::uint32_t X,
               std::uint32_t block = 512, std::vector<StepFunction> functions = {});

  const OrdinalTree& tree() const { return tree_; }
  std::uint64_t size() const { return tree_.size(); }
  std::uint32_t num_weights() const { return s_; }
  std::uint32_t bound() const { return X_; }
  const std::vector<StepFunction>& functions() const { return functions_; }

  std::uint32_t weight(std::uint32_t a, std::uint64_t x) const;

  std::int64_t base_sum(const StepFunction& f, std::uint64_t i, std::uint64_t j) const;
  std::uint64_t fwd_search(const StepFunction& f, std::uint64_t i, std::int64_t d) const;  // 0 = none
  std::uint64_t bwd_search(const StepFunction& f, std::uint64_t i, std::int64_t d) const;  // 0 = none
  std::uint64_t rmqi(const StepFunction& f, std::uint64_t i, std::uint64_t j) const;

  std::uint64_t wdepth(std::uint32_t a, std::uint64_t x) const;
  std::uint64_t wlevel_ancestor(std::uint32_t a, std::uint64_t x, std::uint64_t i) const;
  std::uint64_t wparent(std::uint32_t a, std::uint64_t x) const { return wlevel_ancestor(a, x, 1); }
  std::uint64_t wdeg(std::uint32_t a, std::uint64_t x) const;
  std::uint64_t wchild_rank(std::uint32_t a, std::uint64_t x) const;
  std::uint64_t wchild_select(std::uint32_t a, std::uint64_t x, std::uint64_t i) const;
  std::uint64_t wnum_descendants(std::uint32_t a, std::uint64_t x) const;

  bool bp_char(std::uint64_t i) const { return tree_.paren(i); }
  std::uint64_t bp_rank(std::uint32_t a, std::uint32_t b, std::uint64_t i) const;
  std::uint64_t bp_select(std::uint32_t a, std::uint32_t b, std::uint64_t i) const;  // 0 = none

  std::uint64_t size_in_bits() const;
  void save(ByteWriter& out) const;
  static WeightedTree load(ByteReader& in);

 private:
  struct Fill {
    const WeightedTree* t;
    StepFunction f;
    void operator()(std::uint64_t first, std::uint64_t count, std::int64_t* out) const;
  };
  struct Directory {
    StepFunction f;
    BlockedSearch search;
  };

  void check_weight_index(std::uint32_t a, bool allow_zero) const;
  void check_function(const StepFunction& f) const;
  void check_position(std::uint64_t i) const;
  std::uint32_t raw_weight(std::uint32_t a, std::uint64_t x) const { return a == 0 ? 0 : static_cast<std::uint32_t>(w_[a - 1].get(x - 1)); }
  std::uint32_t close_weight(std::uint32_t a, std::uint64_t post) const;
  // Directory for f, or a temporary one stored in `tmp`.
  const BlockedSearch& directory(const StepFunction& f, BlockedSearch& tmp) const;
  std::int64_t prefix(const StepFunction& f, std::uint64_t k) const;
  // Children of x with their running w_a sums.
  template <class Visit>
  void for_each_child(std::uint64_t x, Visit&& visit) const;
  const std::vector<std::uint64_t>* child_prefix(std::uint32_t a, std::uint64_t x) const;

  OrdinalTree tree_;
  std::uint32_t s_ = 0;
  std::uint32_t X_ = 1;
  std::uint32_t block_ = 512;
  std::vector<IntVector> w_;          // preorder, one per weight
  std::vector<IntVector> close_w_;    // postorder copies; empty when not needed
  std::vector<StepFunction> functions_;
  std::vector<Directory> dirs_;
  // Nodes with more than `block_` children: per-weight running sums over the children.
  std::unordered_map<std::uint64_t, std::vector<std::vector<std::uint64_t>>> wide_;
};

}  // namespace slt
