#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "slt/bitvector.hpp"
#include "slt/bp_tree.hpp"
#include "slt/decomposition.hpp"
#include "slt/oracle.hpp"
#include "slt/sequence.hpp"
#include "slt/weighted_tree.hpp"

namespace slt {

struct IndexConfig {
  std::uint32_t L = 0;             // 0 selects default_L(n, sigma)
  std::uint32_t block_size = 512;  // block of the tree and weighted-tree directories
  double c_max = 8.0;
  bool verify_decompositions = false;  // keep a checker report per frequent label
};

/// max(2, ceil(log2 log2 max(n, 4))).
std::uint32_t default_L(std::uint64_t n, std::uint32_t sigma);

/// Last preorder id of every subtree; index 0 unused.
std::vector<std::uint32_t> subtree_ends(const TreeShape& t);

/// Per-label tree over the alpha-nodes (sorted preorder ids) and their parents.
/// Local id 1 is the virtual super-root; local k >= 2 is `nodes[k-2]`.
struct AlphaTree {
  TreeShape shape;
  std::vector<std::uint32_t> nodes;
};
AlphaTree alpha_tree(const TreeShape& t, const std::vector<std::uint32_t>& ends,
                     const std::vector<std::uint32_t>& alpha_nodes);

struct MapResult {
  std::uint64_t node = 0;   // macro node id in the merged tree
  std::uint64_t local = 0;  // 1-based id inside the label's macro tree
  bool special = false;
  bool operator==(const MapResult&) const = default;
};

/// Label-rank intervals of a macro node; an empty interval has lo = hi + 1.
struct Intervals {
  std::uint64_t l1 = 0, r1 = 0, l2 = 0, r2 = 0;
};

struct SpaceReport {
  std::uint64_t n = 0;
  std::uint32_t sigma = 0;
  std::uint32_t L = 0;
  double h0 = 0.0;
  std::uint64_t labels_bits = 0;  // P_T
  std::uint64_t shape_bits = 0;   // unlabeled tree
  std::uint64_t merged_bits = 0;  // T'
  std::uint64_t n_bits = 0;
  std::uint64_t f_bits = 0;
  std::uint64_t total_bits = 0;
  std::uint64_t merged_nodes = 0;
  double nh0 = 0.0;
  double redundancy_bits = 0.0;  // total - n*H0 - 2n
  double redundancy_per_node = 0.0;
  std::uint64_t macro_bits() const { return merged_bits + n_bits + f_bits; }
};

struct AlphaDecompositionCheck {
  std::uint32_t alpha = 0;
  std::uint64_t tree_size = 0;  // nodes of the per-label tree, super-root included
  DecompositionReport report;
};

/// Succinct labeled ordered tree.
///
/// Node ids are preorder ranks 1..n and label ids are 1..sigma. NULL answers
/// are kNone (0). Invalid arguments throw std::out_of_range; malformed input
/// throws std::invalid_argument (ParenError for the parentheses).
class LabeledTreeIndex {
 public:
  LabeledTreeIndex() = default;
  LabeledTreeIndex(const std::vector<bool>& parens, const std::vector<std::uint32_t>& labels, std::uint32_t sigma,
                   IndexConfig cfg = {});
  LabeledTreeIndex(const PlainTree& t, IndexConfig cfg = {});

  std::uint64_t size() const { return shape_.size(); }
  std::uint32_t sigma() const { return labels_.sigma(); }
  const IndexConfig& config() const { return cfg_; }
  bool frequent(std::uint32_t alpha) const;

  std::uint32_t label(std::uint64_t x) const;
  std::uint64_t depth(std::uint32_t alpha, std::uint64_t x) const;
  std::uint64_t level_ancestor(std::uint32_t alpha, std::uint64_t x, std::uint64_t i) const;
  std::uint64_t parent(std::uint32_t alpha, std::uint64_t x) const { return level_ancestor(alpha, x, 1); }
  std::uint64_t deg(std::uint32_t alpha, std::uint64_t x) const;
  std::uint64_t child_rank(std::uint32_t alpha, std::uint64_t x) const;
  std::uint64_t child_select(std::uint32_t alpha, std::uint64_t x, std::uint64_t i) const;
  std::uint64_t num_descendants(std::uint32_t alpha, std::uint64_t x) const;
  std::uint64_t preorder_rank(std::uint32_t alpha, std::uint64_t x) const;
  std::uint64_t preorder_select(std::uint32_t alpha, std::uint64_t i) const;
  std::uint64_t postorder_rank(std::uint32_t alpha, std::uint64_t x) const;
  std::uint64_t postorder_select(std::uint32_t alpha, std::uint64_t i) const;

  std::uint64_t answer(const Query& q) const;

  // Macro-level views, for frequent labels only. `local` ids are 1-based
  // within the label's macro tree.
  std::uint64_t merged_offset(std::uint32_t alpha) const;
  std::uint64_t macro_size(std::uint32_t alpha) const;
  std::optional<MapResult> map_node(std::uint32_t alpha, std::uint64_t x) const;
  Intervals intervals_of(std::uint32_t alpha, std::uint64_t local) const;
  std::vector<std::uint64_t> v_set(std::uint32_t alpha, std::uint64_t local) const;
  std::uint64_t c_node(std::uint32_t alpha, std::uint64_t local) const;
  std::array<std::uint32_t, 9> macro_weights(std::uint32_t alpha, std::uint64_t local) const;

  const LabeledSequence& label_sequence() const { return labels_; }
  const OrdinalTree& shape() const { return shape_; }
  const WeightedTree& merged() const { return merged_; }
  const BitVector& n_string() const { return n_; }
  const BitVector& f_string() const { return f_; }
  const std::vector<AlphaDecompositionCheck>& decomposition_checks() const { return checks_; }

  SpaceReport space_report() const;

  std::vector<std::uint8_t> serialize() const;
  static LabeledTreeIndex deserialize(const std::vector<std::uint8_t>& bytes);
  void save(const std::string& path) const;
  static LabeledTreeIndex load(const std::string& path);

  /// V-set members inspected by frequent-label queries on this thread.
  static std::uint64_t& scan_counter();

 private:
  // V-sets hold at most 2L nodes; small ones stay off the heap.
  using NodeList = boost::container::small_vector<std::uint64_t, 16>;

  struct View {
    std::uint32_t alpha = 0;
    std::uint64_t root = 0;  // merged-tree id of the macro root
    std::uint64_t size = 0;
    std::uint64_t base23 = 0;
    std::uint64_t base89 = 0;  // filled by postorder_select only
  };

  LabeledTreeIndex(LabeledSequence labels, OrdinalTree shape, WeightedTree merged, BitVector n, BitVector f,
                   IndexConfig cfg);
  void build_merged(const std::vector<std::uint32_t>& labels);

  void check_alpha(std::uint32_t alpha) const;
  void check_node(std::uint64_t x) const;
  View view(std::uint32_t alpha) const;
  std::uint32_t w(std::uint32_t a, std::uint64_t g) const { return merged_.weight(a, g); }
  Intervals intervals(const View& v, std::uint64_t g) const;
  NodeList members(const View& v, std::uint64_t g) const;
  std::uint64_t c_of(const View& v, std::uint64_t g) const;
  std::optional<MapResult> map_alpha_node(const View& v, std::uint64_t x) const;
  std::optional<MapResult> map_any(const View& v, std::uint64_t x) const;
  MapResult result(const View& v, std::uint64_t g, bool special) const;

  bool t_ancestor(std::uint64_t a, std::uint64_t x) const { return shape_.is_ancestor(a, x); }
  bool post_before(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t predecessor(std::uint32_t alpha, std::uint64_t x) const;  // last alpha-node with id <= x

  // Frequent-label internals.
  std::uint64_t walk_up(const View& v, std::uint64_t a, std::uint64_t j) const;
  std::uint64_t depth_of_alpha_node(const View& v, std::uint64_t x) const;
  struct Anchor {
    std::uint64_t node = 0;
    bool self_included = false;
  };
  Anchor anchor(std::uint32_t alpha, std::uint64_t x) const;

  // Infrequent labels.
  NodeList enumerate(std::uint32_t alpha) const;

  LabeledSequence labels_;
  OrdinalTree shape_;
  WeightedTree merged_;
  BitVector n_;
  BitVector f_;
  IndexConfig cfg_;
  std::vector<AlphaDecompositionCheck> checks_;
};

}  // namespace slt
