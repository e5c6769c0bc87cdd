#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slt/bp_tree.hpp"

namespace slt {

/// One subtree of a cover. Non-root members are exactly the preorder ranks in
/// [i1_lo, i1_hi] and [i2_lo, i2_hi]; an empty interval is stored as 0 0.
struct Component {
  std::uint32_t root = 0;
  std::uint32_t special = 0;
  std::uint32_t i1_lo = 0, i1_hi = 0;
  std::uint32_t i2_lo = 0, i2_hi = 0;

  std::uint64_t i1_size() const { return i1_lo == 0 ? 0 : i1_hi - i1_lo + 1; }
  std::uint64_t i2_size() const { return i2_lo == 0 ? 0 : i2_hi - i2_lo + 1; }
  std::uint64_t size() const { return 1 + i1_size() + i2_size(); }
  bool contains_non_root(std::uint64_t x) const {
    return (i1_lo != 0 && i1_lo <= x && x <= i1_hi) || (i2_lo != 0 && i2_lo <= x && x <= i2_hi);
  }
  bool operator==(const Component&) const = default;
};

/// Cover of a tree by components of at most 2L+1 nodes, sorted by smallest
/// non-root preorder rank.
struct Decomposition {
  std::uint32_t L = 1;
  std::uint64_t n = 0;
  std::vector<Component> components;
  bool degenerate = false;  // single-node tree: nothing to cover
};

/// Greedy bottom-up cover. Every component has at most 2L nodes, components
/// share only roots, and the special node is a leaf of its component.
Decomposition decompose(const TreeShape& t, std::uint32_t L);
Decomposition decompose(const OrdinalTree& t, std::uint32_t L);

/// Adds a node to the component of an edge's upper endpoint, or a new
/// two-node component, for every uncovered edge; then drops single-node
/// components. A no-op on output of `decompose`.
void complete_cover(const TreeShape& t, Decomposition& d);

struct DecompositionReport {
  bool edges_once = true;       // every edge in exactly one component
  bool size_ok = true;          // every size <= 2L+1
  bool count_ok = true;         // count * L / n <= c_max
  bool intervals_ok = true;     // non-root members are the two intervals, each node non-root at most once
  bool sharing_ok = true;       // shared nodes are roots or special nodes
  bool special_leaf = true;     // no member hangs below the special node
  bool connected = true;        // every non-root member's parent is a member
  double ratio = 0.0;           // count * L / n
  std::uint64_t max_size = 0;
  std::string first_failure;

  bool ok() const {
    return edges_once && size_ok && count_ok && intervals_ok && sharing_ok && special_leaf && connected;
  }
};

DecompositionReport verify_decomposition(const TreeShape& t, const Decomposition& d, double c_max = 8.0);

/// One line per component: "root special I1lo I1hi I2lo I2hi".
std::string dump_decomposition(const Decomposition& d);

/// Quotient tree over components. Node k (preorder, 1-based) is
/// `components[k-1]`; an extra single-node component for the tree root is
/// added when that root is shared.
struct MacroTree {
  OrdinalTree tree;
  std::vector<Component> components;
  bool extra_root = false;

  std::uint64_t size() const { return components.size(); }
};

MacroTree macro_tree(const TreeShape& t, const Decomposition& d);

}  // namespace slt
