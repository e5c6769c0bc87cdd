#include "slt/decomposition.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace slt {

namespace {

struct Piece {
  std::vector<std::uint32_t> nodes;
  bool hole = false;
};

Component seal(std::uint32_t root, std::vector<std::uint32_t>& members) {
  std::sort(members.begin(), members.end());
  Component c;
  c.root = root;
  std::size_t k = 0;
  while (k + 1 < members.size() && members[k + 1] == members[k] + 1) ++k;
  c.i1_lo = members.front();
  c.i1_hi = members[k];
  if (k + 1 < members.size()) {
    c.i2_lo = members[k + 1];
    c.i2_hi = members.back();
    if (c.i2_hi - c.i2_lo + 1 != members.size() - k - 1)
      throw std::logic_error("decompose: component is not two preorder intervals");
  }
  c.special = c.i1_hi;
  return c;
}

std::vector<std::vector<std::uint32_t>> children_of(const TreeShape& t) {
  std::vector<std::vector<std::uint32_t>> kids(t.size() + 1);
  for (std::uint32_t v = 2; v <= t.size(); ++v) kids[t.parent[v]].push_back(v);
  return kids;
}

std::vector<std::uint32_t> non_root_members(const Component& c) {
  std::vector<std::uint32_t> out;
  if (c.i1_lo != 0)
    for (std::uint32_t x = c.i1_lo; x <= c.i1_hi; ++x) out.push_back(x);
  if (c.i2_lo != 0)
    for (std::uint32_t x = c.i2_lo; x <= c.i2_hi; ++x) out.push_back(x);
  return out;
}

void sort_components(std::vector<Component>& cs) {
  std::sort(cs.begin(), cs.end(), [](const Component& a, const Component& b) { return a.i1_lo < b.i1_lo; });
}

}  // namespace

Decomposition decompose(const TreeShape& t, std::uint32_t L) {
  if (L == 0) throw std::invalid_argument("decompose: L must be >= 1");
  Decomposition d;
  d.L = L;
  d.n = t.size();
  if (d.n <= 1) {
    d.degenerate = true;
    return d;
  }
  const auto kids = children_of(t);
  const std::uint64_t cap = 2 * static_cast<std::uint64_t>(L) - 1;  // non-root members per component
  std::vector<Piece> pending(d.n + 1);

  for (std::uint32_t v = static_cast<std::uint32_t>(d.n); v >= 1; --v) {
    Piece group;
    bool sealed_any = false;
    auto flush = [&] {
      if (group.nodes.empty()) return;
      d.components.push_back(seal(v, group.nodes));
      group = Piece{};
      sealed_any = true;
    };
    for (std::uint32_t c : kids[v]) {
      Piece& p = pending[c];
      if ((group.hole && p.hole) || group.nodes.size() + p.nodes.size() > cap) flush();
      group.nodes.insert(group.nodes.end(), p.nodes.begin(), p.nodes.end());
      group.hole = group.hole || p.hole;
      p = Piece{};
    }
    Piece& mine = pending[v];
    if (v == 1) {
      flush();
    } else if (sealed_any || 1 + group.nodes.size() > L) {
      flush();
      mine.nodes = {v};
      mine.hole = true;
    } else {
      mine.nodes = std::move(group.nodes);
      mine.nodes.push_back(v);
      mine.hole = group.hole;
    }
  }
  sort_components(d.components);
  return d;
}

Decomposition decompose(const OrdinalTree& t, std::uint32_t L) { return decompose(shape_of(t), L); }

void complete_cover(const TreeShape& t, Decomposition& d) {
  const std::uint64_t n = t.size();
  std::vector<std::int64_t> owner(n + 1, -1);  // component holding x as a non-root node
  std::vector<std::vector<std::uint32_t>> members(d.components.size());
  for (std::size_t k = 0; k < d.components.size(); ++k) {
    const Component& c = d.components[k];
    members[k].push_back(c.root);
    for (std::uint32_t x : non_root_members(c)) {
      owner[x] = static_cast<std::int64_t>(k);
      members[k].push_back(x);
    }
  }
  auto covered = [&](std::uint32_t w) {
    const std::uint32_t v = t.parent[w];
    for (const auto& m : members)
      if (std::find(m.begin(), m.end(), v) != m.end() && std::find(m.begin(), m.end(), w) != m.end()) return true;
    return false;
  };
  std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> extra;
  for (std::uint32_t w = 2; w <= n; ++w) {
    if (covered(w)) continue;
    const std::uint32_t v = t.parent[w];
    if (owner[v] >= 0) {
      members[owner[v]].push_back(w);
      owner[w] = owner[v];
    } else {
      extra.push_back({v, {w}});
    }
  }
  std::vector<Component> out;
  for (std::size_t k = 0; k < members.size(); ++k) {
    std::vector<std::uint32_t> non_root(members[k].begin() + 1, members[k].end());
    if (non_root.empty()) continue;
    out.push_back(seal(d.components[k].root, non_root));
  }
  for (auto& [v, w] : extra) out.push_back(seal(v, w));
  sort_components(out);
  d.components = std::move(out);
}

DecompositionReport verify_decomposition(const TreeShape& t, const Decomposition& d, double c_max) {
  DecompositionReport r;
  const std::uint64_t n = t.size();
  auto fail = [&](bool& flag, const std::string& why) {
    flag = false;
    if (r.first_failure.empty()) r.first_failure = why;
  };
  if (n <= 1) {
    if (!d.components.empty()) fail(r.edges_once, "single-node tree has components");
    return r;
  }
  r.ratio = static_cast<double>(d.components.size()) * d.L / static_cast<double>(n);
  if (r.ratio > c_max) fail(r.count_ok, "component count ratio " + std::to_string(r.ratio) + " exceeds bound");

  std::vector<std::uint32_t> edge_count(n + 1, 0), non_root_count(n + 1, 0);
  std::vector<std::vector<std::size_t>> appears(n + 1);
  for (std::size_t k = 0; k < d.components.size(); ++k) {
    const Component& c = d.components[k];
    const std::string tag = "component " + std::to_string(k + 1) + " (root " + std::to_string(c.root) + ")";
    r.max_size = std::max(r.max_size, c.size());
    if (c.size() > 2 * static_cast<std::uint64_t>(d.L) + 1) fail(r.size_ok, tag + " has size " + std::to_string(c.size()));
    auto bad_interval = [&](std::uint32_t lo, std::uint32_t hi) {
      return (lo == 0) != (hi == 0) || lo > hi || hi > n;
    };
    if (c.i1_lo == 0 || bad_interval(c.i1_lo, c.i1_hi) || bad_interval(c.i2_lo, c.i2_hi) ||
        (c.i2_lo != 0 && c.i2_lo <= c.i1_hi + 1) || c.root == 0 || c.root > n || c.contains_non_root(c.root)) {
      fail(r.intervals_ok, tag + " has malformed intervals");
      continue;
    }
    const std::uint32_t expect_special = c.i2_lo == 0 ? c.i1_hi : std::min(c.i1_hi, c.i2_hi);
    if (c.special != expect_special) fail(r.intervals_ok, tag + " has the wrong special node");
    appears[c.root].push_back(k);
    for (std::uint32_t x : non_root_members(c)) {
      appears[x].push_back(k);
      ++non_root_count[x];
      const std::uint32_t p = t.parent[x];
      if (p == 0 || (p != c.root && !c.contains_non_root(p))) {
        fail(r.connected, tag + " member " + std::to_string(x) + " is detached");
        continue;
      }
      ++edge_count[x];
      if (p == c.special) fail(r.special_leaf, tag + " has a member below its special node");
    }
  }
  for (std::uint32_t x = 1; x <= n; ++x) {
    if (x >= 2 && edge_count[x] != 1)
      fail(r.edges_once, "edge (" + std::to_string(t.parent[x]) + "," + std::to_string(x) + ") covered " +
                             std::to_string(edge_count[x]) + " times");
    if (non_root_count[x] > 1) fail(r.intervals_ok, "node " + std::to_string(x) + " is a non-root node twice");
    if (appears[x].size() > 1)
      for (std::size_t k : appears[x]) {
        const Component& c = d.components[k];
        if (c.root != x && c.special != x)
          fail(r.sharing_ok, "node " + std::to_string(x) + " is shared but is an inner node of component " +
                                 std::to_string(k + 1));
      }
  }
  return r;
}

std::string dump_decomposition(const Decomposition& d) {
  std::ostringstream os;
  for (const Component& c : d.components)
    os << c.root << ' ' << c.special << ' ' << c.i1_lo << ' ' << c.i1_hi << ' ' << c.i2_lo << ' ' << c.i2_hi << '\n';
  return os.str();
}

MacroTree macro_tree(const TreeShape& t, const Decomposition& d) {
  MacroTree m;
  if (d.components.empty()) return m;
  const std::size_t k = d.components.size();
  std::vector<Component> cs = d.components;
  std::size_t at_root = 0;
  for (const Component& c : cs) at_root += c.root == 1;
  if (at_root > 1) {
    Component r;
    r.root = 1;
    r.special = 1;
    cs.push_back(r);
    m.extra_root = true;
  }
  std::map<std::uint32_t, std::size_t> by_special;
  for (std::size_t j = 0; j < k; ++j) by_special[cs[j].special] = j;

  const std::size_t none = cs.size();
  std::size_t top = none;
  std::vector<std::vector<std::size_t>> kids(cs.size());
  for (std::size_t j = 0; j < k; ++j) {
    if (cs[j].root == 1 && m.extra_root) {
      kids[k].push_back(j);
      continue;
    }
    if (cs[j].root == 1) {
      top = j;
      continue;
    }
    const auto it = by_special.find(cs[j].root);
    if (it == by_special.end())
      throw std::logic_error("macro tree: component rooted at " + std::to_string(cs[j].root) + " has no parent");
    kids[it->second].push_back(j);
  }
  if (m.extra_root) top = k;
  if (top == none) throw std::logic_error("macro tree: no component contains the root");
  (void)t;

  // Components arrive sorted by i1_lo, so child lists are already in order.
  std::vector<bool> parens;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{top, 0}};
  m.components.push_back(cs[top]);
  parens.push_back(true);
  while (!stack.empty()) {
    auto& [c, next] = stack.back();
    if (next < kids[c].size()) {
      const std::size_t ch = kids[c][next++];
      m.components.push_back(cs[ch]);
      parens.push_back(true);
      stack.emplace_back(ch, 0);
    } else {
      parens.push_back(false);
      stack.pop_back();
    }
  }
  if (m.components.size() != cs.size()) throw std::logic_error("macro tree: components unreachable from the root");
  m.tree = OrdinalTree(parens);
  return m;
}

}  // namespace slt
