#include "slt/bp_tree.hpp"

namespace slt {

void OrdinalTree::StepFill::operator()(std::uint64_t first, std::uint64_t count, std::int64_t* out) const {
  const auto& words = bits->words();
  std::uint64_t b = first - 1;
  for (std::uint64_t k = 0; k < count; ++k, ++b) out[k] = ((words[b >> 6] >> (b & 63)) & 1u) ? 1 : -1;
}

OrdinalTree::OrdinalTree(const std::vector<bool>& parens, std::uint32_t block) : block_(block) {
  if (parens.empty()) throw ParenError("empty parenthesis string", 0);
  std::int64_t e = 0;
  for (std::uint64_t i = 0; i < parens.size(); ++i) {
    e += parens[i] ? 1 : -1;
    if (e < 0) throw ParenError("unmatched ')'", i + 1);
    if (e == 0 && i + 1 < parens.size()) throw ParenError("more than one root", i + 2);
  }
  if (e != 0) throw ParenError("unbalanced parentheses", parens.size());
  n_ = parens.size() / 2;
  bits_ = PlainBitVector(parens);
  excess_ = BlockedSearch(2 * n_, block_, fill());
}

OrdinalTree::OrdinalTree(std::string_view parens, std::uint32_t block)
    : OrdinalTree(
          [&] {
            std::vector<bool> v;
            v.reserve(parens.size());
            for (std::uint64_t i = 0; i < parens.size(); ++i) {
              if (parens[i] != '(' && parens[i] != ')') throw ParenError("unexpected character", i + 1);
              v.push_back(parens[i] == '(');
            }
            return v;
          }(),
          block) {}

bool OrdinalTree::paren(std::uint64_t i) const {
  if (i == 0 || i > 2 * n_) throw std::out_of_range("paren position " + std::to_string(i) + " out of range");
  return bits_.access(i);
}

std::uint64_t OrdinalTree::find_close(std::uint64_t p) const {
  return excess_.first_le(p + 1, excess(p) - 1, fill());
}

std::uint64_t OrdinalTree::find_open(std::uint64_t c) const {
  const auto k = excess_.last_le(c - 1, excess(c), fill());
  return *k + 1;
}

std::uint64_t OrdinalTree::open_of(std::uint64_t x) const {
  check_node(x);
  return bits_.select1(x);
}

std::uint64_t OrdinalTree::close_of(std::uint64_t x) const { return find_close(open_of(x)); }

std::uint64_t OrdinalTree::node_of(std::uint64_t i) const {
  if (i == 0 || i > 2 * n_) throw std::out_of_range("paren position " + std::to_string(i) + " out of range");
  return bits_.access(i) ? bits_.rank1(i) : bits_.rank1(find_open(i));
}

std::uint64_t OrdinalTree::parent(std::uint64_t x) const {
  check_node(x);
  if (x == 1) return kNone;
  const std::uint64_t p = bits_.select1(x);
  const auto k = excess_.last_le(p - 1, excess(p) - 2, fill());
  return bits_.rank1(*k + 1);
}

bool OrdinalTree::is_ancestor(std::uint64_t a, std::uint64_t x) const {
  check_node(x);
  return a <= x && x < a + subtree_size(a);
}

std::uint64_t OrdinalTree::depth(std::uint64_t x) const {
  return static_cast<std::uint64_t>(excess(open_of(x)));
}

std::uint64_t OrdinalTree::subtree_size(std::uint64_t x) const {
  const std::uint64_t p = open_of(x);
  return (find_close(p) - p + 1) / 2;
}

std::uint64_t OrdinalTree::level_ancestor(std::uint64_t x, std::uint64_t d) const {
  const std::uint64_t p = open_of(x);
  const auto dx = static_cast<std::uint64_t>(excess(p));
  if (d >= dx) return kNone;
  if (d == 0) return x;
  const auto k = excess_.last_le(p - 1, static_cast<std::int64_t>(dx - d) - 1, fill());
  return bits_.rank1(*k + 1);
}

std::uint64_t OrdinalTree::lca(std::uint64_t x, std::uint64_t y) const {
  check_node(x);
  check_node(y);
  if (x > y) std::swap(x, y);
  if (is_ancestor(x, y)) return x;
  const std::int64_t m = excess_.range_min(bits_.select1(x), bits_.select1(y), fill());
  return level_ancestor(x, depth(x) - static_cast<std::uint64_t>(m));
}

std::uint64_t OrdinalTree::degree(std::uint64_t x) const {
  const std::uint64_t p = open_of(x);
  const std::uint64_t c = find_close(p);
  return excess_.count_min(p + 1, c - 1, excess(p), fill());
}

std::uint64_t OrdinalTree::child_select(std::uint64_t x, std::uint64_t i) const {
  const std::uint64_t p = open_of(x);
  if (i == 0) return kNone;
  const std::uint64_t c = find_close(p);
  if (c == p + 1) return kNone;
  if (i == 1) return x + 1;
  const std::uint64_t pos = excess_.select_min(p + 1, c - 1, excess(p), i - 1, fill());
  if (pos == 0 || pos + 1 >= c) return kNone;
  return bits_.rank1(pos + 1);
}

std::uint64_t OrdinalTree::child_rank(std::uint64_t x) const {
  if (x == 1) {
    check_node(x);
    return 1;
  }
  const std::uint64_t y = parent(x);
  const std::uint64_t py = bits_.select1(y);
  return excess_.count_min(py + 1, bits_.select1(x) - 1, excess(py), fill()) + 1;
}

std::uint64_t OrdinalTree::postorder_rank(std::uint64_t x) const {
  const std::uint64_t c = close_of(x);
  return c - bits_.rank1(c);
}

std::uint64_t OrdinalTree::postorder_select(std::uint64_t i) const {
  if (i == 0 || i > n_) throw std::out_of_range("postorder rank " + std::to_string(i) + " out of range");
  return bits_.rank1(find_open(bits_.select0(i)));
}

std::vector<bool> OrdinalTree::parens() const {
  std::vector<bool> v(2 * n_);
  for (std::uint64_t i = 1; i <= 2 * n_; ++i) v[i - 1] = bits_.access(i);
  return v;
}

std::string OrdinalTree::to_string() const {
  std::string s(2 * n_, ')');
  for (std::uint64_t i = 1; i <= 2 * n_; ++i)
    if (bits_.access(i)) s[i - 1] = '(';
  return s;
}

TreeShape shape_of(const OrdinalTree& t) {
  TreeShape s;
  s.parent.assign(t.size() + 1, 0);
  std::vector<std::uint32_t> stack;
  std::uint32_t next = 0;
  for (std::uint64_t i = 1; i <= t.length(); ++i) {
    if (t.paren(i)) {
      ++next;
      s.parent[next] = stack.empty() ? 0 : stack.back();
      stack.push_back(next);
    } else {
      stack.pop_back();
    }
  }
  return s;
}

std::vector<bool> parens_of(const TreeShape& s) {
  std::vector<bool> out;
  out.reserve(2 * s.size());
  std::vector<std::uint32_t> stack;
  for (std::uint32_t v = 1; v <= s.size(); ++v) {
    while (!stack.empty() && stack.back() != s.parent[v]) {
      stack.pop_back();
      out.push_back(false);
    }
    out.push_back(true);
    stack.push_back(v);
  }
  while (!stack.empty()) {
    stack.pop_back();
    out.push_back(false);
  }
  return out;
}

}  // namespace slt
