#include "slt/labeled_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace slt {

namespace {

constexpr std::uint32_t kW1 = 1, kW2 = 2, kW3 = 3, kW4 = 4, kW5 = 5, kW6 = 6, kW7 = 7, kW8 = 8, kW9 = 9;

enum Section : std::uint32_t { kConfig = 1, kLabels = 2, kShape = 3, kMerged = 4, kN = 5, kF = 6 };
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::vector<std::uint32_t> subtree_ends(const TreeShape& t) {
  const std::uint64_t n = t.size();
  std::vector<std::uint32_t> size(n + 1, 1), end(n + 1, 0);
  for (std::uint64_t x = n; x >= 2; --x) size[t.parent[x]] += size[x];
  for (std::uint64_t x = 1; x <= n; ++x) end[x] = static_cast<std::uint32_t>(x + size[x] - 1);
  return end;
}

AlphaTree alpha_tree(const TreeShape& t, const std::vector<std::uint32_t>& ends,
                     const std::vector<std::uint32_t>& alpha_nodes) {
  AlphaTree at;
  at.nodes = alpha_nodes;
  for (std::uint32_t y : alpha_nodes)
    if (t.parent[y] != 0) at.nodes.push_back(t.parent[y]);
  std::sort(at.nodes.begin(), at.nodes.end());
  at.nodes.erase(std::unique(at.nodes.begin(), at.nodes.end()), at.nodes.end());
  at.shape.parent.assign(at.nodes.size() + 2, 0);
  std::vector<std::uint32_t> stack;  // local ids on the current root path
  for (std::uint32_t k = 2; k < at.shape.parent.size(); ++k) {
    const std::uint32_t node = at.nodes[k - 2];
    while (!stack.empty() && ends[at.nodes[stack.back() - 2]] < node) stack.pop_back();
    at.shape.parent[k] = stack.empty() ? 1 : stack.back();
    stack.push_back(k);
  }
  return at;
}

std::uint32_t default_L(std::uint64_t n, std::uint32_t /*sigma*/) {
  const double v = std::log2(std::log2(static_cast<double>(std::max<std::uint64_t>(n, 4))));
  return std::max<std::uint32_t>(2, static_cast<std::uint32_t>(std::ceil(v - 1e-9)));
}

std::uint64_t& LabeledTreeIndex::scan_counter() {
  thread_local std::uint64_t counter = 0;
  return counter;
}

LabeledTreeIndex::LabeledTreeIndex(const PlainTree& t, IndexConfig cfg)
    : LabeledTreeIndex(t.parens(), t.preorder_labels(), t.sigma, cfg) {}

LabeledTreeIndex::LabeledTreeIndex(const std::vector<bool>& parens, const std::vector<std::uint32_t>& labels,
                                   std::uint32_t sigma, IndexConfig cfg)
    : shape_(parens, cfg.block_size), cfg_(cfg) {
  const std::uint64_t n = shape_.size();
  if (labels.size() != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " labels, got " + std::to_string(labels.size()));
  if (sigma == 0) throw std::invalid_argument("alphabet size must be >= 1");
  std::uint32_t max_label = 0;
  for (std::uint64_t x = 0; x < n; ++x) {
    if (labels[x] == 0 || labels[x] > sigma)
      throw std::invalid_argument("label " + std::to_string(labels[x]) + " of node " + std::to_string(x + 1) +
                                  " outside [1," + std::to_string(sigma) + "]");
    max_label = std::max(max_label, labels[x]);
  }
  if (sigma > n) {
    if (max_label > n)
      throw std::invalid_argument("alphabet size " + std::to_string(sigma) + " exceeds n = " + std::to_string(n) +
                                  " and label " + std::to_string(max_label) + " cannot be clamped");
    sigma = static_cast<std::uint32_t>(n);
  }
  if (cfg_.L == 0) cfg_.L = default_L(n, sigma);
  labels_ = LabeledSequence(labels, sigma);
  build_merged(labels);
}

LabeledTreeIndex::LabeledTreeIndex(LabeledSequence labels, OrdinalTree shape, WeightedTree merged, BitVector n,
                                   BitVector f, IndexConfig cfg)
    : labels_(std::move(labels)), shape_(std::move(shape)), merged_(std::move(merged)), n_(std::move(n)),
      f_(std::move(f)), cfg_(cfg) {}

void LabeledTreeIndex::build_merged(const std::vector<std::uint32_t>& labels) {
  const std::uint64_t n = shape_.size();
  const std::uint32_t sigma = labels_.sigma();
  const std::uint32_t L = cfg_.L;
  const TreeShape t = shape_of(shape_);
  const std::vector<std::uint32_t> end = subtree_ends(t);
  std::vector<bool> fbits(sigma, false);
  std::vector<std::vector<std::uint32_t>> positions(sigma + 1);
  for (std::uint32_t a = 1; a <= sigma; ++a) fbits[a - 1] = labels_.count(a) >= L;
  for (std::uint64_t x = 1; x <= n; ++x)
    if (fbits[labels[x - 1] - 1]) positions[labels[x - 1]].push_back(static_cast<std::uint32_t>(x));

  std::vector<bool> tparens{true};
  std::vector<std::vector<std::uint32_t>> weights(9, std::vector<std::uint32_t>{0});
  std::vector<bool> nbits;

  for (std::uint32_t a = 1; a <= sigma; ++a) {
    if (!fbits[a - 1]) continue;
    const AlphaTree at = alpha_tree(t, end, positions[a]);
    positions[a] = {};
    const TreeShape& local = at.shape;
    const std::vector<std::uint32_t>& xs = at.nodes;
    auto node_of = [&](std::uint32_t k) { return xs[k - 2]; };
    auto is_alpha = [&](std::uint32_t k) { return k >= 2 && labels[node_of(k) - 1] == a; };

    const Decomposition d = decompose(local, L);
    if (cfg_.verify_decompositions)
      checks_.push_back({a, local.size(), verify_decomposition(local, d, cfg_.c_max)});
    const MacroTree m = macro_tree(local, d);

    for (const Component& c : m.components) {
      std::uint32_t wv[10] = {0};
      if (c.i1_lo != 0) {
        const std::uint32_t s = node_of(c.special);
        std::uint32_t idx = 0;
        auto visit = [&](std::uint32_t k) {
          if (!is_alpha(k)) return;
          ++idx;
          ++wv[kW1];
          if (k <= c.special) ++wv[kW2];
          const std::uint32_t x = node_of(k);
          if (x <= s && s <= end[x]) ++wv[kW4];
          if (local.parent[k] == c.root) {
            ++wv[kW5];
            if (wv[kW6] == 0) wv[kW6] = idx;
          }
        };
        for (std::uint32_t k = c.i1_lo; k <= c.i1_hi; ++k) visit(k);
        if (c.i2_lo != 0)
          for (std::uint32_t k = c.i2_lo; k <= c.i2_hi; ++k) visit(k);
        wv[kW3] = wv[kW1] - wv[kW2];
        wv[kW7] = is_alpha(c.special) ? 1 : 0;
        wv[kW8] = wv[kW2] - wv[kW4];
        wv[kW9] = wv[kW1] - wv[kW8];
      }
      for (std::uint32_t w = 1; w <= 9; ++w) weights[w - 1].push_back(wv[w]);
    }
    const auto mp = m.tree.parens();
    tparens.insert(tparens.end(), mp.begin(), mp.end());
    nbits.push_back(true);
    nbits.insert(nbits.end(), m.size(), false);
  }
  tparens.push_back(false);

  merged_ = WeightedTree(OrdinalTree(tparens, cfg_.block_size), weights, 2 * L + 2, cfg_.block_size,
                         {StepFunction::phi(2, 3), StepFunction::phi(8, 9), StepFunction::phi(5, 0),
                          StepFunction::pi(4)});
  n_ = BitVector(nbits);
  f_ = BitVector(fbits);
}

void LabeledTreeIndex::check_alpha(std::uint32_t alpha) const {
  if (alpha == 0 || alpha > sigma()) throw std::out_of_range("label " + std::to_string(alpha) + " out of range");
}

void LabeledTreeIndex::check_node(std::uint64_t x) const {
  if (x == 0 || x > size()) throw std::out_of_range("node " + std::to_string(x) + " out of range");
}

bool LabeledTreeIndex::frequent(std::uint32_t alpha) const {
  check_alpha(alpha);
  return f_.access(alpha);
}

LabeledTreeIndex::View LabeledTreeIndex::view(std::uint32_t alpha) const {
  if (!frequent(alpha)) throw std::invalid_argument("label " + std::to_string(alpha) + " is not frequent");
  View v;
  v.alpha = alpha;
  const std::uint64_t j = f_.rank(true, alpha);
  const std::uint64_t s = n_.select(true, j);
  const std::uint64_t next = j < f_.count(true) ? n_.select(true, j + 1) : n_.size() + 1;
  v.root = s - j + 2;
  v.size = next - s - 1;
  const std::uint64_t open = merged_.tree().open_of(v.root);
  v.base23 = merged_.bp_rank(2, 3, open - 1);
  return v;
}

Intervals LabeledTreeIndex::intervals(const View& v, std::uint64_t g) const {
  const OrdinalTree& M = merged_.tree();
  Intervals iv;
  iv.r1 = merged_.bp_rank(2, 3, M.open_of(g)) - v.base23;
  iv.l1 = iv.r1 + 1 - w(kW2, g);
  iv.r2 = merged_.bp_rank(2, 3, M.close_of(g)) - v.base23;
  iv.l2 = iv.r2 + 1 - w(kW3, g);
  return iv;
}

LabeledTreeIndex::NodeList LabeledTreeIndex::members(const View& v, std::uint64_t g) const {
  const Intervals iv = intervals(v, g);
  NodeList out;
  out.reserve(w(kW1, g));
  for (std::uint64_t s = iv.l1; s <= iv.r1; ++s) out.push_back(labels_.select(v.alpha, s));
  for (std::uint64_t s = iv.l2; s <= iv.r2; ++s) out.push_back(labels_.select(v.alpha, s));
  scan_counter() += out.size();
  return out;
}

std::uint64_t LabeledTreeIndex::c_of(const View& v, std::uint64_t g) const {
  const std::uint32_t w6 = w(kW6, g);
  if (w6 == 0) return kNone;
  const Intervals iv = intervals(v, g);
  const std::uint32_t w2 = w(kW2, g);
  const std::uint64_t k = w6 <= w2 ? iv.l1 + w6 - 1 : iv.l2 + w6 - w2 - 1;
  return labels_.select(v.alpha, k);
}

MapResult LabeledTreeIndex::result(const View& v, std::uint64_t g, bool special) const {
  return MapResult{g, g - v.root + 1, special};
}

std::optional<MapResult> LabeledTreeIndex::map_alpha_node(const View& v, std::uint64_t x) const {
  const std::uint64_t k = labels_.rank(v.alpha, x);
  const std::uint64_t p = merged_.bp_select(2, 3, v.base23 + k);
  const std::uint64_t g = merged_.tree().node_of(p);
  const bool special = w(kW7, g) == 1 && k == intervals(v, g).r1;
  return result(v, g, special);
}

std::optional<MapResult> LabeledTreeIndex::map_any(const View& v, std::uint64_t x) const {
  if (labels_.access(x) == v.alpha) return map_alpha_node(v, x);
  const OrdinalTree& M = merged_.tree();
  const std::uint64_t last = x + shape_.subtree_size(x) - 1;
  const std::uint64_t r0 = labels_.rank(v.alpha, x), re = labels_.rank(v.alpha, last);
  if (re == r0) return std::nullopt;
  const std::uint64_t u = labels_.select(v.alpha, r0 + 1), w_ = labels_.select(v.alpha, re);
  const std::uint64_t gu = map_alpha_node(v, u)->node, gv = map_alpha_node(v, w_)->node;

  if (shape_.lca(u, w_) != x) {
    if (shape_.parent(u) != x) return std::nullopt;
    if (c_of(v, gu) == u) return result(v, M.parent(gu), true);
    return result(v, gu, false);
  }
  auto within = [&](std::uint64_t g) -> std::optional<MapResult> {
    const auto mem = members(v, g);
    if (std::none_of(mem.begin(), mem.end(), [&](std::uint64_t m) { return shape_.parent(m) == x; }))
      return std::nullopt;
    const std::uint64_t c = c_of(v, g);
    if (c != kNone && shape_.parent(c) == x) return result(v, M.parent(g), true);
    return result(v, g, false);
  };
  if (M.is_ancestor(gu, gv)) return within(gu);
  if (M.is_ancestor(gv, gu)) return within(gv);
  // The special node of the macro lca is the lowest per-label node above x;
  // it is x exactly when some child component holds an alpha-child of x.
  const std::uint64_t g = M.lca(gu, gv);
  if (w(kW7, g) == 1) return std::nullopt;
  const std::uint64_t y = merged_.wchild_select(5, g, 1);
  if (y == kNone) return std::nullopt;
  const std::uint64_t c = c_of(v, y);
  if (c == kNone || shape_.parent(c) != x) return std::nullopt;
  return result(v, g, true);
}

bool LabeledTreeIndex::post_before(std::uint64_t a, std::uint64_t b) const {
  if (a == b) return false;
  if (t_ancestor(b, a)) return true;
  return a < b && !t_ancestor(a, b);
}

std::uint64_t LabeledTreeIndex::predecessor(std::uint32_t alpha, std::uint64_t x) const {
  const std::uint64_t r = labels_.rank(alpha, x);
  return r == 0 ? kNone : labels_.select(alpha, r);
}

LabeledTreeIndex::NodeList LabeledTreeIndex::enumerate(std::uint32_t alpha) const {
  NodeList out(labels_.count(alpha));
  for (std::uint64_t k = 0; k < out.size(); ++k) out[k] = labels_.select(alpha, k + 1);
  return out;
}

std::uint64_t LabeledTreeIndex::walk_up(const View& v, std::uint64_t a, std::uint64_t j) const {
  const std::uint64_t g = map_alpha_node(v, a)->node;
  const auto mem = members(v, g);
  for (auto it = mem.rbegin(); it != mem.rend(); ++it)
    if (*it != a && t_ancestor(*it, a) && --j == 0) return *it;
  const std::uint64_t z = merged_.wlevel_ancestor(4, g, j);
  if (z == kNone) return kNone;
  j -= merged_.wdepth(4, merged_.tree().parent(g)) - merged_.wdepth(4, z);
  const auto upper = members(v, z);
  for (auto it = upper.rbegin(); it != upper.rend(); ++it)
    if (t_ancestor(*it, a) && --j == 0) return *it;
  throw std::logic_error("level_ancestor: weighted ancestor and member scan disagree");
}

LabeledTreeIndex::Anchor LabeledTreeIndex::anchor(std::uint32_t alpha, std::uint64_t x) const {
  // x is not an alpha-node. Its alpha-ancestors are those of the nearest
  // alpha-node before it, or of lca(that node, x).
  const std::uint64_t u = predecessor(alpha, x);
  if (u == kNone) return {};
  if (t_ancestor(u, x)) return {u, true};
  const std::uint64_t c = shape_.lca(u, x);
  if (labels_.access(c) == alpha) return {c, true};
  return {labels_.select(alpha, labels_.rank(alpha, c) + 1), false};
}

std::uint64_t LabeledTreeIndex::depth_of_alpha_node(const View& v, std::uint64_t x) const {
  const std::uint64_t g = map_alpha_node(v, x)->node;
  const auto mem = members(v, g);
  const auto i = static_cast<std::uint64_t>(
      std::count_if(mem.begin(), mem.end(), [&](std::uint64_t m) { return t_ancestor(m, x); }));
  return i + merged_.wdepth(4, g) - w(kW4, g);
}

std::uint32_t LabeledTreeIndex::label(std::uint64_t x) const {
  check_node(x);
  return labels_.access(x);
}

std::uint64_t LabeledTreeIndex::preorder_rank(std::uint32_t alpha, std::uint64_t x) const {
  check_alpha(alpha);
  check_node(x);
  return labels_.rank(alpha, x);
}

std::uint64_t LabeledTreeIndex::preorder_select(std::uint32_t alpha, std::uint64_t i) const {
  check_alpha(alpha);
  if (i == 0 || i > labels_.count(alpha)) throw std::out_of_range("preorder_select: no such node");
  return labels_.select(alpha, i);
}

std::uint64_t LabeledTreeIndex::num_descendants(std::uint32_t alpha, std::uint64_t x) const {
  check_alpha(alpha);
  check_node(x);
  return labels_.rank(alpha, x + shape_.subtree_size(x) - 1) - labels_.rank(alpha, x);
}

std::uint64_t LabeledTreeIndex::depth(std::uint32_t alpha, std::uint64_t x) const {
  check_alpha(alpha);
  check_node(x);
  if (!frequent(alpha)) {
    const auto all = enumerate(alpha);
    return static_cast<std::uint64_t>(
        std::count_if(all.begin(), all.end(), [&](std::uint64_t a) { return t_ancestor(a, x); }));
  }
  const View v = view(alpha);
  if (labels_.access(x) == alpha) return depth_of_alpha_node(v, x);
  const Anchor an = anchor(alpha, x);
  if (an.node == kNone) return 0;
  const std::uint64_t d = depth_of_alpha_node(v, an.node);
  return an.self_included ? d : d - 1;
}

std::uint64_t LabeledTreeIndex::level_ancestor(std::uint32_t alpha, std::uint64_t x, std::uint64_t i) const {
  check_alpha(alpha);
  check_node(x);
  if (i == 0) throw std::out_of_range("level_ancestor: i must be >= 1");
  if (!frequent(alpha)) {
    NodeList above;
    for (std::uint64_t a : enumerate(alpha))
      if (a != x && t_ancestor(a, x)) above.push_back(a);
    return i <= above.size() ? above[above.size() - i] : kNone;
  }
  const View v = view(alpha);
  if (labels_.access(x) == alpha) return walk_up(v, x, i);
  const Anchor an = anchor(alpha, x);
  if (an.node == kNone) return kNone;
  if (!an.self_included) return walk_up(v, an.node, i);
  return i == 1 ? an.node : walk_up(v, an.node, i - 1);
}

std::uint64_t LabeledTreeIndex::deg(std::uint32_t alpha, std::uint64_t x) const {
  check_alpha(alpha);
  check_node(x);
  auto child_of_x = [&](std::uint64_t m) { return shape_.parent(m) == x; };
  if (!frequent(alpha)) {
    const auto all = enumerate(alpha);
    return static_cast<std::uint64_t>(std::count_if(all.begin(), all.end(), child_of_x));
  }
  const View v = view(alpha);
  const auto m = map_any(v, x);
  if (!m) return 0;
  if (m->special) return merged_.wdeg(5, m->node);
  const auto mem = members(v, m->node);
  return static_cast<std::uint64_t>(std::count_if(mem.begin(), mem.end(), child_of_x));
}

std::uint64_t LabeledTreeIndex::child_select(std::uint32_t alpha, std::uint64_t x, std::uint64_t i) const {
  check_alpha(alpha);
  check_node(x);
  if (i == 0) throw std::out_of_range("child_select: i must be >= 1");
  auto pick = [&](const NodeList& nodes, std::uint64_t k) -> std::uint64_t {
    for (std::uint64_t m : nodes)
      if (shape_.parent(m) == x && --k == 0) return m;
    return kNone;
  };
  if (!frequent(alpha)) return pick(enumerate(alpha), i);
  const View v = view(alpha);
  const auto m = map_any(v, x);
  if (!m) return kNone;
  if (!m->special) return pick(members(v, m->node), i);
  const std::uint64_t y = merged_.wchild_select(5, m->node, i);
  if (y == kNone) return kNone;
  i -= merged_.wchild_rank(5, y) - w(kW5, y);
  return pick(members(v, y), i);
}

std::uint64_t LabeledTreeIndex::child_rank(std::uint32_t alpha, std::uint64_t x) const {
  check_alpha(alpha);
  check_node(x);
  if (x == 1) return 0;
  const std::uint64_t p = shape_.parent(x);
  auto count_left = [&](const NodeList& nodes) {
    return static_cast<std::uint64_t>(std::count_if(
        nodes.begin(), nodes.end(), [&](std::uint64_t m) { return m <= x && shape_.parent(m) == p; }));
  };
  if (!frequent(alpha)) return count_left(enumerate(alpha));
  const View v = view(alpha);
  if (labels_.access(x) == alpha) {
    const std::uint64_t g = map_alpha_node(v, x)->node;
    const std::uint64_t i = count_left(members(v, g));
    const auto mp = map_any(v, p);
    if (!mp || !mp->special) return i;
    return i + merged_.wchild_rank(5, g) - w(kW5, g);
  }
  const auto mp = map_any(v, p);
  if (!mp) return 0;
  if (!mp->special) return count_left(members(v, mp->node));
  const std::uint64_t pred = predecessor(alpha, x);
  if (pred == kNone || pred <= p) return 0;
  const OrdinalTree& M = merged_.tree();
  const std::uint64_t gv = map_alpha_node(v, pred)->node;
  const std::uint64_t wq = M.level_ancestor(gv, M.depth(gv) - M.depth(mp->node) - 1);
  return count_left(members(v, wq)) + merged_.wchild_rank(5, wq) - w(kW5, wq);
}

std::uint64_t LabeledTreeIndex::postorder_rank(std::uint32_t alpha, std::uint64_t x) const {
  check_alpha(alpha);
  check_node(x);
  const std::uint64_t through_subtree = labels_.rank(alpha, x + shape_.subtree_size(x) - 1);
  const std::uint64_t proper_ancestors = depth(alpha, x) - (labels_.access(x) == alpha ? 1 : 0);
  return through_subtree - proper_ancestors;
}

std::uint64_t LabeledTreeIndex::postorder_select(std::uint32_t alpha, std::uint64_t i) const {
  check_alpha(alpha);
  if (i == 0 || i > labels_.count(alpha)) throw std::out_of_range("postorder_select: no such node");
  auto by_post = [&](std::uint64_t a, std::uint64_t b) { return post_before(a, b); };
  if (!frequent(alpha)) {
    auto all = enumerate(alpha);
    std::sort(all.begin(), all.end(), by_post);
    return all[i - 1];
  }
  View v = view(alpha);
  const OrdinalTree& M = merged_.tree();
  v.base89 = merged_.bp_rank(8, 9, M.open_of(v.root) - 1);
  const std::uint64_t p = merged_.bp_select(8, 9, v.base89 + i);
  const std::uint64_t g = M.node_of(p);
  const std::uint64_t j = i - (merged_.bp_rank(8, 9, p - 1) - v.base89);
  const auto mem = members(v, g);
  const std::uint32_t n1 = w(kW2, g), w4 = w(kW4, g);
  // Members above the special node: the first w4 of the I1 chain ending at the last I1 member.
  std::vector<bool> above(mem.size(), false);
  std::uint32_t taken = 0;
  for (std::uint32_t k = 0; k < n1 && taken < w4; ++k)
    if (t_ancestor(mem[k], mem[n1 - 1])) above[k] = true, ++taken;
  NodeList bucket;
  const bool open = M.paren(p);
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const bool closes = k >= n1 || above[k];
    if (closes != open) bucket.push_back(mem[k]);
  }
  if (j == 0 || j > bucket.size()) throw std::logic_error("postorder_select: bucket does not hold the answer");
  std::sort(bucket.begin(), bucket.end(), by_post);
  return bucket[j - 1];
}

std::uint64_t LabeledTreeIndex::answer(const Query& q) const {
  switch (q.kind) {
    case QueryKind::label: return label(q.x);
    case QueryKind::depth: return depth(q.alpha, q.x);
    case QueryKind::level_ancestor: return level_ancestor(q.alpha, q.x, q.i);
    case QueryKind::parent: return parent(q.alpha, q.x);
    case QueryKind::deg: return deg(q.alpha, q.x);
    case QueryKind::child_rank: return child_rank(q.alpha, q.x);
    case QueryKind::child_select: return child_select(q.alpha, q.x, q.i);
    case QueryKind::num_descendants: return num_descendants(q.alpha, q.x);
    case QueryKind::preorder_rank: return preorder_rank(q.alpha, q.x);
    case QueryKind::preorder_select: return preorder_select(q.alpha, q.x);
    case QueryKind::postorder_rank: return postorder_rank(q.alpha, q.x);
    case QueryKind::postorder_select: return postorder_select(q.alpha, q.x);
  }
  throw std::logic_error("unhandled query kind");
}

std::uint64_t LabeledTreeIndex::merged_offset(std::uint32_t alpha) const { return view(alpha).root; }

std::uint64_t LabeledTreeIndex::macro_size(std::uint32_t alpha) const { return view(alpha).size; }

std::optional<MapResult> LabeledTreeIndex::map_node(std::uint32_t alpha, std::uint64_t x) const {
  const View v = view(alpha);
  check_node(x);
  return map_any(v, x);
}

Intervals LabeledTreeIndex::intervals_of(std::uint32_t alpha, std::uint64_t local) const {
  const View v = view(alpha);
  if (local == 0 || local > v.size) throw std::out_of_range("macro node " + std::to_string(local) + " out of range");
  return intervals(v, v.root + local - 1);
}

std::vector<std::uint64_t> LabeledTreeIndex::v_set(std::uint32_t alpha, std::uint64_t local) const {
  const View v = view(alpha);
  if (local == 0 || local > v.size) throw std::out_of_range("macro node " + std::to_string(local) + " out of range");
  const NodeList m = members(v, v.root + local - 1);
  return {m.begin(), m.end()};
}

std::uint64_t LabeledTreeIndex::c_node(std::uint32_t alpha, std::uint64_t local) const {
  const View v = view(alpha);
  if (local == 0 || local > v.size) throw std::out_of_range("macro node " + std::to_string(local) + " out of range");
  return c_of(v, v.root + local - 1);
}

std::array<std::uint32_t, 9> LabeledTreeIndex::macro_weights(std::uint32_t alpha, std::uint64_t local) const {
  const View v = view(alpha);
  if (local == 0 || local > v.size) throw std::out_of_range("macro node " + std::to_string(local) + " out of range");
  std::array<std::uint32_t, 9> out{};
  for (std::uint32_t a = 1; a <= 9; ++a) out[a - 1] = w(a, v.root + local - 1);
  return out;
}

SpaceReport LabeledTreeIndex::space_report() const {
  SpaceReport r;
  r.n = size();
  r.sigma = sigma();
  r.L = cfg_.L;
  r.h0 = labels_.entropy();
  r.labels_bits = labels_.size_in_bits();
  r.shape_bits = shape_.size_in_bits();
  r.merged_bits = merged_.size_in_bits();
  r.n_bits = n_.size_in_bits();
  r.f_bits = f_.size_in_bits();
  r.merged_nodes = merged_.size();
  r.total_bits = r.labels_bits + r.shape_bits + r.merged_bits + r.n_bits + r.f_bits + 192;
  r.nh0 = static_cast<double>(r.n) * r.h0;
  r.redundancy_bits = static_cast<double>(r.total_bits) - r.nh0 - 2.0 * static_cast<double>(r.n);
  r.redundancy_per_node = r.n == 0 ? 0.0 : r.redundancy_bits / static_cast<double>(r.n);
  return r;
}

std::vector<std::uint8_t> LabeledTreeIndex::serialize() const {
  std::vector<std::pair<std::uint32_t, ByteWriter>> sections;
  {
    ByteWriter w;
    w.u32(cfg_.L);
    w.u32(cfg_.block_size);
    std::uint64_t c;
    std::memcpy(&c, &cfg_.c_max, sizeof c);
    w.u64(c);
    sections.emplace_back(kConfig, std::move(w));
  }
  {
    ByteWriter w;
    const std::uint32_t width = bits_for(sigma() - 1);
    w.u32(sigma());
    w.u32(width);
    std::vector<bool> packed(size() * width);
    for (std::uint64_t x = 1; x <= size(); ++x) {
      const std::uint32_t v = labels_.access(x) - 1;
      for (std::uint32_t b = 0; b < width; ++b) packed[(x - 1) * width + b] = (v >> b) & 1u;
    }
    BitVector(packed).save(w);
    sections.emplace_back(kLabels, std::move(w));
  }
  {
    ByteWriter w;
    BitVector(shape_.parens()).save(w);
    sections.emplace_back(kShape, std::move(w));
  }
  {
    ByteWriter w;
    merged_.save(w);
    sections.emplace_back(kMerged, std::move(w));
  }
  {
    ByteWriter w;
    n_.save(w);
    sections.emplace_back(kN, std::move(w));
  }
  {
    ByteWriter w;
    f_.save(w);
    sections.emplace_back(kF, std::move(w));
  }
  ByteWriter out;
  out.bytes("SLT1", 4);
  out.u32(kVersion);
  out.u32(static_cast<std::uint32_t>(sections.size()));
  std::uint64_t offset = 12 + sections.size() * 20;
  for (const auto& [tag, w] : sections) {
    out.u32(tag);
    out.u64(offset);
    out.u64(w.buffer().size());
    offset += w.buffer().size();
  }
  for (const auto& [tag, w] : sections) out.bytes(w.buffer().data(), w.buffer().size());
  return std::move(out.buffer());
}

LabeledTreeIndex LabeledTreeIndex::deserialize(const std::vector<std::uint8_t>& bytes) {
  ByteReader head(bytes);
  char magic[4];
  head.bytes(magic, 4);
  if (std::memcmp(magic, "SLT1", 4) != 0) throw std::invalid_argument("not an SLT1 index");
  if (head.u32() != kVersion) throw std::invalid_argument("unsupported SLT1 version");
  const std::uint32_t count = head.u32();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> where(7, {0, 0});
  std::vector<bool> seen(7, false);
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t tag = head.u32();
    const std::uint64_t off = head.u64(), len = head.u64();
    if (off > bytes.size() || len > bytes.size() - off) throw std::invalid_argument("section outside the file");
    if (tag >= 1 && tag <= 6) where[tag] = {off, len}, seen[tag] = true;
  }
  for (std::uint32_t tag = 1; tag <= 6; ++tag)
    if (!seen[tag]) throw std::invalid_argument("missing section " + std::to_string(tag));
  auto reader = [&](std::uint32_t tag) { return ByteReader(bytes.data() + where[tag].first, where[tag].second); };

  IndexConfig cfg;
  {
    ByteReader r = reader(kConfig);
    cfg.L = r.u32();
    cfg.block_size = r.u32();
    const std::uint64_t c = r.u64();
    std::memcpy(&cfg.c_max, &c, sizeof c);
  }
  if (cfg.L == 0) throw std::invalid_argument("corrupt config section");
  std::uint32_t sigma;
  std::vector<std::uint32_t> labels;
  {
    ByteReader r = reader(kLabels);
    sigma = r.u32();
    const std::uint32_t width = r.u32();
    if (sigma == 0 || width == 0 || width > 32) throw std::invalid_argument("corrupt label section");
    const auto packed = BitVector::load(r).to_bits();
    labels.resize(packed.size() / width);
    for (std::uint64_t x = 0; x < labels.size(); ++x) {
      std::uint32_t v = 0;
      for (std::uint32_t b = 0; b < width; ++b) v |= static_cast<std::uint32_t>(packed[x * width + b]) << b;
      if (v >= sigma) throw std::invalid_argument("label out of alphabet in label section");
      labels[x] = v + 1;
    }
  }
  ByteReader rs = reader(kShape);
  OrdinalTree shape(BitVector::load(rs).to_bits(), cfg.block_size);
  if (shape.size() != labels.size()) throw std::invalid_argument("label count does not match the tree");
  ByteReader rm = reader(kMerged);
  WeightedTree merged = WeightedTree::load(rm);
  ByteReader rn = reader(kN);
  BitVector n = BitVector::load(rn);
  ByteReader rf = reader(kF);
  BitVector f = BitVector::load(rf);
  if (f.size() != sigma) throw std::invalid_argument("frequency string does not match the alphabet");
  if (n.count(true) != f.count(true) || n.count(false) + 1 != merged.size())
    throw std::invalid_argument("macro layout string does not match the merged tree");
  return LabeledTreeIndex(LabeledSequence(labels, sigma), std::move(shape), std::move(merged), std::move(n),
                          std::move(f), cfg);
}

void LabeledTreeIndex::save(const std::string& path) const {
  const auto bytes = serialize();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

LabeledTreeIndex LabeledTreeIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace slt
