#include "slt/weighted_tree.hpp"

#include <algorithm>
#include <string>

namespace slt {

void WeightedTree::Fill::operator()(std::uint64_t first, std::uint64_t count, std::int64_t* out) const {
  const PlainBitVector& bits = t->tree_.bits();
  std::uint64_t ones = bits.rank1(first - 1);
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t p = first + k;
    if (bits.access(p)) {
      ++ones;
      switch (f.kind) {
        case StepFunction::Kind::phi: out[k] = t->raw_weight(f.a, ones); break;
        case StepFunction::Kind::pi: out[k] = t->raw_weight(f.a, ones); break;
        case StepFunction::Kind::eps: out[k] = 1; break;
      }
    } else {
      const std::uint64_t post = p - ones;
      switch (f.kind) {
        case StepFunction::Kind::phi: out[k] = t->close_weight(f.b, post); break;
        case StepFunction::Kind::pi: out[k] = -static_cast<std::int64_t>(t->close_weight(f.a, post)); break;
        case StepFunction::Kind::eps: out[k] = -1; break;
      }
    }
  }
}

WeightedTree::WeightedTree(OrdinalTree skeleton, const std::vector<std::vector<std::uint32_t>>& weights,
                           std::uint32_t X, std::uint32_t block, std::vector<StepFunction> functions)
    : tree_(std::move(skeleton)), s_(static_cast<std::uint32_t>(weights.size())), X_(X), block_(block),
      functions_(std::move(functions)) {
  if (s_ == 0) throw std::invalid_argument("weighted tree: need at least one weight function");
  if (X == 0) throw std::invalid_argument("weighted tree: weight bound must be >= 1");
  const std::uint64_t n = tree_.size();
  const unsigned width = bits_for(X - 1);
  w_.reserve(s_);
  for (std::uint32_t a = 0; a < s_; ++a) {
    if (weights[a].size() != n)
      throw std::invalid_argument("weighted tree: weight " + std::to_string(a + 1) + " has " +
                                  std::to_string(weights[a].size()) + " entries, expected " + std::to_string(n));
    IntVector v(n, width);
    for (std::uint64_t x = 0; x < n; ++x) {
      if (weights[a][x] >= X)
        throw std::invalid_argument("weighted tree: w" + std::to_string(a + 1) + "(" + std::to_string(x + 1) +
                                    ") = " + std::to_string(weights[a][x]) + " not below bound " +
                                    std::to_string(X));
      v.set(x, weights[a][x]);
    }
    w_.push_back(std::move(v));
  }
  if (functions_.empty()) {
    functions_.push_back(StepFunction::eps());
    for (std::uint32_t a = 1; a <= s_; ++a) functions_.push_back(StepFunction::pi(a));
  }
  for (const auto& f : functions_) check_function(f);

  // Postorder copies for weights read at closes, plus child lists of wide nodes.
  std::vector<bool> need_close(s_ + 1, false);
  for (const auto& f : functions_) {
    if (f.kind == StepFunction::Kind::phi) need_close[f.b] = true;
    if (f.kind == StepFunction::Kind::pi) need_close[f.a] = true;
  }
  close_w_.resize(s_);
  for (std::uint32_t a = 1; a <= s_; ++a)
    if (need_close[a]) close_w_[a - 1] = IntVector(n, width);
  std::vector<std::uint64_t> stack;
  std::vector<std::uint32_t> degree(n + 1, 0);
  std::uint64_t ones = 0, post = 0;
  for (std::uint64_t i = 1; i <= tree_.length(); ++i) {
    if (tree_.paren(i)) {
      ++ones;
      if (!stack.empty()) ++degree[stack.back()];
      stack.push_back(ones);
    } else {
      ++post;
      const std::uint64_t x = stack.back();
      stack.pop_back();
      for (std::uint32_t a = 1; a <= s_; ++a)
        if (need_close[a]) close_w_[a - 1].set(post - 1, raw_weight(a, x));
    }
  }
  for (std::uint64_t x = 1; x <= n; ++x) {
    if (degree[x] <= block_) continue;
    auto& sums = wide_[x];
    sums.assign(s_, {});
    for (std::uint64_t y = x + 1; y < x + tree_.subtree_size(x); y += tree_.subtree_size(y))
      for (std::uint32_t a = 1; a <= s_; ++a)
        sums[a - 1].push_back((sums[a - 1].empty() ? 0 : sums[a - 1].back()) + raw_weight(a, y));
  }

  dirs_.reserve(functions_.size());
  for (const auto& f : functions_) dirs_.push_back({f, BlockedSearch(tree_.length(), block_, Fill{this, f})});
}

void WeightedTree::check_weight_index(std::uint32_t a, bool allow_zero) const {
  if ((a == 0 && !allow_zero) || a > s_)
    throw std::out_of_range("weight index " + std::to_string(a) + " out of range");
}

void WeightedTree::check_function(const StepFunction& f) const {
  switch (f.kind) {
    case StepFunction::Kind::phi:
      check_weight_index(f.a, true);
      check_weight_index(f.b, true);
      break;
    case StepFunction::Kind::pi: check_weight_index(f.a, true); break;
    case StepFunction::Kind::eps: break;
  }
}

void WeightedTree::check_position(std::uint64_t i) const {
  if (i == 0 || i > tree_.length()) throw std::out_of_range("position " + std::to_string(i) + " out of range");
}

std::uint32_t WeightedTree::close_weight(std::uint32_t a, std::uint64_t post) const {
  if (a == 0) return 0;
  const IntVector& c = close_w_[a - 1];
  if (c.size() != 0) return static_cast<std::uint32_t>(c.get(post - 1));
  return raw_weight(a, tree_.postorder_select(post));
}

const BlockedSearch& WeightedTree::directory(const StepFunction& f, BlockedSearch& tmp) const {
  check_function(f);
  for (const auto& d : dirs_)
    if (d.f == f) return d.search;
  tmp = BlockedSearch(tree_.length(), block_, Fill{this, f});
  return tmp;
}

std::int64_t WeightedTree::prefix(const StepFunction& f, std::uint64_t k) const {
  BlockedSearch tmp;
  return directory(f, tmp).prefix(k, Fill{this, f});
}

std::uint32_t WeightedTree::weight(std::uint32_t a, std::uint64_t x) const {
  check_weight_index(a, false);
  if (x == 0 || x > size()) throw std::out_of_range("node " + std::to_string(x) + " out of range");
  return raw_weight(a, x);
}

std::int64_t WeightedTree::base_sum(const StepFunction& f, std::uint64_t i, std::uint64_t j) const {
  check_position(i);
  check_position(j);
  if (i > j) throw std::out_of_range("sum: empty range");
  BlockedSearch tmp;
  const auto& d = directory(f, tmp);
  return d.prefix(j, Fill{this, f}) - d.prefix(i - 1, Fill{this, f});
}

std::uint64_t WeightedTree::fwd_search(const StepFunction& f, std::uint64_t i, std::int64_t d) const {
  check_position(i);
  BlockedSearch tmp;
  const auto& dir = directory(f, tmp);
  return dir.first_ge(i, dir.prefix(i - 1, Fill{this, f}) + d, Fill{this, f});
}

std::uint64_t WeightedTree::bwd_search(const StepFunction& f, std::uint64_t i, std::int64_t d) const {
  check_position(i);
  BlockedSearch tmp;
  const auto& dir = directory(f, tmp);
  const auto k = dir.last_le(i - 1, dir.prefix(i, Fill{this, f}) - d, Fill{this, f});
  return k ? *k + 1 : kNone;
}

std::uint64_t WeightedTree::rmqi(const StepFunction& f, std::uint64_t i, std::uint64_t j) const {
  check_position(i);
  check_position(j);
  if (i > j) throw std::out_of_range("rmqi: empty range");
  BlockedSearch tmp;
  const auto& dir = directory(f, tmp);
  return dir.first_ge(i, dir.range_max(i, j, Fill{this, f}), Fill{this, f});
}

std::uint64_t WeightedTree::wdepth(std::uint32_t a, std::uint64_t x) const {
  check_weight_index(a, false);
  return static_cast<std::uint64_t>(prefix(StepFunction::pi(a), tree_.open_of(x)));
}

std::uint64_t WeightedTree::wlevel_ancestor(std::uint32_t a, std::uint64_t x, std::uint64_t i) const {
  check_weight_index(a, false);
  const std::uint64_t p = tree_.open_of(x);
  if (i == 0) return x;
  const StepFunction f = StepFunction::pi(a);
  BlockedSearch tmp;
  const auto& dir = directory(f, tmp);
  const std::int64_t t = dir.prefix(p - 1, Fill{this, f}) - static_cast<std::int64_t>(i);
  if (t < 0) return kNone;
  const auto k = dir.last_le(p - 1, t, Fill{this, f});
  return k ? tree_.node_of(*k + 1) : kNone;
}

template <class Visit>
void WeightedTree::for_each_child(std::uint64_t x, Visit&& visit) const {
  const std::uint64_t end = x + tree_.subtree_size(x);
  for (std::uint64_t y = x + 1; y < end; y += tree_.subtree_size(y))
    if (!visit(y)) return;
}

const std::vector<std::uint64_t>* WeightedTree::child_prefix(std::uint32_t a, std::uint64_t x) const {
  const auto it = wide_.find(x);
  return it == wide_.end() ? nullptr : &it->second[a - 1];
}

std::uint64_t WeightedTree::wdeg(std::uint32_t a, std::uint64_t x) const {
  check_weight_index(a, false);
  if (x == 0 || x > size()) throw std::out_of_range("node " + std::to_string(x) + " out of range");
  if (const auto* pre = child_prefix(a, x)) return pre->back();
  std::uint64_t sum = 0;
  for_each_child(x, [&](std::uint64_t y) {
    sum += raw_weight(a, y);
    return true;
  });
  return sum;
}

std::uint64_t WeightedTree::wchild_rank(std::uint32_t a, std::uint64_t x) const {
  check_weight_index(a, false);
  const std::uint64_t p = tree_.parent(x);
  if (p == kNone) return raw_weight(a, x);
  if (const auto* pre = child_prefix(a, p)) return (*pre)[tree_.child_rank(x) - 1];
  std::uint64_t sum = 0;
  for_each_child(p, [&](std::uint64_t y) {
    sum += raw_weight(a, y);
    return y != x;
  });
  return sum;
}

std::uint64_t WeightedTree::wchild_select(std::uint32_t a, std::uint64_t x, std::uint64_t i) const {
  check_weight_index(a, false);
  if (x == 0 || x > size()) throw std::out_of_range("node " + std::to_string(x) + " out of range");
  if (const auto* pre = child_prefix(a, x)) {
    const auto it = std::lower_bound(pre->begin(), pre->end(), i);
    if (it == pre->end()) return kNone;
    return tree_.child_select(x, static_cast<std::uint64_t>(it - pre->begin()) + 1);
  }
  std::uint64_t sum = 0, found = kNone;
  for_each_child(x, [&](std::uint64_t y) {
    sum += raw_weight(a, y);
    if (sum >= i) found = y;
    return found == kNone;
  });
  return found;
}

std::uint64_t WeightedTree::wnum_descendants(std::uint32_t a, std::uint64_t x) const {
  check_weight_index(a, false);
  const std::uint64_t open = tree_.open_of(x);
  return static_cast<std::uint64_t>(base_sum(StepFunction::phi(a, 0), open, tree_.close_of(x))) - raw_weight(a, x);
}

std::uint64_t WeightedTree::bp_rank(std::uint32_t a, std::uint32_t b, std::uint64_t i) const {
  if (i > tree_.length()) throw std::out_of_range("position " + std::to_string(i) + " out of range");
  return static_cast<std::uint64_t>(prefix(StepFunction::phi(a, b), i));
}

std::uint64_t WeightedTree::bp_select(std::uint32_t a, std::uint32_t b, std::uint64_t i) const {
  return fwd_search(StepFunction::phi(a, b), 1, static_cast<std::int64_t>(i));
}

std::uint64_t WeightedTree::size_in_bits() const {
  std::uint64_t bits = tree_.size_in_bits() + 128;
  for (const auto& v : w_) bits += v.size_in_bits();
  for (const auto& v : close_w_) bits += v.size_in_bits();
  for (const auto& d : dirs_) bits += d.search.size_in_bits() + 72;
  for (const auto& [x, sums] : wide_) {
    bits += 64;
    for (const auto& s : sums) bits += 64 * s.size();
  }
  return bits;
}

void WeightedTree::save(ByteWriter& out) const {
  BitVector(tree_.parens()).save(out);
  out.u32(tree_.block_size());
  out.u32(block_);
  out.u32(s_);
  out.u32(X_);
  const bool narrow = X_ <= 256;
  for (std::uint32_t a = 1; a <= s_; ++a)
    for (std::uint64_t x = 1; x <= size(); ++x) {
      if (narrow) out.u8(static_cast<std::uint8_t>(raw_weight(a, x)));
      else out.u32(raw_weight(a, x));
    }
  out.u32(static_cast<std::uint32_t>(functions_.size()));
  for (const auto& f : functions_) {
    out.u8(static_cast<std::uint8_t>(f.kind));
    out.u32(f.a);
    out.u32(f.b);
  }
}

WeightedTree WeightedTree::load(ByteReader& in) {
  const BitVector parens = BitVector::load(in);
  const std::uint32_t tree_block = in.u32();
  const std::uint32_t block = in.u32();
  const std::uint32_t s = in.u32();
  const std::uint32_t X = in.u32();
  OrdinalTree tree(parens.to_bits(), tree_block);
  const bool narrow = X <= 256;
  std::vector<std::vector<std::uint32_t>> weights(s, std::vector<std::uint32_t>(tree.size()));
  for (auto& w : weights)
    for (auto& v : w) v = narrow ? in.u8() : in.u32();
  const std::uint32_t nf = in.u32();
  std::vector<StepFunction> functions(nf);
  for (auto& f : functions) {
    const std::uint8_t kind = in.u8();
    if (kind > 2) throw std::invalid_argument("weighted tree: corrupt step function");
    f.kind = static_cast<StepFunction::Kind>(kind);
    f.a = in.u32();
    f.b = in.u32();
  }
  return WeightedTree(std::move(tree), weights, X, block, std::move(functions));
}

}  // namespace slt
