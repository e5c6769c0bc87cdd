#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "slt/bitvector.hpp"
#include "slt/bp_tree.hpp"
#include "slt/sequence.hpp"
#include "slt/suite.hpp"
#include "slt/weighted_tree.hpp"

namespace slt {

namespace {

template <class... Parts>
std::function<std::string()> say(Parts... parts) {
  return [=] {
    std::ostringstream os;
    (os << ... << parts);
    return os.str();
  };
}

/// Throws are answers too: both sides must agree on whether a call fails.
template <class F>
std::int64_t or_error(F&& f) {
  try {
    return static_cast<std::int64_t>(f());
  } catch (const std::out_of_range&) {
    return -1;
  }
}

// Open/close positions and postorder numbers from a parent-array tree whose
// ids are preorder ranks.
struct PlainLayout {
  std::vector<std::uint64_t> open, close, post, depth, size, node_at;
  std::vector<bool> is_open;
};

PlainLayout layout(const PlainTree& t) {
  const std::uint64_t n = t.size();
  PlainLayout l;
  l.open.assign(n + 1, 0);
  l.close.assign(n + 1, 0);
  l.post.assign(n + 1, 0);
  l.depth.assign(n + 1, 0);
  l.size.assign(n + 1, 1);
  l.node_at.assign(2 * n + 1, 0);
  l.is_open.assign(2 * n + 1, false);
  std::uint64_t pos = 0, post = 0;
  std::vector<std::pair<std::uint64_t, std::size_t>> stack{{1, 0}};
  l.open[1] = ++pos;
  l.depth[1] = 1;
  while (!stack.empty()) {
    auto& [x, k] = stack.back();
    if (k < t.children[x].size()) {
      const std::uint64_t c = t.children[x][k++];
      l.open[c] = ++pos;
      l.depth[c] = l.depth[x] + 1;
      stack.emplace_back(c, 0);
    } else {
      l.close[x] = ++pos;
      l.post[x] = ++post;
      stack.pop_back();
    }
  }
  for (std::uint64_t x = n; x >= 2; --x) l.size[t.parent[x]] += l.size[x];
  for (std::uint64_t x = 1; x <= n; ++x) {
    l.node_at[l.open[x]] = x;
    l.node_at[l.close[x]] = x;
    l.is_open[l.open[x]] = true;
  }
  return l;
}

bool plain_is_ancestor(const PlainTree& t, std::uint64_t a, std::uint64_t x) {
  for (; x != 0; x = t.parent[x])
    if (x == a) return true;
  return false;
}

std::uint64_t plain_lca(const PlainTree& t, std::uint64_t x, std::uint64_t y) {
  while (!plain_is_ancestor(t, x, y)) x = t.parent[x];
  return x;
}

}  // namespace

CheckReport check_bitvector(std::uint64_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<bool> bits(n);
  for (std::uint64_t i = 0; i < n; ++i) bits[i] = coin(rng);
  const BitVector bv(bits);
  CheckReport r;
  const auto tag = [&] {
    std::ostringstream os;
    os << "bitvec seed=" << seed << " n=" << n << " density=" << density << (bv.sparse() ? " sparse" : " plain");
    return os.str();
  }();
  std::uint64_t ones = 0;
  std::vector<std::uint64_t> pos1, pos0;
  r.expect(bv.rank(true, 0) == 0 && bv.rank(false, 0) == 0, say(tag, ": rank at 0"));
  for (std::uint64_t i = 1; i <= n; ++i) {
    const bool b = bits[i - 1];
    ones += b;
    (b ? pos1 : pos0).push_back(i);
    r.expect(bv.access(i) == b, say(tag, ": access(", i, ")"));
    r.expect(bv.rank(true, i) == ones, say(tag, ": rank1(", i, ")"));
    r.expect(bv.rank(false, i) == i - ones, say(tag, ": rank0(", i, ")"));
  }
  r.expect(bv.count(true) == ones && bv.size() == n, say(tag, ": counts"));
  for (std::uint64_t j = 1; j <= pos1.size(); ++j)
    r.expect(bv.select(true, j) == pos1[j - 1], say(tag, ": select1(", j, ")"));
  for (std::uint64_t j = 1; j <= pos0.size(); ++j)
    r.expect(bv.select(false, j) == pos0[j - 1], say(tag, ": select0(", j, ")"));
  r.expect(or_error([&] { return bv.select(true, pos1.size() + 1); }) == -1, say(tag, ": select1 past end"));
  r.expect(or_error([&] { return bv.select(false, 0); }) == -1, say(tag, ": select0(0)"));
  r.expect(bv.to_bits() == bits, say(tag, ": round trip"));
  return r;
}

CheckReport check_sequence(std::uint64_t n, std::uint32_t sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> sym(1, sigma);
  std::vector<std::uint32_t> s(n);
  for (auto& c : s) c = sym(rng);
  const LabeledSequence seq(s, sigma);
  CheckReport r;
  const std::string tag = "sequence seed=" + std::to_string(seed) + " n=" + std::to_string(n) +
                          " sigma=" + std::to_string(sigma);
  std::vector<std::uint64_t> count(sigma + 1, 0);
  std::vector<std::vector<std::uint64_t>> where(sigma + 1);
  for (std::uint64_t i = 1; i <= n; ++i) {
    const std::uint32_t c = s[i - 1];
    ++count[c];
    where[c].push_back(i);
    r.expect(seq.access(i) == c, say(tag, ": access(", i, ")"));
    // Rank of every symbol at a few positions, of the stored one everywhere.
    r.expect(seq.rank(c, i) == count[c], say(tag, ": rank(", c, ",", i, ")"));
    if (i % 37 == 0)
      for (std::uint32_t a = 1; a <= sigma; ++a)
        r.expect(seq.rank(a, i) == count[a], say(tag, ": rank(", a, ",", i, ")"));
  }
  double h0 = 0.0;
  for (std::uint32_t a = 1; a <= sigma; ++a) {
    r.expect(seq.count(a) == count[a], say(tag, ": count(", a, ")"));
    for (std::uint64_t j = 1; j <= where[a].size(); ++j)
      r.expect(seq.select(a, j) == where[a][j - 1], say(tag, ": select(", a, ",", j, ")"));
    r.expect(or_error([&] { return seq.select(a, where[a].size() + 1); }) == -1, say(tag, ": select past end"));
    if (count[a] > 0)
      h0 += static_cast<double>(count[a]) / static_cast<double>(n) *
            std::log2(static_cast<double>(n) / static_cast<double>(count[a]));
  }
  r.expect(std::abs(seq.entropy() - h0) < 1e-9, say(tag, ": entropy ", seq.entropy(), " vs ", h0));
  r.expect(seq.to_vector() == s, say(tag, ": round trip"));
  return r;
}

CheckReport check_bp_tree(std::uint64_t n, std::uint32_t block, std::uint64_t seed) {
  const PlainTree t = random_labeled_tree(n, 1, seed, LabelSkew::uniform);
  const PlainLayout l = layout(t);
  const OrdinalTree ot(t.parens(), block);
  CheckReport r;
  const std::string tag = "bp_tree seed=" + std::to_string(seed) + " n=" + std::to_string(n) +
                          " block=" + std::to_string(block);
  std::mt19937_64 rng(seed ^ 0x5bd1e995);
  std::uniform_int_distribution<std::uint64_t> node(1, n);
  r.expect(ot.size() == n, say(tag, ": size"));
  for (std::uint64_t x = 1; x <= n; ++x) {
    const std::uint64_t p = t.parent[x];
    r.expect(ot.parent(x) == p, say(tag, ": parent(", x, ")"));
    r.expect(ot.depth(x) == l.depth[x], say(tag, ": depth(", x, ")"));
    r.expect(ot.subtree_size(x) == l.size[x], say(tag, ": subtree_size(", x, ")"));
    r.expect(ot.degree(x) == t.children[x].size(), say(tag, ": degree(", x, ")"));
    r.expect(ot.open_of(x) == l.open[x] && ot.close_of(x) == l.close[x], say(tag, ": open/close(", x, ")"));
    r.expect(ot.postorder_rank(x) == l.post[x], say(tag, ": postorder_rank(", x, ")"));
    r.expect(ot.postorder_select(l.post[x]) == x, say(tag, ": postorder_select(", l.post[x], ")"));
    const auto& sib = p == 0 ? std::vector<std::uint32_t>{1} : t.children[p];
    const auto rank = static_cast<std::uint64_t>(std::find(sib.begin(), sib.end(), x) - sib.begin()) + 1;
    r.expect(ot.child_rank(x) == rank, say(tag, ": child_rank(", x, ")"));
    for (std::uint64_t i = 1; i <= t.children[x].size() + 1; ++i) {
      const std::uint64_t want = i <= t.children[x].size() ? t.children[x][i - 1] : kNone;
      r.expect(ot.child_select(x, i) == want, say(tag, ": child_select(", x, ",", i, ")"));
    }
    std::uint64_t a = x;
    for (std::uint64_t d = 0; d <= l.depth[x]; ++d) {
      r.expect(ot.level_ancestor(x, d) == a, say(tag, ": level_ancestor(", x, ",", d, ")"));
      if (a != kNone) a = t.parent[a];
    }
    const std::uint64_t y = node(rng), z = node(rng);
    r.expect(ot.is_ancestor(y, z) == plain_is_ancestor(t, y, z), say(tag, ": is_ancestor(", y, ",", z, ")"));
    r.expect(ot.lca(y, z) == plain_lca(t, y, z), say(tag, ": lca(", y, ",", z, ")"));
  }
  for (std::uint64_t i = 1; i <= 2 * n; ++i) {
    r.expect(ot.node_of(i) == l.node_at[i], say(tag, ": node_of(", i, ")"));
    r.expect(ot.paren(i) == l.is_open[i], say(tag, ": paren(", i, ")"));
  }
  r.expect(or_error([&] { return ot.parent(n + 1); }) == -1, say(tag, ": parent out of range"));
  return r;
}

CheckReport check_weighted_tree(std::uint64_t n, std::uint32_t s, std::uint32_t X, std::uint32_t block,
                                bool all_directories, std::uint64_t seed) {
  const PlainTree t = random_labeled_tree(n, 1, seed, LabelSkew::uniform);
  const PlainLayout l = layout(t);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::uint32_t> wdist(0, X - 1);
  std::vector<std::vector<std::uint32_t>> w(s, std::vector<std::uint32_t>(n));
  for (auto& row : w)
    for (auto& v : row) v = rng() % 4 == 0 ? 0 : wdist(rng);  // zeros are common in index weights
  auto weight = [&](std::uint32_t a, std::uint64_t x) -> std::int64_t { return a == 0 ? 0 : w[a - 1][x - 1]; };

  std::vector<StepFunction> fns{StepFunction::eps()};
  for (std::uint32_t a = 1; a <= s; ++a) fns.push_back(StepFunction::pi(a));
  for (std::uint32_t a = 0; a <= s; ++a)
    for (std::uint32_t b = 0; b <= s; ++b) fns.push_back(StepFunction::phi(a, b));
  const WeightedTree wt(OrdinalTree(t.parens(), block), w, X, block,
                        all_directories ? fns : std::vector<StepFunction>{});
  CheckReport r;
  const std::string tag = "weighted_tree seed=" + std::to_string(seed) + " n=" + std::to_string(n) +
                          " s=" + std::to_string(s) + " X=" + std::to_string(X) + " block=" + std::to_string(block) +
                          (all_directories ? " dirs=all" : " dirs=default");
  const std::uint64_t len = 2 * n;
  std::uniform_int_distribution<std::uint64_t> pos(1, len);

  for (const StepFunction& f : fns) {
    const std::string fn = f.kind == StepFunction::Kind::eps  ? std::string("eps")
                           : f.kind == StepFunction::Kind::pi ? "pi(" + std::to_string(f.a) + ")"
                                                              : "phi(" + std::to_string(f.a) + "," + std::to_string(f.b) + ")";
    std::vector<std::int64_t> pre(len + 1, 0);
    for (std::uint64_t i = 1; i <= len; ++i) {
      const std::uint64_t v = l.node_at[i];
      const bool open = l.is_open[i];
      std::int64_t d = 0;
      switch (f.kind) {
        case StepFunction::Kind::eps: d = open ? 1 : -1; break;
        case StepFunction::Kind::pi: d = open ? weight(f.a, v) : -weight(f.a, v); break;
        case StepFunction::Kind::phi: d = open ? weight(f.a, v) : weight(f.b, v); break;
      }
      pre[i] = pre[i - 1] + d;
    }
    if (f.kind == StepFunction::Kind::phi) {
      r.expect(wt.bp_rank(f.a, f.b, len) == static_cast<std::uint64_t>(pre[len]), say(tag, ": bp_rank total ", fn));
      for (int q = 0; q < 40; ++q) {
        const std::uint64_t i = pos(rng);
        r.expect(wt.bp_rank(f.a, f.b, i) == static_cast<std::uint64_t>(pre[i]), say(tag, ": bp_rank ", fn, " ", i));
        const std::int64_t target = static_cast<std::int64_t>(rng() % (pre[len] + 2));
        std::uint64_t want = 0;
        for (std::uint64_t j = 1; j <= len && !want; ++j)
          if (pre[j] >= target) want = j;
        r.expect(wt.bp_select(f.a, f.b, target) == want, say(tag, ": bp_select ", fn, " ", target));
      }
    }
    const int rounds = all_directories || f.kind != StepFunction::Kind::phi ? 60 : 8;
    for (int q = 0; q < rounds; ++q) {
      std::uint64_t i = pos(rng), j = pos(rng);
      if (i > j) std::swap(i, j);
      r.expect(wt.base_sum(f, i, j) == pre[j] - pre[i - 1], say(tag, ": sum ", fn, " ", i, " ", j));
      std::uint64_t arg = i;
      for (std::uint64_t k = i; k <= j; ++k)
        if (pre[k] > pre[arg]) arg = k;
      r.expect(wt.rmqi(f, i, j) == arg, say(tag, ": rmqi ", fn, " ", i, " ", j));
      const std::int64_t d = static_cast<std::int64_t>(rng() % (4 * X + 8)) - 4;
      std::uint64_t fwd = 0, bwd = 0;
      for (std::uint64_t k = i; k <= len && !fwd; ++k)
        if (pre[k] - pre[i - 1] >= d) fwd = k;
      for (std::uint64_t k = i; k >= 1 && !bwd; --k)
        if (pre[i] - pre[k - 1] >= d) bwd = k;
      r.expect(wt.fwd_search(f, i, d) == fwd, say(tag, ": fwd_search ", fn, " ", i, " ", d));
      r.expect(wt.bwd_search(f, i, d) == bwd, say(tag, ": bwd_search ", fn, " ", i, " ", d));
    }
  }

  for (std::uint32_t a = 1; a <= s; ++a) {
    for (std::uint64_t x = 1; x <= n; ++x) {
      r.expect(wt.weight(a, x) == w[a - 1][x - 1], say(tag, ": weight(", a, ",", x, ")"));
      std::uint64_t depth = 0;
      for (std::uint64_t y = x; y != 0; y = t.parent[y]) depth += weight(a, y);
      r.expect(wt.wdepth(a, x) == depth, say(tag, ": wdepth(", a, ",", x, ")"));
      std::uint64_t sub = 0;
      for (std::uint64_t y = x + 1; y < x + l.size[x]; ++y) sub += weight(a, y);
      r.expect(wt.wnum_descendants(a, x) == sub, say(tag, ": wnum_descendants(", a, ",", x, ")"));
      std::uint64_t deg = 0;
      for (std::uint64_t c : t.children[x]) deg += weight(a, c);
      r.expect(wt.wdeg(a, x) == deg, say(tag, ": wdeg(", a, ",", x, ")"));
      const std::uint64_t p = t.parent[x];
      std::uint64_t crank = weight(a, x);
      if (p != 0)
        for (std::uint64_t c : t.children[p]) {
          if (c == x) break;
          crank += weight(a, c);
        }
      r.expect(wt.wchild_rank(a, x) == crank, say(tag, ": wchild_rank(", a, ",", x, ")"));
      for (std::uint64_t i = 1; i <= deg + 1; i += 1 + deg / 6) {
        std::uint64_t want = kNone, run = 0;
        for (std::uint64_t c : t.children[x])
          if ((run += weight(a, c)) >= i) {
            want = c;
            break;
          }
        r.expect(wt.wchild_select(a, x, i) == want, say(tag, ": wchild_select(", a, ",", x, ",", i, ")"));
      }
      const std::uint64_t above = depth - weight(a, x);
      for (std::uint64_t i = 1; i <= above + 1; i += 1 + above / 5) {
        std::uint64_t want = kNone, run = 0;
        for (std::uint64_t y = p; y != 0; y = t.parent[y])
          if ((run += weight(a, y)) >= i) {
            want = y;
            break;
          }
        r.expect(wt.wlevel_ancestor(a, x, i) == want, say(tag, ": wlevel_ancestor(", a, ",", x, ",", i, ")"));
      }
    }
  }
  r.expect(or_error([&] { return wt.weight(s + 1, 1); }) == -1, say(tag, ": weight index past s"));
  return r;
}

std::vector<std::vector<bool>> all_trees(std::uint64_t n) {
  std::vector<std::vector<bool>> out;
  if (n == 0) return out;
  // A tree is "(" + Dyck word of n-1 pairs + ")".
  std::vector<bool> cur{true};
  const std::uint64_t pairs = n - 1;
  std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t open, std::uint64_t close) {
    if (open == pairs && close == pairs) {
      out.push_back(cur);
      out.back().push_back(false);
      return;
    }
    if (open < pairs) {
      cur.push_back(true);
      rec(open + 1, close);
      cur.pop_back();
    }
    if (close < open) {
      cur.push_back(false);
      rec(open, close + 1);
      cur.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace slt
