#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fixtures.hpp"
#include "slt/labeled_index.hpp"
#include "slt/suite.hpp"

using slt::IndexConfig;
using slt::LabeledTreeIndex;
using slt::PlainTree;

namespace {

LabeledTreeIndex e1_index(std::uint32_t L) {
  IndexConfig cfg;
  cfg.L = L;
  return LabeledTreeIndex(fixture::bits_of(fixture::kE1Parens), fixture::kE1Labels, 2, cfg);
}

LabeledTreeIndex build(const PlainTree& t, std::uint32_t L, std::uint32_t block = 512) {
  IndexConfig cfg;
  cfg.L = L;
  cfg.block_size = block;
  return LabeledTreeIndex(t, cfg);
}

// Alpha-nodes and their parents, straight from the pointer tree.
std::set<std::uint64_t> x_alpha(const PlainTree& t, std::uint32_t alpha) {
  std::set<std::uint64_t> s;
  for (std::uint64_t x = 1; x <= t.size(); ++x)
    if (t.labels[x] == alpha) {
      s.insert(x);
      if (t.parent[x]) s.insert(t.parent[x]);
    }
  return s;
}

std::vector<PlainTree> sample_trees() {
  std::vector<PlainTree> out{fixture::e1()};
  std::uint64_t seed = 21;
  for (std::uint64_t n : {2u, 9u, 40u, 300u, 1500u})
    for (std::uint32_t sigma : {1u, 2u, 5u})
      for (auto skew : {slt::LabelSkew::uniform, slt::LabelSkew::zipf})
        if (sigma <= n) out.push_back(slt::random_labeled_tree(n, sigma, seed++, skew));
  return out;
}

}  // namespace

TEST_CASE("labeled_index: fixture answers do not depend on L") {
  for (std::uint32_t L : {1u, 2u, 3u, 4u, 8u}) {
    CAPTURE(L);
    const LabeledTreeIndex idx = e1_index(L);
    CHECK(idx.label(4) == 2);
    CHECK(idx.label(1) == 1);
    CHECK(idx.preorder_rank(2, 5) == 3);
    CHECK(idx.preorder_rank(1, 1) == 1);
    CHECK(idx.preorder_select(1, 2) == 3);
    CHECK(idx.preorder_select(2, 3) == 5);
    CHECK(idx.num_descendants(2, 1) == 3);
    CHECK(idx.num_descendants(1, 3) == 0);
    CHECK(idx.num_descendants(1, 6) == 0);
    CHECK(idx.parent(1, 4) == 3);
    CHECK(idx.parent(2, 5) == slt::kNone);
    CHECK(idx.depth(1, 5) == 2);
    CHECK(idx.depth(2, 6) == 0);
    CHECK(idx.level_ancestor(1, 5, 1) == 3);
    CHECK(idx.level_ancestor(1, 5, 2) == 1);
    CHECK(idx.level_ancestor(2, 4, 1) == slt::kNone);
    CHECK(idx.deg(2, 3) == 2);
    CHECK(idx.deg(2, 1) == 1);
    CHECK(idx.deg(2, 2) == 0);
    CHECK(idx.child_rank(2, 5) == 2);
    CHECK(idx.child_rank(1, 6) == 2);
    CHECK(idx.child_rank(2, 3) == 1);
    CHECK(idx.child_rank(1, 1) == 0);
    CHECK(idx.child_select(2, 3, 2) == 5);
    CHECK(idx.child_select(1, 1, 2) == 6);
    CHECK(idx.child_select(1, 1, 3) == slt::kNone);
    CHECK(idx.postorder_rank(1, 3) == 1);
    CHECK(idx.postorder_rank(2, 4) == 2);
    CHECK(idx.postorder_rank(1, 1) == 3);
    CHECK(idx.postorder_select(2, 3) == 5);
    CHECK(idx.postorder_select(1, 2) == 6);
  }
}

TEST_CASE("labeled_index: frequency rule on the fixture") {
  const LabeledTreeIndex l2 = e1_index(2);
  CHECK(l2.f_string().to_bits() == std::vector<bool>{true, true});
  CHECK(l2.frequent(1));
  const LabeledTreeIndex l4 = e1_index(4);
  CHECK(l4.f_string().to_bits() == std::vector<bool>{false, false});
  CHECK(l4.merged().size() == 1);
  CHECK_THROWS_AS(l4.map_node(1, 3), std::invalid_argument);
}

TEST_CASE("labeled_index: default L") {
  CHECK(slt::default_L(16, 4) == 2);
  CHECK(slt::default_L(std::uint64_t{1} << 32, 4) == 5);
  CHECK(slt::default_L(1, 1) == 2);
  CHECK(e1_index(7).config().L == 7);
  CHECK(e1_index(0).config().L == slt::default_L(6, 2));
}

TEST_CASE("labeled_index: fixture macro layout at L = 2") {
  const LabeledTreeIndex idx = e1_index(2);
  CHECK(idx.merged_offset(1) == 2);
  CHECK(idx.merged_offset(2) == 2 + idx.macro_size(1));
  std::uint64_t total = 0;
  for (std::uint64_t k = 1; k <= idx.macro_size(2); ++k) {
    const auto w = idx.macro_weights(2, k);
    total += w[1] + w[2];
  }
  CHECK(total == 3);
  const auto m4 = idx.map_node(2, 4);
  REQUIRE(m4.has_value());
  const auto v = idx.v_set(2, m4->local);
  CHECK(std::find(v.begin(), v.end(), 4u) != v.end());
  CHECK_FALSE(idx.map_node(1, 2).has_value());
}

TEST_CASE("labeled_index: per-label tree of the fixture at L = 8") {
  // Label 1 is infrequent at L = 8, so the single-component example is
  // checked on the per-label tree directly.
  const auto shape = slt::shape_of(slt::OrdinalTree(fixture::kE1Parens));
  const auto at = slt::alpha_tree(shape, slt::subtree_ends(shape), {1, 3, 6});
  CHECK(at.nodes == std::vector<std::uint32_t>{1, 3, 6});
  const auto d = slt::decompose(at.shape, 8);
  REQUIRE(d.components.size() == 1);
  const auto& c = d.components[0];
  CHECK(c.root == 1);  // the virtual super-root, never reported
  std::vector<std::uint32_t> v;
  for (std::uint32_t k = c.i1_lo; k <= c.i1_hi; ++k) v.push_back(at.nodes[k - 2]);
  CHECK(v == std::vector<std::uint32_t>{1, 3, 6});
  // Leftmost child of the super-root is T's root.
  CHECK(at.shape.parent[2] == 1);
  CHECK(at.nodes[0] == 1);
}

TEST_CASE("labeled_index: macro weights, intervals and V-sets") {
  for (const PlainTree& t : sample_trees()) {
    for (std::uint32_t L : {1u, 2u, 3u}) {
      const LabeledTreeIndex idx = build(t, L, 8);
      for (std::uint32_t a = 1; a <= idx.sigma(); ++a) {
        if (!idx.frequent(a)) continue;
        CAPTURE(t.size());
        CAPTURE(L);
        CAPTURE(a);
        const std::uint64_t na = idx.label_sequence().count(a);
        std::uint64_t next = 1;  // next alpha-rank expected in BP order
        std::vector<std::uint64_t> seen;
        // Walk the macro BP: I1 is read at the open, I2 at the close.
        const auto& M = idx.merged().tree();
        const std::uint64_t root = idx.merged_offset(a);
        const std::uint64_t size = idx.macro_size(a);
        CHECK(M.subtree_size(root) == size);
        for (std::uint64_t p = M.open_of(root); p <= M.close_of(root); ++p) {
          const std::uint64_t g = M.node_of(p);
          const std::uint64_t local = g - root + 1;
          const auto iv = idx.intervals_of(a, local);
          if (M.paren(p)) {
            const auto w = idx.macro_weights(a, local);
            CHECK(w[1] + w[2] == w[0]);
            CHECK(w[7] + w[8] == w[0]);
            CHECK(w[3] <= w[1]);
            CHECK(w[5] <= w[0]);
            CHECK(w[6] <= 1);
            CHECK(w[0] <= 2 * L + 1);
            CHECK(iv.l1 == next);
            next = iv.r1 + 1;
            const auto v = idx.v_set(a, local);
            CHECK(v.size() == w[0]);
            seen.insert(seen.end(), v.begin(), v.end());
            const std::uint64_t c = idx.c_node(a, local);
            if (w[5] == 0) {
              CHECK(c == slt::kNone);
            } else {
              CHECK(std::find(v.begin(), v.end(), c) != v.end());
            }
          } else {
            CHECK(iv.l2 == next);
            next = iv.r2 + 1;
          }
        }
        CHECK(next == na + 1);
        std::sort(seen.begin(), seen.end());
        std::vector<std::uint64_t> want;
        for (std::uint64_t x = 1; x <= t.size(); ++x)
          if (t.labels[x] == a) want.push_back(x);
        CHECK(seen == want);
      }
    }
  }
}

TEST_CASE("labeled_index: map_node is defined exactly on alpha-nodes and their parents") {
  for (const PlainTree& t : sample_trees()) {
    if (t.size() > 400) continue;
    for (std::uint32_t L : {1u, 2u}) {
      const LabeledTreeIndex idx = build(t, L, 8);
      std::uint64_t last_offset = 0;
      for (std::uint32_t a = 1; a <= idx.sigma(); ++a) {
        if (!idx.frequent(a)) continue;
        const std::uint64_t off = idx.merged_offset(a);
        CHECK(off > last_offset);
        last_offset = off;
        const auto xs = x_alpha(t, a);
        for (std::uint64_t x = 1; x <= t.size(); ++x) {
          const auto m = idx.map_node(a, x);
          REQUIRE(m.has_value() == (xs.count(x) == 1));
          if (!m) continue;
          CHECK(m->node == off + m->local - 1);
          if (t.labels[x] == a) {
            const auto v = idx.v_set(a, m->local);
            CHECK(std::find(v.begin(), v.end(), x) != v.end());
          }
        }
      }
    }
  }
}

TEST_CASE("labeled_index: frequent and enumerated paths give identical answers") {
  for (const PlainTree& t : sample_trees()) {
    if (t.size() > 300) continue;
    const LabeledTreeIndex all_frequent = build(t, 1);
    const LabeledTreeIndex none_frequent = build(t, static_cast<std::uint32_t>(t.size() + 1));
    for (const slt::Query& q : slt::all_queries(t)) {
      std::uint64_t a = 0, b = 0;
      bool ea = false, eb = false;
      try { a = all_frequent.answer(q); } catch (const std::out_of_range&) { ea = true; }
      try { b = none_frequent.answer(q); } catch (const std::out_of_range&) { eb = true; }
      INFO(slt::to_string(q));
      REQUIRE(ea == eb);
      REQUIRE(a == b);
    }
  }
}

TEST_CASE("labeled_index: oracle equivalence on sampled queries") {
  std::uint64_t seed = 500;
  for (std::uint32_t sigma : {2u, 16u, 256u}) {
    for (std::uint32_t L : {0u, 2u, 5u}) {
      const PlainTree t = slt::random_labeled_tree(4000, sigma, seed++, slt::LabelSkew::zipf);
      const LabeledTreeIndex idx = build(t, L, 64);
      const auto r = slt::cross_check(t, idx, 3000, seed);
      INFO(r.first_divergence);
      CHECK(r.ok());
    }
  }
}

TEST_CASE("labeled_index: frequent-label queries inspect at most three V-sets") {
  const PlainTree t = slt::random_labeled_tree(5000, 4, 77, slt::LabelSkew::uniform);
  for (std::uint32_t L : {2u, 6u}) {
    const LabeledTreeIndex idx = build(t, L);
    for (const slt::Query& q : slt::sample_queries(t, 4000, 9)) {
      if (q.kind == slt::QueryKind::label || !idx.frequent(q.alpha)) continue;
      LabeledTreeIndex::scan_counter() = 0;
      try { (void)idx.answer(q); } catch (const std::out_of_range&) {}
      INFO(slt::to_string(q));
      REQUIRE(LabeledTreeIndex::scan_counter() <= 3 * (2 * L + 1));
    }
  }
}

TEST_CASE("labeled_index: merged tree stays within the macro bound") {
  for (const PlainTree& t : sample_trees()) {
    for (std::uint32_t L : {1u, 2u, 4u}) {
      IndexConfig cfg;
      cfg.L = L;
      cfg.verify_decompositions = true;
      const LabeledTreeIndex idx(t, cfg);
      double bound = 1.0;
      std::uint64_t w1_total = 0, na_total = 0;
      for (std::uint32_t a = 1; a <= idx.sigma(); ++a) {
        if (!idx.frequent(a)) continue;
        const double na = static_cast<double>(idx.label_sequence().count(a));
        bound += cfg.c_max * (2.0 * na + 1.0) / L + 2.0;
        na_total += idx.label_sequence().count(a);
        for (std::uint64_t k = 1; k <= idx.macro_size(a); ++k) w1_total += idx.macro_weights(a, k)[0];
      }
      CHECK(static_cast<double>(idx.merged().size()) <= bound);
      CHECK(w1_total == na_total);
      for (const auto& c : idx.decomposition_checks()) {
        INFO(c.report.first_failure);
        CHECK(c.report.ok());
        CHECK(c.report.max_size <= 2 * L + 1);
      }
    }
  }
}

TEST_CASE("labeled_index: serialization round trip") {
  const PlainTree t = slt::random_labeled_tree(800, 7, 3, slt::LabelSkew::zipf);
  const LabeledTreeIndex idx = build(t, 2, 32);
  const auto bytes = idx.serialize();
  const LabeledTreeIndex back = LabeledTreeIndex::deserialize(bytes);
  CHECK(back.serialize() == bytes);
  CHECK(back.config().L == 2);
  for (const slt::Query& q : slt::sample_queries(t, 2000, 4)) REQUIRE(back.answer(q) == idx.answer(q));

  auto truncated = bytes;
  truncated.resize(bytes.size() / 2);
  CHECK_THROWS_AS(LabeledTreeIndex::deserialize(truncated), std::invalid_argument);
  auto bad_magic = bytes;
  bad_magic[0] ^= 0xFF;
  CHECK_THROWS_AS(LabeledTreeIndex::deserialize(bad_magic), std::invalid_argument);
}

TEST_CASE("labeled_index: a flipped label bit is caught by the oracle") {
  const PlainTree t = slt::random_labeled_tree(200, 3, 8, slt::LabelSkew::uniform);
  const LabeledTreeIndex idx = build(t, 2);
  const LabeledTreeIndex broken = LabeledTreeIndex::deserialize(slt::flip_label_bit(idx.serialize()));
  const auto r = slt::cross_check(t, broken, 0, 1);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.first_divergence.empty());
}

TEST_CASE("labeled_index: degenerate inputs") {
  const LabeledTreeIndex one(std::vector<bool>{true, false}, std::vector<std::uint32_t>{1}, 1);
  const auto s = one.space_report();
  CHECK(s.n == 1);
  CHECK(s.h0 == 0.0);
  CHECK(s.total_bits > 0);
  CHECK(s.redundancy_per_node == doctest::Approx(s.redundancy_bits));
  CHECK(one.depth(1, 1) == 1);
  CHECK(one.parent(1, 1) == slt::kNone);

  // A single label: H0 = 0 and the redundancy is everything beyond 2n.
  const PlainTree flat = slt::random_labeled_tree(1000, 1, 2, slt::LabelSkew::uniform);
  const auto f = LabeledTreeIndex(flat).space_report();
  CHECK(f.h0 == 0.0);
  CHECK(f.redundancy_bits == doctest::Approx(static_cast<double>(f.total_bits) - 2000.0));
}

TEST_CASE("labeled_index: malformed input and argument errors") {
  const auto parens = fixture::bits_of(fixture::kE1Parens);
  CHECK_THROWS_AS(LabeledTreeIndex(parens, {1, 2, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(LabeledTreeIndex(parens, {1, 2, 1, 2, 0, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(LabeledTreeIndex(parens, {1, 2, 1, 3, 2, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(LabeledTreeIndex(parens, fixture::kE1Labels, 0), std::invalid_argument);
  CHECK_THROWS_AS(LabeledTreeIndex(fixture::bits_of("(()"), {1, 1}, 2), slt::ParenError);
  // An alphabet larger than n is clamped when every label fits.
  CHECK(LabeledTreeIndex(parens, fixture::kE1Labels, 50).sigma() == 6);
  CHECK_THROWS_AS(LabeledTreeIndex(parens, {1, 2, 1, 2, 9, 1}, 50), std::invalid_argument);

  const LabeledTreeIndex idx = e1_index(2);
  CHECK_THROWS_AS(idx.label(0), std::out_of_range);
  CHECK_THROWS_AS(idx.depth(3, 1), std::out_of_range);
  CHECK_THROWS_AS(idx.parent(1, 7), std::out_of_range);
  CHECK_THROWS_AS(idx.preorder_select(1, 4), std::out_of_range);
  CHECK_THROWS_AS(idx.postorder_select(2, 0), std::out_of_range);
}
