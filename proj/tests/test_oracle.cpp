#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "slt/labeled_index.hpp"
#include "slt/suite.hpp"

using slt::Query;
using slt::QueryKind;

TEST_CASE("oracle: fixture answers") {
  const slt::PlainTree t = fixture::e1();
  CHECK(slt::oracle_query(t, {QueryKind::depth, 1, 5, 0}) == 2);
  CHECK(slt::oracle_query(t, {QueryKind::child_select, 2, 3, 2}) == 5);
  CHECK(slt::oracle_query(t, {QueryKind::label, 0, 4, 0}) == 2);
  for (std::uint32_t a = 1; a <= 2; ++a)
    for (std::uint64_t i = 1; i <= 3; ++i) {
      const std::uint64_t x = slt::oracle_query(t, {QueryKind::preorder_select, a, i, 0});
      CHECK(slt::oracle_query(t, {QueryKind::preorder_rank, a, x, 0}) == i);
    }
}

TEST_CASE("oracle: generator") {
  const slt::PlainTree one = slt::random_labeled_tree(1, 5, 9, slt::LabelSkew::uniform);
  CHECK(one.size() == 1);
  const auto a = slt::random_labeled_tree(500, 16, 42, slt::LabelSkew::uniform);
  const auto b = slt::random_labeled_tree(500, 16, 42, slt::LabelSkew::uniform);
  CHECK(a.parent == b.parent);
  CHECK(a.labels == b.labels);
  // Preorder numbering: every parent precedes its children.
  for (std::uint64_t x = 2; x <= a.size(); ++x) CHECK(a.parent[x] < x);
}

TEST_CASE("oracle: zipf counts strictly decrease with rank") {
  const auto t = slt::random_labeled_tree(10000, 16, 42, slt::LabelSkew::zipf);
  std::vector<std::uint64_t> count(17, 0);
  for (std::uint64_t x = 1; x <= t.size(); ++x) ++count[t.labels[x]];
  for (std::uint32_t a = 1; a < 16; ++a) CHECK(count[a] > count[a + 1]);
}

TEST_CASE("oracle: the fixture cross-checks clean at several L") {
  const slt::PlainTree t = fixture::e1();
  for (std::uint32_t L : {1u, 2u, 8u}) {
    slt::IndexConfig cfg;
    cfg.L = L;
    const auto r = slt::cross_check(t, slt::LabeledTreeIndex(t, cfg), 0, 1);
    INFO(r.first_divergence);
    CHECK(r.ok());
    CHECK(r.queries == slt::all_queries(t).size());
  }
}

TEST_CASE("oracle: a mutated index is reported with a repro") {
  const slt::PlainTree t = fixture::e1();
  const slt::LabeledTreeIndex idx(t);
  const auto broken = slt::LabeledTreeIndex::deserialize(slt::flip_label_bit(idx.serialize()));
  const auto r = slt::cross_check(t, broken, 0, 3);
  CHECK(r.divergences > 0);
  CHECK(r.first_divergence.find("seed=3") != std::string::npos);
}

TEST_CASE("oracle: exhaustive sweep over trees up to five nodes") {
  std::uint64_t queries = 0;
  for (std::uint64_t n = 1; n <= 5; ++n)
    for (const auto& p : slt::all_trees(n))
      for (std::uint32_t L : {1u, 2u, 3u}) {
        const std::uint32_t sigma = n == 1 ? 1 : 2;
        std::vector<std::uint32_t> labels(n, 1);
        for (std::uint64_t k = 0; k < n; ++k) labels[k] = 1 + static_cast<std::uint32_t>((k * 7 + n) % sigma);
        const auto t = slt::plain_tree_from_parens(p, labels, sigma);
        slt::IndexConfig cfg;
        cfg.L = L;
        cfg.block_size = 4;
        const auto r = slt::cross_check(t, slt::LabeledTreeIndex(t, cfg), 0, 1);
        INFO(r.first_divergence);
        REQUIRE(r.ok());
        queries += r.queries;
      }
  CHECK(queries > 0);
}

TEST_CASE("oracle: all_trees enumerates Catalan many distinct trees") {
  const std::uint64_t catalan[] = {1, 1, 2, 5, 14, 42, 132, 429};
  for (std::uint64_t n = 1; n <= 8; ++n) {
    auto trees = slt::all_trees(n);
    CHECK(trees.size() == catalan[n - 1]);
    std::sort(trees.begin(), trees.end());
    CHECK(std::adjacent_find(trees.begin(), trees.end()) == trees.end());
  }
}
