#include <doctest.h>

#include "fixtures.hpp"
#include "slt/bp_tree.hpp"
#include "slt/suite.hpp"

using slt::OrdinalTree;

TEST_CASE("bp_tree: fixture navigation") {
  const OrdinalTree t(fixture::kE1Parens);
  CHECK(t.size() == 6);
  CHECK(t.parent(4) == 3);
  CHECK(t.parent(1) == slt::kNone);
  CHECK(t.is_ancestor(3, 5));
  for (std::uint64_t x = 1; x <= 6; ++x) CHECK(t.is_ancestor(x, x));
  CHECK_FALSE(t.is_ancestor(2, 6));
  CHECK(t.lca(4, 6) == 1);
  CHECK(t.lca(4, 5) == 3);
  CHECK(t.depth(5) == 3);
  CHECK(t.subtree_size(3) == 3);
  CHECK(t.degree(1) == 3);
  CHECK(t.level_ancestor(5, 2) == 1);
  for (std::uint64_t x = 1; x <= 6; ++x) CHECK(t.level_ancestor(x, t.depth(x)) == slt::kNone);
  CHECK(t.child_rank(6) == 3);
  CHECK(t.child_rank(1) == 1);
  CHECK(t.child_select(1, 2) == 3);
  CHECK(t.child_select(4, 1) == slt::kNone);
  CHECK(t.postorder_rank(3) == 4);
  const std::uint64_t post[] = {2, 4, 5, 3, 6, 1};
  for (std::uint64_t i = 1; i <= 6; ++i) CHECK(t.postorder_select(i) == post[i - 1]);
  CHECK(t.open_of(3) == 4);
  CHECK(t.close_of(3) == 9);
  CHECK(t.node_of(10) == 6);
  for (std::uint64_t x = 1; x <= 6; ++x) {
    CHECK(t.node_of(t.open_of(x)) == x);
    CHECK(t.node_of(t.close_of(x)) == x);
  }
}

TEST_CASE("bp_tree: single node") {
  const OrdinalTree t("()");
  CHECK(t.size() == 1);
  CHECK(t.depth(1) == 1);
  CHECK(t.subtree_size(1) == 1);
  CHECK(t.degree(1) == 0);
}

TEST_CASE("bp_tree: malformed parentheses report the position") {
  try {
    OrdinalTree t("(()");
    FAIL("accepted an unbalanced string");
  } catch (const slt::ParenError& e) {
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(OrdinalTree("())("), slt::ParenError);
  CHECK_THROWS_AS(OrdinalTree("()()"), slt::ParenError);
  CHECK_THROWS_AS(OrdinalTree(""), slt::ParenError);
}

TEST_CASE("bp_tree: invalid node ids") {
  const OrdinalTree t(fixture::kE1Parens);
  CHECK_THROWS_AS(t.parent(0), std::out_of_range);
  CHECK_THROWS_AS(t.parent(7), std::out_of_range);
  CHECK_THROWS_AS(t.node_of(13), std::out_of_range);
}

TEST_CASE("bp_tree: shape round trip") {
  const OrdinalTree t(fixture::kE1Parens);
  CHECK(slt::parens_of(slt::shape_of(t)) == t.parens());
  CHECK(t.to_string() == fixture::kE1Parens);
}

TEST_CASE("bp_tree: adjacency oracle on random trees across block sizes") {
  std::uint64_t seed = 100;
  for (std::uint32_t block : {4u, 16u, 64u, 1024u}) {
    for (std::uint64_t n : {1u, 2u, 37u, 1000u}) {
      const auto r = slt::check_bp_tree(n, block, seed++);
      INFO("n=", n, " block=", block, " ", r.first_failure);
      CHECK(r.ok());
    }
  }
}

TEST_CASE("bp_tree: every tree up to six nodes") {
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (const auto& p : slt::all_trees(n)) {
      const OrdinalTree t(p, 4);
      const auto shape = slt::shape_of(t);
      for (std::uint64_t x = 1; x <= n; ++x) {
        REQUIRE(t.parent(x) == shape.parent[x]);
        REQUIRE(t.node_of(t.open_of(x)) == x);
      }
    }
  }
}
