#include <doctest.h>

#include <stdexcept>

#include "fixtures.hpp"
#include "slt/suite.hpp"
#include "slt/weighted_tree.hpp"

using slt::StepFunction;
using slt::WeightedTree;

namespace {

WeightedTree m1(std::vector<StepFunction> functions = {}) {
  return WeightedTree(slt::OrdinalTree(fixture::kM1Parens), fixture::kM1Weights, 4, 512, std::move(functions));
}

}  // namespace

TEST_CASE("weighted_tree: fixture weights") {
  const WeightedTree t = m1();
  CHECK(t.num_weights() == 2);
  CHECK(t.bound() == 4);
  CHECK(t.weight(1, 3) == 1);
  CHECK(t.weight(2, 2) == 0);
}

TEST_CASE("weighted_tree: a weight equal to the bound is rejected") {
  std::vector<std::vector<std::uint32_t>> w = fixture::kM1Weights;
  w[0][3] = 4;
  CHECK_THROWS_AS(WeightedTree(slt::OrdinalTree(fixture::kM1Parens), w, 4), std::invalid_argument);
}

TEST_CASE("weighted_tree: base operations on the fixture") {
  // Temporary directories (no phi listed) and permanent ones must agree.
  for (bool permanent : {false, true}) {
    CAPTURE(permanent);
    const WeightedTree t = permanent ? m1({StepFunction::eps(), StepFunction::pi(1), StepFunction::phi(1, 0)}) : m1();
    CHECK(t.base_sum(StepFunction::eps(), 1, 8) == 0);
    CHECK(t.base_sum(StepFunction::pi(1), 1, 3) == 3);
    CHECK(t.base_sum(StepFunction::phi(1, 0), 1, 8) == 6);

    CHECK(t.fwd_search(StepFunction::pi(1), 1, 1) == 2);
    CHECK(t.fwd_search(StepFunction::phi(1, 0), 1, 3) == 3);
    CHECK(t.fwd_search(StepFunction::phi(1, 0), 1, 100) == 0);

    CHECK(t.bwd_search(StepFunction::phi(1, 0), 8, 3) == 6);
    CHECK(t.bwd_search(StepFunction::pi(1), 8, 1) == 0);

    CHECK(t.rmqi(StepFunction::eps(), 1, 8) == 3);
    CHECK(t.rmqi(StepFunction::pi(1), 1, 8) == 3);
  }
}

TEST_CASE("weighted_tree: bwd_search with d = 0 stops at i when f(P[i]) >= 0") {
  const WeightedTree t = m1();
  for (std::uint64_t i = 1; i <= 8; ++i) {
    const bool open = t.bp_char(i);
    // phi(1,0) is never negative; pi(1) is negative at closes with positive w1.
    CHECK(t.bwd_search(StepFunction::phi(1, 0), i, 0) == i);
    const std::int64_t v = t.base_sum(StepFunction::pi(1), i, i);
    if (v >= 0) CHECK(t.bwd_search(StepFunction::pi(1), i, 0) == i);
    (void)open;
  }
}

TEST_CASE("weighted_tree: tree queries on the fixture") {
  const WeightedTree t = m1();
  CHECK(t.wdepth(1, 3) == 3);
  CHECK(t.wdepth(2, 4) == 1);
  CHECK(t.wlevel_ancestor(1, 3, 1) == 2);
  CHECK(t.wlevel_ancestor(1, 3, 2) == 2);
  CHECK(t.wlevel_ancestor(1, 3, 3) == slt::kNone);
  CHECK(t.wdeg(1, 1) == 5);
  CHECK(t.wchild_rank(1, 4) == 5);
  CHECK(t.wchild_select(1, 1, 3) == 4);
  CHECK(t.wchild_select(1, 3, 1) == slt::kNone);
  CHECK(t.wnum_descendants(1, 1) == 6);
  CHECK(t.wnum_descendants(1, 3) == 0);
  CHECK(t.wnum_descendants(2, 2) == 1);
  CHECK(t.bp_rank(1, 0, 5) == 3);
  CHECK(t.bp_select(0, 1, 3) == 5);
}

TEST_CASE("weighted_tree: wdepth equals a pi prefix sum") {
  const WeightedTree t = m1();
  for (std::uint32_t a = 1; a <= 2; ++a)
    for (std::uint64_t x = 1; x <= 4; ++x)
      CHECK(static_cast<std::int64_t>(t.wdepth(a, x)) ==
            t.base_sum(StepFunction::pi(a), 1, t.tree().open_of(x)));
}

TEST_CASE("weighted_tree: serialization keeps every weight and directory") {
  const WeightedTree t = m1({StepFunction::phi(1, 2), StepFunction::pi(2)});
  slt::ByteWriter out;
  t.save(out);
  slt::ByteReader in(out.buffer());
  const WeightedTree back = WeightedTree::load(in);
  CHECK(back.functions() == t.functions());
  for (std::uint32_t a = 1; a <= 2; ++a)
    for (std::uint64_t x = 1; x <= 4; ++x) CHECK(back.weight(a, x) == t.weight(a, x));
  CHECK(back.bp_rank(1, 2, 7) == t.bp_rank(1, 2, 7));
}

TEST_CASE("weighted_tree: linear-scan oracle, n = 10^3") {
  std::uint64_t seed = 40;
  for (std::uint32_t block : {8u, 64u}) {
    for (bool all : {false, true}) {
      const auto r = slt::check_weighted_tree(1000, 3, 5, block, all, seed++);
      INFO("block=", block, " all=", all, " ", r.first_failure);
      CHECK(r.ok());
    }
  }
}

TEST_CASE("weighted_tree: wide nodes use child prefix sums") {
  // A star wider than the block forces the per-child directory.
  const auto r = slt::check_weighted_tree(300, 2, 9, 4, false, 77);
  INFO(r.first_failure);
  CHECK(r.ok());
}
