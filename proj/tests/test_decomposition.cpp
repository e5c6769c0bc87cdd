#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "slt/decomposition.hpp"
#include "slt/suite.hpp"

using slt::Component;
using slt::Decomposition;

namespace {

slt::TreeShape e1_shape() { return slt::shape_of(slt::OrdinalTree(fixture::kE1Parens)); }

slt::TreeShape random_shape(std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return slt::shape_of(slt::OrdinalTree(slt::random_labeled_tree(n, 1, rng(), slt::LabelSkew::uniform).parens()));
}

}  // namespace

TEST_CASE("decomposition: a small tree fits one component") {
  const Decomposition d = slt::decompose(e1_shape(), 8);
  REQUIRE(d.components.size() == 1);
  const Component& c = d.components[0];
  CHECK(c.root == 1);
  CHECK(c.i1_lo == 2);
  CHECK(c.i1_hi == 6);
  CHECK(c.i2_size() == 0);
  // I2 empty: the special node is max I1.
  CHECK(c.special == 6);
  CHECK(slt::dump_decomposition(d) == "1 6 2 6 0 0\n");
  CHECK(slt::macro_tree(e1_shape(), d).size() == 1);
}

TEST_CASE("decomposition: fixture with L = 2 passes the checker") {
  const Decomposition d = slt::decompose(e1_shape(), 2);
  const auto r = slt::verify_decomposition(e1_shape(), d);
  INFO(r.first_failure);
  CHECK(r.ok());
  for (const auto& c : d.components) CHECK(c.size() <= 5);
}

TEST_CASE("decomposition: single node is degenerate") {
  slt::TreeShape t;
  t.parent = {0, 0};
  const Decomposition d = slt::decompose(t, 3);
  CHECK(d.degenerate);
  CHECK(d.components.empty());
  CHECK(slt::verify_decomposition(t, d).ok());
}

TEST_CASE("decomposition: a chain of nine nodes gives a path macro tree") {
  slt::TreeShape chain;
  chain.parent = {0, 0};
  for (std::uint32_t x = 2; x <= 9; ++x) chain.parent.push_back(x - 1);
  const Decomposition d = slt::decompose(chain, 2);
  CHECK(slt::verify_decomposition(chain, d).ok());
  const slt::MacroTree m = slt::macro_tree(chain, d);
  for (std::uint64_t x = 1; x <= m.size(); ++x) CHECK(m.tree.degree(x) <= 1);
}

TEST_CASE("decomposition: random trees satisfy every property") {
  std::uint64_t seed = 1;
  for (std::uint64_t n : {2u, 3u, 17u, 120u, 500u}) {
    for (std::uint32_t L : {1u, 2u, 4u, 8u}) {
      const auto t = random_shape(n, seed++);
      const Decomposition d = slt::decompose(t, L);
      const auto r = slt::verify_decomposition(t, d);
      INFO("n=", n, " L=", L, " ", r.first_failure);
      CHECK(r.ok());
      CHECK(r.max_size <= 2 * L);
      CHECK(static_cast<double>(d.components.size()) <= 8.0 * static_cast<double>(n) / L);
    }
  }
}

TEST_CASE("decomposition: macro parents end at the special node") {
  std::uint64_t seed = 900;
  for (std::uint64_t n : {30u, 200u}) {
    for (std::uint32_t L : {2u, 3u}) {
      const auto t = random_shape(n, seed++);
      const slt::MacroTree m = slt::macro_tree(t, slt::decompose(t, L));
      for (std::uint64_t k = 1; k <= m.size(); ++k) {
        const std::uint64_t p = m.tree.parent(k);
        if (p == slt::kNone) continue;
        CHECK(m.components[k - 1].root == m.components[p - 1].special);
      }
    }
  }
}

TEST_CASE("decomposition: the checker flags a duplicated edge") {
  const auto t = e1_shape();
  Decomposition d = slt::decompose(t, 8);
  Component dup;
  dup.root = 3;
  dup.special = 4;
  dup.i1_lo = dup.i1_hi = 4;
  d.components.push_back(dup);
  const auto r = slt::verify_decomposition(t, d);
  CHECK_FALSE(r.edges_once);
  CHECK_FALSE(r.ok());
}

TEST_CASE("decomposition: complete_cover is a no-op on decompose output") {
  const auto t = random_shape(300, 5);
  Decomposition d = slt::decompose(t, 3);
  const auto before = d.components;
  slt::complete_cover(t, d);
  CHECK(d.components == before);
}
