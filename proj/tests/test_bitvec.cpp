#include <doctest.h>

#include <random>
#include <stdexcept>

#include "slt/bitvector.hpp"
#include "slt/suite.hpp"

using slt::BitVector;

TEST_CASE("bitvec: small vectors") {
  const BitVector empty{std::vector<bool>{}};
  CHECK(empty.size() == 0);
  CHECK(empty.count(true) == 0);
  CHECK(empty.rank(true, 0) == 0);

  const BitVector v("110");
  CHECK(v.size() == 3);
  CHECK(v.count(true) == 2);
  CHECK(v.rank(true, 2) == 2);
  CHECK(v.rank(false, 0) == 0);
  CHECK(v.access(3) == false);
  CHECK(v.access(1) == true);

  const BitVector w("0101");
  CHECK(w.select(true, 2) == 4);
  CHECK(w.select(false, 1) == 1);
}

TEST_CASE("bitvec: range errors") {
  const BitVector v("0101");
  CHECK_THROWS_AS(v.select(true, 3), std::out_of_range);
  CHECK_THROWS_AS(v.select(false, 0), std::out_of_range);
  CHECK_THROWS_AS(v.rank(true, 5), std::out_of_range);
  CHECK_THROWS_AS(v.access(0), std::out_of_range);
  CHECK_THROWS_AS(v.access(5), std::out_of_range);
}

TEST_CASE("bitvec: rank and select agree with a linear scan, seed 7") {
  std::mt19937_64 rng(7);
  std::vector<bool> bits(10000);
  for (auto&& b : bits) b = rng() & 1;
  const BitVector v(bits);
  std::uint64_t ones = 0;
  for (std::uint64_t i = 1; i <= bits.size(); ++i) {
    ones += bits[i - 1];
    REQUIRE(v.rank(true, i) == ones);
    REQUIRE(v.rank(false, i) == i - ones);
    REQUIRE(v.access(i) == bits[i - 1]);
    if (bits[i - 1]) REQUIRE(v.select(true, ones) == i);
    else REQUIRE(v.select(false, i - ones) == i);
  }
}

TEST_CASE("bitvec: both layouts round-trip through save and load") {
  for (double density : {0.5, 0.01}) {
    std::mt19937_64 rng(11);
    std::bernoulli_distribution coin(density);
    std::vector<bool> bits(5000);
    for (auto&& b : bits) b = coin(rng);
    const BitVector v(bits);
    CHECK(v.sparse() == (density < 0.125));
    slt::ByteWriter out;
    v.save(out);
    slt::ByteReader in(out.buffer());
    const BitVector back = BitVector::load(in);
    CHECK(back.to_bits() == bits);
    CHECK(back.size_in_bits() == v.size_in_bits());
  }
}

TEST_CASE("bitvec: linear-scan oracle at several densities") {
  std::uint64_t seed = 1;
  for (double density : {0.0, 0.002, 0.05, 0.13, 0.5, 0.97, 1.0}) {
    const auto r = slt::check_bitvector(3000, density, seed++);
    INFO(r.first_failure);
    CHECK(r.ok());
  }
}
