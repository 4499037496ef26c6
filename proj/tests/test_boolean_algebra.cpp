#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"

using namespace condsheaf;

TEST_CASE("algebra construction") {
  auto alg = Algebra::make({"p", "q"});
  CHECK(alg->element_count() == 4);
  CHECK(alg->atom_count() == 2);
  CHECK_FALSE(alg->degenerate());

  auto empty = Algebra::make({});
  CHECK(empty->element_count() == 1);
  CHECK(empty->degenerate());
  CHECK(empty->zero() == empty->one());

  CHECK_THROWS_AS(Algebra::make({"p", "p"}), Error);
  CHECK_THROWS_AS(Algebra::make({""}), Error);
  CHECK_THROWS_AS(Algebra::make({"a|b"}), Error);
}

TEST_CASE("element keys round-trip") {
  auto alg = fixtures::three_atoms();
  for (Mask m : bits::submasks(alg->full())) {
    auto key = alg->key_of(m);
    REQUIRE(alg->parse_key(key).has_value());
    CHECK(*alg->parse_key(key) == m);
  }
  CHECK(alg->key_of(0) == "");
  CHECK(alg->show(0) == "0");
  CHECK_FALSE(alg->parse_key("w").has_value());
  CHECK_FALSE(alg->parse_key("p|p").has_value());
}

TEST_CASE("lattice operations") {
  auto alg = fixtures::three_atoms();
  Elem pq = *alg->parse("p|q");
  Elem qr = *alg->parse("q|r");
  CHECK(meet(pq, qr) == alg->atom("q"));

  auto two = fixtures::two_atoms();
  CHECK(complement(two->atom("p")) == two->atom("q"));

  auto down = relative_down_set(pq);
  CHECK(down.size() == 4);
  CHECK(down.front() == alg->zero());
  CHECK(down.back() == pq);

  CHECK_THROWS_AS(meet(pq, two->atom("p")), Error);
}

TEST_CASE("lattice laws hold exhaustively") {
  auto alg = Algebra::make({"a", "b", "c", "d", "e"});
  auto elements = relative_down_set(alg->one());
  for (const auto& x : elements) {
    CHECK(complement(complement(x)) == x);
    for (const auto& y : elements) {
      CHECK(meet(x, y) == meet(y, x));
      CHECK(join(x, y) == join(y, x));
      CHECK(meet(x, join(x, y)) == x);
      CHECK(join(x, meet(x, y)) == x);
      CHECK(complement(meet(x, y)) == join(complement(x), complement(y)));
      CHECK(complement(join(x, y)) == meet(complement(x), complement(y)));
      CHECK(leq(x, y) == (meet(x, y) == x));
      for (const auto& z : elements) {
        CHECK(meet(meet(x, y), z) == meet(x, meet(y, z)));
        CHECK(join(join(x, y), z) == join(x, join(y, z)));
        CHECK(meet(x, join(y, z)) == join(meet(x, y), meet(x, z)));
      }
    }
  }
}

namespace {

// independent oracle: partitions of a are exactly the pairwise-disjoint
// zero-free element families with join a
std::uint64_t partition_count_by_search(const AlgebraPtr& alg, Mask a) {
  std::vector<Mask> nonzero;
  for (Mask m : bits::submasks(a))
    if (m) nonzero.push_back(m);
  (void)alg;
  std::uint64_t count = 0;
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << nonzero.size()); ++pick) {
    Mask seen = 0;
    bool disjoint = true;
    for (std::size_t i = 0; i < nonzero.size() && disjoint; ++i) {
      if (!(pick & (std::uint64_t{1} << i))) continue;
      if (nonzero[i] & seen) disjoint = false;
      seen |= nonzero[i];
    }
    if (disjoint && seen == a) ++count;
  }
  if (a == 0) count = 1;  // the empty family
  return count;
}

}  // namespace

TEST_CASE("partition enumeration") {
  auto two = fixtures::two_atoms();
  CHECK(partitions_of(two->one()).size() == 2);

  auto three = fixtures::three_atoms();
  CHECK(partitions_of(three->one()).size() == 5);

  auto zero_partitions = partitions_of(three->zero());
  REQUIRE(zero_partitions.size() == 1);
  CHECK(zero_partitions[0].parts().empty());

  auto four = Algebra::make({"p", "q", "r", "s"});
  CHECK(partitions_of(four->one()).size() == 15);
  for (const auto& alg : {three, four}) {
    for (Mask a : bits::submasks(alg->full())) {
      auto parts = partitions_of(alg->elem(a));
      CHECK(parts.size() == partition_count_by_search(alg, a));
      std::set<std::vector<Mask>> distinct;
      for (const auto& part : parts) {
        CHECK(part.base() == alg->elem(a));
        std::vector<Mask> masks;
        Mask seen = 0;
        for (const auto& e : part.parts()) {
          CHECK(e.mask() != 0);
          CHECK((e.mask() & seen) == 0);
          seen |= e.mask();
          masks.push_back(e.mask());
        }
        CHECK(seen == a);
        distinct.insert(masks);
      }
      CHECK(distinct.size() == parts.size());
    }
  }
}

TEST_CASE("partition construction canonicalizes") {
  auto alg = fixtures::two_atoms();
  auto part = Partition::make(alg->one(), {alg->atom("q"), alg->zero(), alg->atom("p")});
  CHECK(part.parts().size() == 2);
  CHECK_THROWS_AS(Partition::make(alg->one(), {alg->atom("p")}), Error);
  CHECK_THROWS_AS(Partition::make(alg->one(), {alg->one(), alg->atom("p")}), Error);
}

TEST_CASE("sieves validate downward closure") {
  auto alg = fixtures::two_atoms();
  CHECK_THROWS_AS(Sieve::make(alg->one(), {alg->atom("p")}), Error);  // missing 0
  auto s = Sieve::make(alg->atom("p"), {alg->zero(), alg->atom("p")});
  CHECK(s.covers());
  auto empty = Sieve::make(alg->zero(), {});
  CHECK(empty.covers());  // the empty join is 0
  CHECK_THROWS_AS(
      Sieve::make(alg->atom("p"), {alg->one(), alg->zero(), alg->atom("p"), alg->atom("q")}),
      Error);  // member above the base
}

TEST_CASE("disjointify peels members in order") {
  auto alg = fixtures::two_atoms();
  Elem p = alg->atom("p"), q = alg->atom("q"), one = alg->one(), zero = alg->zero();
  Sieve maximal = maximal_sieve(one);

  auto low_first = disjointify(maximal, {zero, p, q, one});
  REQUIRE(low_first.parts().size() == 2);
  CHECK(low_first.parts()[0] == p);
  CHECK(low_first.parts()[1] == q);

  auto top_first = disjointify(maximal, {one, p, q, zero});
  REQUIRE(top_first.parts().size() == 1);
  CHECK(top_first.parts()[0] == one);

  auto principal = disjointify(Sieve::make(p, {zero, p}));
  REQUIRE(principal.parts().size() == 1);
  CHECK(principal.parts()[0] == p);

  Sieve gap = Sieve::make(one, {zero, p});
  CHECK_THROWS_WITH_AS(disjointify(gap), doctest::Contains("does not cover"), Error);
  CHECK_THROWS_AS(disjointify(maximal, {p, q, one}), Error);  // not a permutation
}

TEST_CASE("disjointify refines every covering sieve") {
  auto alg = fixtures::three_atoms();
  for (Mask a : bits::submasks(alg->full())) {
    for (const auto& sieve : sieves_on(alg->elem(a))) {
      if (!sieve.covers()) continue;
      std::set<Mask> members;
      for (const auto& m : sieve.members()) members.insert(m.mask());
      auto part = disjointify(sieve);
      for (const auto& piece : part.parts()) CHECK(members.count(piece.mask()));
    }
  }
}

TEST_CASE("disjointify on sampled orders of four-atom sieves") {
  // beyond the exhaustive three-atom sweep: fixed-seed sampled member orders
  auto alg = Algebra::make({"p", "q", "r", "s"});
  std::mt19937_64 rng(1);
  for (const auto& sieve : sieves_on(alg->one())) {
    if (!sieve.covers()) continue;
    std::set<Mask> members;
    for (const auto& m : sieve.members()) members.insert(m.mask());
    std::vector<Elem> order = sieve.members();
    for (int round = 0; round < 40; ++round) {
      std::shuffle(order.begin(), order.end(), rng);
      auto part = disjointify(sieve, order);
      CHECK(part.base() == alg->one());
      for (const auto& piece : part.parts()) CHECK(members.count(piece.mask()));
    }
  }
}

TEST_CASE("sieve enumeration matches the downset count") {
  auto alg = fixtures::three_atoms();
  CHECK(sieves_on(alg->one()).size() == 20);  // downsets of the 3-cube
  CHECK(sieves_on(alg->zero()).size() == 2);  // {} and {0}
  CHECK(sieves_on(alg->atom("p")).size() == 3);
}
