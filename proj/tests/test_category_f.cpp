#include <doctest.h>

#include <map>
#include <set>

#include "helpers.hpp"

using namespace condsheaf;

namespace {

FObjectPtr obj21(Mask support) { return make_fobject(support, fixtures::model21()); }
FObjectPtr obj22(Mask support) { return make_fobject(support, fixtures::model22()); }

}  // namespace

TEST_CASE("object identification at support zero") {
  auto alg = fixtures::two_atoms();
  CHECK(objects_equal(*initial_object(alg), *make_fobject(0, fixtures::model22())));
  CHECK_FALSE(objects_equal(*obj21(1), *obj22(1)));
  CHECK_FALSE(objects_equal(*obj21(1), *obj21(3)));
  CHECK_THROWS_AS(make_fobject(3, fixtures::model21().restricted(1)), Error);
}

TEST_CASE("hom sets") {
  auto alg = fixtures::two_atoms();
  CHECK(hom_set(obj21(1), obj22(3)).size() == 4);   // two stalk elements, two targets
  CHECK(hom_set(obj22(3), obj22(1)).empty());       // support does not drop
  CHECK(hom_set(initial_object(alg), obj22(3)).size() == 1);
  CHECK(hom_set(obj22(3), obj22(3)).size() == 16);

  for (const auto& f : hom_set(obj21(3), obj22(3))) {
    CHECK(compose(f, identity_arrow(obj21(3))) == f);
    CHECK(compose(identity_arrow(obj22(3)), f) == f);
  }
}

TEST_CASE("hom-set sizes follow the stalk-function count") {
  auto alg = universe_algebra(2);
  auto universe = enumerate_objects(alg, 2);
  for (const auto& a : universe) {
    for (const auto& b : universe) {
      std::uint64_t expected = 0;
      if ((a->support & b->support) == a->support) {
        expected = 1;
        for (int atom : bits::atom_list(a->support)) {
          std::uint64_t k = 1;
          for (std::uint64_t i = 0; i < a->carrier.stalk_size(atom); ++i)
            k *= b->carrier.stalk_size(atom);
          expected *= k;
        }
      }
      CHECK(hom_set(a, b).size() == expected);
    }
  }
}

TEST_CASE("category laws over the bounded universe") {
  auto alg = universe_algebra(2);
  auto universe = enumerate_objects(alg, 2);
  CHECK(universe.size() == 13);

  std::uint64_t triples = 0;
  for (const auto& a : universe) {
    for (const auto& b : universe) {
      auto fs = hom_set(a, b);
      for (const auto& c : universe) {
        auto gs = hom_set(b, c);
        if (gs.empty()) continue;
        for (const auto& d : universe) {
          auto hs = hom_set(c, d);
          if (hs.empty()) continue;
          for (const auto& f : fs)
            for (const auto& g : gs)
              for (const auto& h : hs) {
                ++triples;
                CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
              }
        }
      }
    }
  }
  CHECK(triples > 0);
}

TEST_CASE("arrow normal form ignores data above the source support") {
  auto src = obj21(1);
  auto tgt = obj22(3);
  // two raw transformations that differ only at the atom q
  FArrow a(src, tgt, {{1, 0}, {0}});
  FArrow b(src, tgt, {{1, 0}, {1}});
  CHECK(a == b);  // the maps at q are discarded by the normal form
  FArrow c(src, tgt, {{1, 1}, {}});
  CHECK(a != c);
}

TEST_CASE("extension by the gluing formula") {
  auto alg = fixtures::two_atoms();
  StalkSheaf x = fixtures::model21();
  StalkSheaf y = fixtures::model21();
  Mask a = 1;  // extend from p

  std::vector<std::vector<std::uint32_t>> h(2);
  h[0] = {0, 1};  // identity on the stalk at p
  // the formula's value below a is h regardless of the default
  for (std::uint32_t g_p : {0u, 1u}) {
    for (std::uint32_t g_q : {0u}) {
      std::vector<std::vector<std::uint32_t>> g(2);
      g[0] = {g_p, g_p};
      g[1] = {g_q};
      auto full = combine_below(x, y, a, h, g);
      for (Mask d : bits::submasks(x.top())) {
        auto evaluated = extend_formula_eval(x, y, a, h, g, d);
        for (std::uint64_t i = 0; i < x.component_size(d); ++i) {
          // the combined stalk maps act the same way componentwise
          std::vector<std::uint32_t> digits;
          for (int atom : bits::atom_list(d))
            digits.push_back(full[static_cast<std::size_t>(atom)][x.digit(d, i, atom)]);
          CHECK(evaluated[i] == y.index_from_digits(d, digits));
        }
        if ((d & a) == d) {
          // below a the formula reproduces h exactly
          for (std::uint64_t i = 0; i < x.component_size(d); ++i) {
            std::vector<std::uint32_t> hd;
            for (int atom : bits::atom_list(d))
              hd.push_back(h[static_cast<std::size_t>(atom)][x.digit(d, i, atom)]);
            CHECK(evaluated[i] == y.index_from_digits(d, hd));
          }
        }
      }
    }
  }

  // as arrows, every default yields the same morphism
  auto src = make_fobject(a, x);
  auto tgt = make_fobject(3, y);
  FArrow ext1 = extend_transformation(src, tgt, h);
  FArrow ext2 = extend_transformation(src, tgt, h, default_transformation(x, y));
  CHECK(ext1 == ext2);
  CHECK(ext1.map_at(0) == h[0]);

  // extending from the full support is the transformation itself
  auto src_full = make_fobject(3, x);
  std::vector<std::vector<std::uint32_t>> h_full = {{1, 0}, {0}};
  FArrow all = extend_transformation(src_full, tgt, h_full);
  CHECK(all.map_at(0) == h_full[0]);
  CHECK(all.map_at(1) == h_full[1]);

  // extending from support 0 gives the unique arrow out of the initial object
  auto src_zero = make_fobject(0, x);
  FArrow nothing = extend_transformation(src_zero, tgt, {});
  CHECK(hom_set(src_zero, tgt).size() == 1);
  CHECK(nothing == hom_set(src_zero, tgt).front());
}

TEST_CASE("monic characterization with witnesses") {
  auto src = obj21(1);
  auto tgt = obj22(3);
  FArrow injective(src, tgt, {{1, 0}, {}});
  CHECK(is_monic(injective));

  FArrow collapsing(src, tgt, {{0, 0}, {}});
  MonicWitness w;
  REQUIRE_FALSE(is_monic(collapsing, &w));
  CHECK(w.atom == 0);
  REQUIRE(w.u.has_value());
  REQUIRE(w.v.has_value());
  CHECK_FALSE(*w.u == *w.v);
  CHECK(compose(collapsing, *w.u) == compose(collapsing, *w.v));

  // arrows out of the initial object are monic
  CHECK(is_monic(hom_set(initial_object(src->carrier.algebra()), tgt).front()));
}

TEST_CASE("monic test agrees with left cancellation over the universe") {
  auto alg = universe_algebra(2);
  auto universe = enumerate_objects(alg, 2);
  for (const auto& a : universe) {
    for (const auto& b : universe) {
      for (const auto& m : hom_set(a, b)) {
        bool cancellable = true;
        for (const auto& w : universe) {
          auto probes = hom_set(w, a);
          for (std::size_t i = 0; i < probes.size() && cancellable; ++i)
            for (std::size_t j = i + 1; j < probes.size() && cancellable; ++j)
              if (compose(m, probes[i]) == compose(m, probes[j])) cancellable = false;
        }
        CHECK(is_monic(m) == cancellable);
      }
    }
  }
}

TEST_CASE("subobjects of monics") {
  auto alg = fixtures::two_atoms();
  auto tgt = obj21(3);

  // inclusion of {x1} at support p
  auto small = make_fobject(1, StalkSheaf::make(alg, {{"p", {"x1"}}, {"q", {"y1"}}}));
  FArrow inc(small, tgt, {{0}, {}});
  SubObject s = subobject_of_monic(inc);
  CHECK(s.support == 1);
  CHECK(s.stalk_subsets[0] == std::vector<std::uint32_t>{0});

  SubObject full = subobject_of_monic(identity_arrow(tgt));
  CHECK(full.support == 3);
  CHECK(full.stalk_subsets[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(full.stalk_subsets[1] == std::vector<std::uint32_t>{0});

  // equivalent monics with a relabeled source map to the same subobject
  auto relabeled = make_fobject(1, StalkSheaf::make(alg, {{"p", {"other"}}, {"q", {"z"}}}));
  FArrow inc2(relabeled, tgt, {{0}, {}});
  CHECK(subobject_of_monic(inc2) == s);

  FArrow bad(obj22(1), tgt, {{0, 0}, {}});
  CHECK_THROWS_AS(subobject_of_monic(bad), Error);
}

TEST_CASE("subobjects of equivalent monics coincide") {
  // compose a monic with an isomorphism of its source: same subobject
  auto alg = fixtures::two_atoms();
  auto tgt = make_fobject(3, StalkSheaf::make(alg, {{"p", {"x1", "x2", "x3"}}, {"q", {"y1"}}}));
  auto src = make_fobject(1, StalkSheaf::make(alg, {{"p", {"a1", "a2"}}, {"q", {"b"}}}));
  FArrow m(src, tgt, {{2, 0}, {}});  // image {x1, x3}, a proper subset
  REQUIRE(is_monic(m));
  FArrow iso(src, src, {{1, 0}, {}});  // swap at p, an automorphism
  REQUIRE(is_monic(iso));
  FArrow other = compose(m, iso);
  CHECK_FALSE(m == other);
  CHECK(subobject_of_monic(m) == subobject_of_monic(other));
}

TEST_CASE("monic classes correspond to subobjects bijectively") {
  // two monics into the same object carry the same subobject exactly when an
  // isomorphism of their sources mediates between them
  auto universe = enumerate_objects(universe_algebra(2), 2);
  auto tgt = make_fobject(3, fixtures::model21());
  std::vector<FArrow> monics;
  for (const auto& src : universe)
    for (const auto& m : hom_set(src, tgt))
      if (is_monic(m)) monics.push_back(m);

  auto equivalent = [](const FArrow& m1, const FArrow& m2) {
    for (const auto& j : hom_set(m1.src(), m2.src())) {
      if (!is_monic(j)) continue;  // iso candidates: monic + matching stalk sizes
      bool bijective = m1.src()->support == m2.src()->support;
      for (int atom : bits::atom_list(m1.src()->support))
        if (m1.src()->carrier.stalk_size(atom) != m2.src()->carrier.stalk_size(atom))
          bijective = false;
      if (bijective && compose(m2, j) == m1) return true;
    }
    return false;
  };
  for (const auto& m1 : monics)
    for (const auto& m2 : monics)
      CHECK((subobject_of_monic(m1) == subobject_of_monic(m2)) == equivalent(m1, m2));
}

TEST_CASE("product and coproduct shapes") {
  auto alg = fixtures::two_atoms();
  auto x = obj21(3);
  auto one = terminal_object(alg);

  LimitResult prod = product(x, one);
  CHECK(prod.object->support == 3);
  for (int atom : {0, 1})
    CHECK(prod.object->carrier.stalk_size(atom) == x->carrier.stalk_size(atom));
  CHECK(compose(prod.legs[0], identity_arrow(prod.object)) == prod.legs[0]);

  // coproduct of parts supported at p and q: stalks come from each side
  auto at_p = make_fobject(1, fixtures::model21());
  auto at_q = make_fobject(2, fixtures::model22());
  LimitResult co = coproduct(at_p, at_q);
  CHECK(co.object->support == 3);
  CHECK(co.object->carrier.stalk(0) == std::vector<std::string>{"x1", "x2"});
  CHECK(co.object->carrier.stalk(1) == std::vector<std::string>{"y1", "y2"});

  // overlapping supports tag the two copies apart
  LimitResult both = coproduct(obj21(1), obj21(1));
  CHECK(both.object->carrier.stalk_size(0) == 4);
}

TEST_CASE("equalizer support shrinks to the agreement region") {
  auto x = obj22(3);
  // f = identity everywhere; g swaps at p, identity at q
  FArrow f = identity_arrow(x);
  FArrow g(x, x, {{1, 0}, {0, 1}});
  LimitResult eq = equalizer(f, g);
  CHECK(eq.candidate_support == 3);
  CHECK(eq.object->support == 2);  // the maps agree only at q
  CHECK(eq.solutions[1] == std::vector<std::uint32_t>{0, 1});
  CHECK(eq.solutions[0].empty());

  // equalizing an arrow with itself changes nothing
  LimitResult trivial = equalizer(f, f);
  CHECK(trivial.object->support == 3);

  CHECK_THROWS_AS(equalizer(f, hom_set(obj21(3), obj21(3)).front()), Error);
}

TEST_CASE("pullback of distinct points shrinks the support") {
  auto alg = fixtures::two_atoms();
  auto one = terminal_object(alg);
  auto y = obj22(3);
  // two global points of y differing at p only
  FArrow pt1(one, y, {{0}, {0}});
  FArrow pt2(one, y, {{1}, {0}});
  LimitResult pb = pullback(pt1, pt2);
  CHECK(pb.candidate_support == 3);
  CHECK(pb.object->support == 2);
  CHECK(pb.legs.size() == 2);
  // the surviving component pairs the two copies of the point
  CHECK(pb.solutions[1] == std::vector<std::uint32_t>{0});
}

TEST_CASE("separating arrows") {
  auto x = obj21(1);
  auto y = obj22(3);
  FArrow f(x, y, {{0, 1}, {}});
  FArrow g(x, y, {{1, 0}, {}});
  SeparatingResult sep = separating_arrow(f, g);
  CHECK(sep.atom == 0);
  CHECK(sep.u.src()->support == 1);
  CHECK(sep.u.src()->carrier.componentwise_equal(StalkSheaf::terminal(x->carrier.algebra())));
  CHECK_FALSE(compose(f, sep.u) == compose(g, sep.u));

  CHECK_THROWS_AS(separating_arrow(f, f), Error);

  // a pair differing only at the atom q separates there
  auto z = obj22(3);
  FArrow h1 = identity_arrow(z);
  FArrow h2(z, z, {{0, 1}, {1, 0}});
  CHECK(separating_arrow(h1, h2).atom == 1);
}

TEST_CASE("universe enumeration is canonical") {
  auto alg = universe_algebra(2);
  auto universe = enumerate_objects(alg, 2);
  CHECK(universe.size() == 13);  // one initial + 3 supports x 4 profiles
  CHECK(universe.front()->support == 0);
  std::set<std::string> shown;
  for (const auto& obj : universe) shown.insert(object_show(*obj));
  CHECK(shown.size() == universe.size());

  CHECK(enumerate_objects(universe_algebra(0), 2).size() == 1);
  CHECK(enumerate_objects(universe_algebra(1), 2).size() == 3);
}

TEST_CASE("limit constructions satisfy their universal properties") {
  Report r = limits_check(1, 2);
  for (const auto& line : r.checks) {
    INFO(line.name, ": ", line.detail);
    CHECK(line.pass);
  }
}
