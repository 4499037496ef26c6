#include <doctest.h>

#include <set>

#include "helpers.hpp"

#include "condsheaf/subobject_lattice.hpp"

using namespace condsheaf;

namespace {

FObjectPtr ambient21() { return make_fobject(3, fixtures::model21()); }

// subobject from per-atom label subsets (empty = atom excluded)
SubObject sub(const FObjectPtr& obj, const std::vector<std::vector<std::string>>& picks) {
  SubObject s;
  s.stalk_subsets.resize(picks.size());
  for (int atom = 0; atom < static_cast<int>(picks.size()); ++atom) {
    if (picks[static_cast<std::size_t>(atom)].empty()) continue;
    s.support |= Mask{1} << atom;
    for (const auto& label : picks[static_cast<std::size_t>(atom)])
      s.stalk_subsets[static_cast<std::size_t>(atom)].push_back(
          obj->carrier.stalk_index(atom, label));
    auto& v = s.stalk_subsets[static_cast<std::size_t>(atom)];
    std::sort(v.begin(), v.end());
  }
  return s;
}

}  // namespace

TEST_CASE("lattice enumeration sizes") {
  CHECK(SubLattice::enumerate(ambient21()).size() == 8);
  CHECK(SubLattice::enumerate(terminal_object(fixtures::two_atoms())).size() == 4);
  CHECK(SubLattice::enumerate(initial_object(fixtures::two_atoms())).size() == 1);
}

TEST_CASE("join meet and complement on the running example") {
  auto obj = ambient21();
  SubLattice lat = SubLattice::enumerate(obj);

  SubObject x1_at_p = sub(obj, {{"x1"}, {}});
  SubObject y1_at_q = sub(obj, {{}, {"y1"}});
  SubObject joined = lat.join({x1_at_p, y1_at_q});
  CHECK(joined == sub(obj, {{"x1"}, {"y1"}}));

  CHECK(lat.join({x1_at_p, x1_at_p}) == x1_at_p);
  CHECK(lat.join({lat.least(), x1_at_p}) == x1_at_p);

  SubObject left = sub(obj, {{"x1"}, {"y1"}});
  SubObject right = sub(obj, {{"x2"}, {"y1"}});
  SubObject met = lat.meet({left, right});
  CHECK(met == y1_at_q);  // intersection empty at p, support shrinks to q

  CHECK(lat.meet({lat.greatest(), left}) == left);
  CHECK(lat.meet({x1_at_p, y1_at_q}) == lat.least());

  SubObject c = lat.complement_via_join(x1_at_p);
  CHECK(c == sub(obj, {{"x2"}, {"y1"}}));
  CHECK(lat.complement_via_join(lat.least()) == lat.greatest());
  CHECK(lat.complement_via_join(lat.greatest()) == lat.least());
  CHECK(lat.complement_direct(x1_at_p) == c);

  CHECK_THROWS_AS(lat.join({}), Error);
  CHECK_THROWS_AS(lat.meet({}), Error);
}

TEST_CASE("join components stay in product form and the extension is padding") {
  auto obj = ambient21();
  SubLattice lat = SubLattice::enumerate(obj);
  SubObject x1_at_p = sub(obj, {{"x1"}, {}});
  SubObject y1_at_q = sub(obj, {{}, {"y1"}});

  auto z = lat.join_components({x1_at_p, y1_at_q});
  SubObject joined = lat.join({x1_at_p, y1_at_q});
  for (Mask c : bits::submasks(joined.support)) CHECK(z.at(c) == lat.component_set(joined, c));

  // the extension above the joined support carries the ambient data and
  // never alters the subobject itself
  SubObject partial = sub(obj, {{"x1"}, {}});
  auto zhat = lat.join_zhat({partial});
  CHECK(zhat.at(1) == lat.component_set(partial, 1));
  CHECK(zhat.at(2).size() == obj->carrier.component_size(2));
  CHECK(zhat.at(3).size() == 1 * obj->carrier.stalk_size(1));
}

TEST_CASE("support identity evaluated directly") {
  auto obj = ambient21();
  SubLattice lat = SubLattice::enumerate(obj);
  SubObject s1 = sub(obj, {{"x1"}, {"y1"}});
  SubObject s2 = sub(obj, {{"x2"}, {}});
  SubObject s3 = sub(obj, {{}, {"y1"}});
  Step2Result r = step2_identity(lat, s1, s2, s3);
  CHECK(r.holds);
  CHECK(r.c1 == 0);  // x1 and x2 never meet
  CHECK(r.c2 == 2);  // they share y1 at q
  CHECK(r.c3 == 2);

  for (const auto& a : lat.elements())
    for (const auto& b : lat.elements())
      for (const auto& c : lat.elements()) CHECK(step2_identity(lat, a, b, c).holds);
}

TEST_CASE("full verification passes on assorted lattices") {
  for (auto obj : {ambient21(), make_fobject(3, fixtures::model22()),
                   terminal_object(fixtures::two_atoms()), initial_object(fixtures::two_atoms()),
                   make_fobject(1, fixtures::model21())}) {
    SubLattice lat = SubLattice::enumerate(obj);
    Report r = verify_boolean_algebra(lat);
    for (const auto& line : r.checks) {
      INFO(object_show(*obj), " / ", line.name, ": ", line.detail);
      CHECK(line.pass);
    }
  }
}

TEST_CASE("terminal sublattice mirrors the ambient algebra") {
  auto one = terminal_object(fixtures::two_atoms());
  SubLattice lat = SubLattice::enumerate(one);
  CHECK(lat.size() == 4);
  std::set<Mask> supports;
  for (const auto& s : lat.elements()) supports.insert(s.support);
  CHECK(supports == std::set<Mask>{0, 1, 2, 3});
  // supports are the only data: the order is element containment
  for (const auto& s : lat.elements())
    for (const auto& t : lat.elements())
      CHECK(lat.leq(s, t) == ((s.support & t.support) == s.support));
}

TEST_CASE("lattice order matches conditional inclusion") {
  auto obj = ambient21();
  SubLattice lat = SubLattice::enumerate(obj);
  for (const auto& s : lat.elements()) {
    CondSet cs = condset_of_subobject(obj, s);
    for (const auto& t : lat.elements()) {
      CondSet ct = condset_of_subobject(obj, t);
      CHECK(lat.leq(s, t) == conditional_inclusion(cs, ct));
    }
  }
}

TEST_CASE("index lookup rejects foreign subobjects") {
  auto obj = ambient21();
  SubLattice lat = SubLattice::enumerate(obj);
  SubObject foreign;
  foreign.support = 4;  // not even a valid atom of this algebra
  foreign.stalk_subsets.resize(2);
  CHECK_THROWS_AS(lat.index_of(foreign), Error);
}

TEST_CASE("hasse diagram export") {
  auto obj = ambient21();
  SubLattice lat = SubLattice::enumerate(obj);
  std::string dot = hasse_dot(lat);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("rankdir=BT") != std::string::npos);
  // the 8-element powerset of three atoms has 12 covering edges
  std::size_t edges = 0, pos = 0;
  while ((pos = dot.find("->", pos)) != std::string::npos) {
    ++edges;
    pos += 2;
  }
  CHECK(edges == 12);
  CHECK(dot.find("p{x1}") != std::string::npos);
}

TEST_CASE("driver sweep over small universes") {
  Report r = sublattice_check(2, 2);
  for (const auto& line : r.checks) {
    INFO(line.name, ": ", line.detail);
    CHECK(line.pass);
  }
}
