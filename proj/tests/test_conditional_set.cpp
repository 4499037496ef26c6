#include <doctest.h>

#include <set>

#include "helpers.hpp"

using namespace condsheaf;

namespace {

bool has_kind(const std::vector<Violation>& violations, const std::string& kind) {
  for (const auto& v : violations)
    if (v.kind == kind) return true;
  return false;
}

// the running example written out by hand: pairs over stalks {x1,x2},{y1}
CondSetData pairs_data() {
  CondSetData data;
  data.alg = fixtures::two_atoms();
  data.lives_on = 3;
  data.components = {{0, {"*"}}, {1, {"x1", "x2"}}, {2, {"y1"}}, {3, {"(x1,y1)", "(x2,y1)"}}};
  data.gammas[3] = {{"(x1,y1)", "(x1,y1)"}, {"(x2,y1)", "(x2,y1)"}};
  data.gammas[1] = {{"(x1,y1)", "x1"}, {"(x2,y1)", "x2"}};
  data.gammas[2] = {{"(x1,y1)", "y1"}, {"(x2,y1)", "y1"}};
  data.gammas[0] = {{"(x1,y1)", "*"}, {"(x2,y1)", "*"}};
  return data;
}

}  // namespace

TEST_CASE("axioms validate on the projection example") {
  auto validation = validate_condset(pairs_data());
  REQUIRE(validation.ok());
  CHECK(validation.value->lives_on() == 3);
}

TEST_CASE("axiom violations carry witnesses") {
  SUBCASE("constant gamma is not surjective") {
    auto data = pairs_data();
    data.gammas[1] = {{"(x1,y1)", "x1"}, {"(x2,y1)", "x1"}};
    auto validation = validate_condset(data);
    CHECK_FALSE(validation.ok());
    CHECK(has_kind(validation.axiom, "surjectivity"));
  }
  SUBCASE("an oversized top component breaks stability uniqueness") {
    CondSetData data;
    data.alg = fixtures::two_atoms();
    data.lives_on = 3;
    data.components = {{0, {"*"}}, {1, {"x1", "x2"}}, {2, {"y1"}}, {3, {"a", "b", "c"}}};
    data.gammas[3] = {{"a", "a"}, {"b", "b"}, {"c", "c"}};
    data.gammas[1] = {{"a", "x1"}, {"b", "x2"}, {"c", "x2"}};
    data.gammas[2] = {{"a", "y1"}, {"b", "y1"}, {"c", "y1"}};
    data.gammas[0] = {{"a", "*"}, {"b", "*"}, {"c", "*"}};
    auto validation = validate_condset(data);
    CHECK_FALSE(validation.ok());
    CHECK(has_kind(validation.axiom, "stability-uniqueness"));
  }
  SUBCASE("a top map that is not the identity") {
    auto data = pairs_data();
    data.gammas[3] = {{"(x1,y1)", "(x2,y1)"}, {"(x2,y1)", "(x1,y1)"}};
    auto validation = validate_condset(data);
    CHECK(has_kind(validation.axiom, "gamma-top-identity"));
  }
  SUBCASE("consistency break") {
    CondSetData data;
    data.alg = fixtures::two_atoms();
    data.lives_on = 3;
    // gamma at p identifies a,b but gamma at 0 cannot separate anything, so
    // break consistency between q and 0 instead: impossible; use p above 0
    data.components = {{0, {"*"}}, {1, {"u"}}, {2, {"v1", "v2"}}, {3, {"a", "b"}}};
    data.gammas[3] = {{"a", "a"}, {"b", "b"}};
    data.gammas[1] = {{"a", "u"}, {"b", "u"}};
    data.gammas[2] = {{"a", "v1"}, {"b", "v2"}};
    data.gammas[0] = {{"a", "*"}, {"b", "*"}};
    // valid so far; now make a sub-element map separate what a larger one
    // identifies by swapping the roles: gamma at q identifies nothing, and
    // gamma at 1(=p|q) is the identity. Break (iii) via gamma at p vs top:
    // unreachable on this shape, so check a genuine (iii) break on 3 atoms.
    auto validation = validate_condset(data);
    CHECK(validation.ok());

    CondSetData bad;
    bad.alg = fixtures::two_atoms();
    bad.lives_on = 1;  // relative algebra below p: elements 0 and p
    bad.components = {{0, {"*", "**"}}, {1, {"a", "b"}}};
    bad.gammas[1] = {{"a", "a"}, {"b", "b"}};
    bad.gammas[0] = {{"a", "*"}, {"b", "**"}};
    auto v2 = validate_condset(bad);
    CHECK_FALSE(v2.ok());
    CHECK(has_kind(v2.axiom, "x0-singleton"));
  }
  SUBCASE("structural gaps are separate") {
    auto data = pairs_data();
    data.gammas.erase(1);
    auto validation = validate_condset(data);
    CHECK_FALSE(validation.ok());
    CHECK(has_kind(validation.structural, "structure"));
    CHECK(validation.axiom.empty());
  }
}

TEST_CASE("consistency violation") {
  // a middle element identifies two top elements that a lower one separates
  auto alg = fixtures::three_atoms();
  CondSetData data;
  data.alg = alg;
  data.lives_on = 7;
  data.components = {{0, {"*"}},        {1, {"u1", "u2"}}, {2, {"v1", "v2"}},
                     {4, {"w"}},        {3, {"m1", "m2", "m3", "m4"}},
                     {5, {"k1", "k2"}}, {6, {"n1", "n2"}}, {7, {"a", "b", "c", "d"}}};
  auto top = std::vector<std::string>{"a", "b", "c", "d"};
  auto assign = [&](Mask c, std::vector<std::string> values) {
    for (std::size_t i = 0; i < top.size(); ++i) data.gammas[c][top[i]] = values[i];
  };
  assign(7, {"a", "b", "c", "d"});
  assign(3, {"m1", "m2", "m3", "m4"});
  assign(1, {"u1", "u1", "u2", "u2"});
  assign(2, {"v1", "v2", "v1", "v2"});
  assign(4, {"w", "w", "w", "w"});
  assign(5, {"k1", "k1", "k2", "k2"});
  assign(6, {"n1", "n2", "n1", "n2"});
  assign(0, {"*", "*", "*", "*"});
  // gamma at p|q separates everything that finer maps separate: valid
  CHECK(validate_condset(data).ok());

  // collapse at p|q while p still separates: consistency must fire
  assign(3, {"m1", "m1", "m3", "m4"});
  auto v = validate_condset(data);
  CHECK_FALSE(v.ok());
  CHECK(has_kind(v.axiom, "consistency"));
}

TEST_CASE("sheaf correspondence round-trips") {
  auto x = fixtures::model21();
  CondSet c = from_sheaf(x);
  CHECK(validate_condset(c.data()).ok());
  CHECK(c.component(3) == std::vector<std::string>{"(x1,y1)", "(x2,y1)"});

  StalkSheaf back = to_sheaf(c);
  CHECK(back.componentwise_equal(x));
  CHECK(from_sheaf(back).equal_ignoring_x0(c));

  // the by-hand data and the derived conditional set agree
  auto by_hand = validate_condset(pairs_data());
  REQUIRE(by_hand.ok());
  CHECK(by_hand.value->equal_ignoring_x0(c));
}

TEST_CASE("round trips hold on every relative algebra") {
  auto alg = fixtures::three_atoms();
  auto model = StalkSheaf::make(alg, {{"p", {"x1", "x2"}}, {"q", {"y1", "y2", "y3"}}, {"r", {"z1"}}});
  for (Mask lives_on : bits::submasks(alg->full())) {
    StalkSheaf x = model.restricted(lives_on);
    CondSet c = from_sheaf(x);
    CHECK(validate_condset(c.data()).ok());
    CHECK(to_sheaf(c).componentwise_equal(x));
    CHECK(from_sheaf(to_sheaf(c)).equal_ignoring_x0(c));
  }
}

TEST_CASE("degenerate and terminal conditional sets") {
  auto alg = fixtures::two_atoms();
  CondSet empty = CondSet::conditional_empty(alg);
  CHECK(empty.lives_on() == 0);
  CHECK(to_sheaf(empty).top() == 0);

  CondSet terminal = CondSet::terminal_on(alg, alg->full());
  StalkSheaf one = to_sheaf(terminal);
  CHECK(one.componentwise_equal(StalkSheaf::terminal(alg)));
}

TEST_CASE("from_sheaf rejects non-surjective extensional data") {
  auto alg = fixtures::two_atoms();
  ExtensionalSheaf ext;
  ext.alg = alg;
  ext.top = alg->full();
  ext.components = {{0, {"*"}}, {1, {"u", "v"}}, {2, {"w"}}, {3, {"s", "t"}}};
  for (Mask a : bits::submasks(ext.top)) {
    for (Mask b : bits::submasks(a)) {
      auto& f = ext.maps[{a, b}];
      for (const auto& lbl : ext.components[a])
        f[lbl] = (b == a) ? lbl : ext.components[b].front();
    }
  }
  CHECK_THROWS_AS(from_sheaf(ext), Error);

  // a valid surjective extensional sheaf converts fine
  auto good = ExtensionalSheaf::of(fixtures::model21());
  CondSet c = from_sheaf(good);
  CHECK(validate_condset(c.data()).ok());
}

TEST_CASE("conditional inclusion") {
  auto alg = fixtures::two_atoms();
  CondSet y = from_sheaf(fixtures::model21());
  CondSet empty = CondSet::conditional_empty(alg);
  CHECK(conditional_inclusion(empty, y));
  CHECK(conditional_inclusion(y, y));

  CondSet x_on_p = from_sheaf(StalkSheaf::make_on(alg, 1, {{0, {"x1"}}}));
  CHECK(conditional_inclusion(x_on_p, y));
  CHECK_FALSE(conditional_inclusion(y, x_on_p));  // support comparison fails

  CondSet z_on_p = from_sheaf(StalkSheaf::make_on(alg, 1, {{0, {"other"}}}));
  CHECK_FALSE(conditional_inclusion(z_on_p, y));  // labels not contained

  auto other_alg = Algebra::make({"a", "b"});
  CHECK_THROWS_AS(conditional_inclusion(from_sheaf(StalkSheaf::terminal(other_alg)), y), Error);
}

TEST_CASE("inclusion is a partial order on subsets of one model") {
  auto alg = fixtures::two_atoms();
  // all conditional subsets of the (2,1)-stalk model, as conditional sets
  std::vector<CondSet> subsets;
  for (Mask support : bits::submasks(Mask{3})) {
    std::vector<std::vector<std::string>> p_choices, q_choices;
    if (support & 1) p_choices = {{"x1"}, {"x2"}, {"x1", "x2"}};
    else p_choices = {{}};
    if (support & 2) q_choices = {{"y1"}};
    else q_choices = {{}};
    for (const auto& pc : p_choices) {
      for (const auto& qc : q_choices) {
        std::map<int, std::vector<std::string>> stalks;
        if (support & 1) stalks[0] = pc;
        if (support & 2) stalks[1] = qc;
        subsets.push_back(from_sheaf(StalkSheaf::make_on(alg, support, std::move(stalks))));
      }
    }
  }
  REQUIRE(subsets.size() == 8);
  for (const auto& a : subsets) {
    CHECK(conditional_inclusion(a, a));
    for (const auto& b : subsets) {
      if (conditional_inclusion(a, b) && conditional_inclusion(b, a))
        CHECK(a.equal_ignoring_x0(b));
      for (const auto& c : subsets)
        if (conditional_inclusion(a, b) && conditional_inclusion(b, c))
          CHECK(conditional_inclusion(a, c));
    }
  }
}

TEST_CASE("conditional product") {
  auto alg = fixtures::two_atoms();
  CondSet x = from_sheaf(fixtures::model21());
  CondSet one = CondSet::terminal_on(alg, alg->full());

  CondSet with_unit = conditional_product({x, one});
  CHECK(with_unit.lives_on() == x.lives_on());
  for (Mask c : bits::submasks(x.lives_on()))
    CHECK(with_unit.component(c).size() == x.component(c).size());

  CondSet x_on_p = from_sheaf(StalkSheaf::make_on(alg, 1, {{0, {"x1", "x2"}}}));
  CondSet y_on_q = from_sheaf(StalkSheaf::make_on(alg, 2, {{1, {"y1"}}}));
  CondSet degenerate = conditional_product({x_on_p, y_on_q});
  CHECK(degenerate.lives_on() == 0);
  CHECK(degenerate.equal_ignoring_x0(CondSet::conditional_empty(alg)));

  CondSet squared = conditional_product({x, x});
  CHECK(squared.component(3).size() == 4);
  CHECK(validate_condset(squared.data()).ok());

  CHECK_THROWS_AS(conditional_product({}), Error);
}

TEST_CASE("product supports meet for assorted families") {
  auto alg = fixtures::three_atoms();
  std::vector<CondSet> pool;
  for (Mask support : {Mask{7}, Mask{3}, Mask{5}, Mask{1}}) {
    std::map<int, std::vector<std::string>> stalks;
    for (int atom : bits::atom_list(support)) stalks[atom] = {"e1", "e2"};
    pool.push_back(from_sheaf(StalkSheaf::make_on(alg, support, std::move(stalks))));
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = 0; j < pool.size(); ++j) {
      CondSet prod = conditional_product({pool[i], pool[j]});
      CHECK(prod.lives_on() == (pool[i].lives_on() & pool[j].lives_on()));
      CHECK(validate_condset(prod.data()).ok());
    }
  }
}

namespace {

CondSubset graph_of_identity(const CondSet& x, const CondSet& prod, Mask d) {
  CondSubset g;
  g.support = d;
  for (Mask c : bits::submasks(d)) {
    auto kx = static_cast<std::uint32_t>(x.component(c).size());
    for (std::uint32_t i = 0; i < kx; ++i)
      g.members[c].push_back(i + i * kx);
    std::sort(g.members[c].begin(), g.members[c].end());
  }
  (void)prod;
  return g;
}

}  // namespace

TEST_CASE("conditional functions") {
  auto alg = fixtures::two_atoms();
  CondSet x = from_sheaf(fixtures::model21());
  CondSet prod = conditional_product({x, x});
  Mask d = x.lives_on();

  SUBCASE("identity graph validates") {
    auto g = graph_of_identity(x, prod, d);
    auto validation = validate_cond_function(g, x, x, d);
    REQUIRE(validation.ok());
    const auto& f_top = validation.component_functions.at(d);
    for (std::uint32_t i = 0; i < f_top.size(); ++i) CHECK(f_top[i] == i);
  }
  SUBCASE("missing value breaks totality") {
    auto g = graph_of_identity(x, prod, d);
    // drop the pair over x2 at the component p
    auto& at_p = g.members.at(1);
    at_p.erase(at_p.begin() + 1);
    auto validation = validate_cond_function(g, x, x, d);
    CHECK_FALSE(validation.ok());
    // dropping a member also breaks subset closure, caught first
    CHECK((has_kind(validation.structural, "restriction-closure") ||
           has_kind(validation.axiom, "totality")));
  }
  SUBCASE("two values break functionality") {
    CondSubset g;
    g.support = d;
    auto kx = static_cast<std::uint32_t>(x.component(3).size());
    for (Mask c : bits::submasks(d)) {
      auto k = static_cast<std::uint32_t>(x.component(c).size());
      for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j) g.members[c].push_back(i + j * k);
      std::sort(g.members[c].begin(), g.members[c].end());
    }
    (void)kx;
    auto validation = validate_cond_function(g, x, x, d);
    CHECK_FALSE(validation.ok());
    CHECK(has_kind(validation.axiom, "functionality"));
  }
  SUBCASE("graph support must reach the domain support") {
    auto g = graph_of_identity(x, prod, 1);
    auto validation = validate_cond_function(g, x, x, d);
    CHECK_FALSE(validation.ok());
    CHECK(has_kind(validation.structural, "structure"));
  }
}

TEST_CASE("conditional subset validation") {
  auto alg = fixtures::two_atoms();
  CondSet w = from_sheaf(fixtures::model22());

  CondSubset good;
  good.support = 3;
  good.members[0] = {0};
  good.members[1] = {0};         // x1
  good.members[2] = {0, 1};      // y1, y2
  good.members[3] = {0, 2};     // (x1,y1), (x1,y2)
  CHECK(validate_cond_subset(good, w).empty());

  CondSubset diagonal;  // not closed under amalgamation
  diagonal.support = 3;
  diagonal.members[0] = {0};
  diagonal.members[1] = {0, 1};
  diagonal.members[2] = {0, 1};
  diagonal.members[3] = {0, 3};  // (x1,y1) and (x2,y2) only
  auto violations = validate_cond_subset(diagonal, w);
  REQUIRE_FALSE(violations.empty());
  CHECK(has_kind(violations, "amalgamation-closure"));

  CondSubset empty_component;
  empty_component.support = 1;
  empty_component.members[0] = {0};
  empty_component.members[1] = {};
  CHECK(has_kind(validate_cond_subset(empty_component, w), "non-empty"));
}

TEST_CASE("stability amalgamation ignores the free pick") {
  CondSet c = from_sheaf(fixtures::model22());
  // glue over the partition {p} of p with every free pick over q
  for (std::uint32_t pick = 0; pick < 2; ++pick) {
    for (std::uint32_t choice = 0; choice < 2; ++choice) {
      CHECK(amalgamate_via_stability(c, 1, {1}, {pick}, choice) == pick);
    }
  }
  CHECK_THROWS_AS(amalgamate_via_stability(c, 1, {1}, {0}, 7), Error);
}
