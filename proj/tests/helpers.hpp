#pragma once

#include "condsheaf/category_f.hpp"
#include "condsheaf/conditional_set.hpp"

// small fixtures shared across the unit suites
namespace fixtures {

using namespace condsheaf;

inline AlgebraPtr two_atoms() { return Algebra::make({"p", "q"}); }
inline AlgebraPtr three_atoms() { return Algebra::make({"p", "q", "r"}); }

// stalks p -> {x1,x2}, q -> {y1}: the running example model
inline StalkSheaf model21() {
  return StalkSheaf::make(two_atoms(), {{"p", {"x1", "x2"}}, {"q", {"y1"}}});
}

inline StalkSheaf model22() {
  return StalkSheaf::make(two_atoms(), {{"p", {"x1", "x2"}}, {"q", {"y1", "y2"}}});
}

}  // namespace fixtures
