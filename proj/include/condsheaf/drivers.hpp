#pragma once

#include "condsheaf/report.hpp"

namespace condsheaf {

/// Every stalk-form model with up to `atoms` atoms and stalks up to
/// `max_stalk`: the derived conditional set satisfies every axiom, both
/// round trips are identities, and amalgamation through stability does not
/// depend on the free pick.
Report roundtrip_check(int atoms, int max_stalk);

/// Every sieve on every element of the n-atom algebra, peeled in every member
/// order: the result is a partition of the base refining the sieve.
Report disjointify_check(int atoms);

/// Every stalk-form model re-encoded extensionally is accepted; three
/// constructed violation fixtures (non-singleton component at 0, a broken
/// composition, a gluing-uniqueness break) are rejected with the right kinds.
Report sheaf_axioms_check(int atoms, int max_stalk);

}  // namespace condsheaf
