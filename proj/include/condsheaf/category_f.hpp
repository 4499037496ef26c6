#pragma once

#include "condsheaf/report.hpp"
#include "condsheaf/sheaf.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace condsheaf {

/// Object of the quotient category: a support element paired with a carrier
/// sheaf on the full algebra whose stalks are all non-empty (so every
/// restriction map is surjective). Every object with support 0 is canonically
/// identified with the initial object.
struct FObject {
  Mask support = 0;
  StalkSheaf carrier;
};

using FObjectPtr = std::shared_ptr<const FObject>;

FObjectPtr make_fobject(Mask support, StalkSheaf carrier);
FObjectPtr initial_object(AlgebraPtr alg);   // (0, terminal carrier), the canonical representative
FObjectPtr terminal_object(AlgebraPtr alg);  // (full, terminal carrier)
bool objects_equal(const FObject& x, const FObject& y);
std::string object_show(const FObject& x);

/// Arrow between objects in normal form: one stalk function per atom below
/// the source support. Two raw transformations agreeing below the source
/// support have the same normal form, so arrow equality is syntactic.
class FArrow {
public:
  FArrow(FObjectPtr src, FObjectPtr tgt, std::vector<std::vector<std::uint32_t>> maps_below_support);
  const FObjectPtr& src() const { return src_; }
  const FObjectPtr& tgt() const { return tgt_; }
  const std::vector<std::uint32_t>& map_at(int atom) const;
  std::uint64_t apply(Mask c, std::uint64_t idx) const;  // component action, c <= src support
  std::string show() const;
  friend bool operator==(const FArrow& a, const FArrow& b);
  friend bool operator!=(const FArrow& a, const FArrow& b) { return !(a == b); }

private:
  FObjectPtr src_, tgt_;
  std::vector<std::vector<std::uint32_t>> maps_;  // indexed by ambient atom, filled below support
};

FArrow identity_arrow(const FObjectPtr& x);
FArrow compose(const FArrow& g, const FArrow& f);

/// All arrows from src to tgt: empty unless the source support is below the
/// target support; otherwise every tuple of stalk functions below the source
/// support, in a deterministic order.
std::vector<FArrow> hom_set(const FObjectPtr& src, const FObjectPtr& tgt);

/// Refutation data for a failed monic test: two distinct global-element
/// style arrows with equal composites through the tested arrow.
struct MonicWitness {
  int atom = -1;
  std::uint32_t x = 0, y = 0;  // distinct stalk elements with equal image
  std::optional<FArrow> u, v;  // (a, terminal) -> source, composites R-equal
};

/// An arrow is monic iff its stalk function at every atom below the source
/// support is injective. On failure a witness pair is produced.
bool is_monic(const FArrow& m, MonicWitness* witness = nullptr);

/// Subobject determined by an equivalence class of monics into an object:
/// the source support together with the per-atom images.
struct SubObject {
  Mask support = 0;
  std::vector<std::vector<std::uint32_t>> stalk_subsets;  // per ambient atom; empty above support

  friend bool operator==(const SubObject&, const SubObject&) = default;
};

SubObject subobject_of_monic(const FArrow& m);

/// The unique arrow (a,X) -> (b,Y) whose components below a equal h.
/// h is given as stalk maps at atoms below the source support; the default
/// transformation used above the support never affects the normal form
/// (it is enumerated in tests precisely to confirm that).
FArrow extend_transformation(const FObjectPtr& src, const FObjectPtr& tgt,
                             const std::vector<std::vector<std::uint32_t>>& h_below_support,
                             const std::optional<std::vector<std::vector<std::uint32_t>>>& default_g =
                                 std::nullopt);

/// Combination of h (below a) and g (elsewhere) into full per-atom maps.
std::vector<std::vector<std::uint32_t>> combine_below(const StalkSheaf& x, const StalkSheaf& y,
                                                      Mask a,
                                                      const std::vector<std::vector<std::uint32_t>>& h,
                                                      const std::vector<std::vector<std::uint32_t>>& g);

/// Literal evaluation of the gluing formula for the combined transformation
/// at an arbitrary element d: restrict into the two regions, apply h and g,
/// amalgamate. Returns the full index map component(d) -> component(d).
std::vector<std::uint64_t> extend_formula_eval(const StalkSheaf& x, const StalkSheaf& y, Mask a,
                                               const std::vector<std::vector<std::uint32_t>>& h,
                                               const std::vector<std::vector<std::uint32_t>>& g,
                                               Mask d);

/// Stalkwise constant map to the least target element.
std::vector<std::vector<std::uint32_t>> default_transformation(const StalkSheaf& x,
                                                               const StalkSheaf& y);

/// A (co)limit construction: the object, its legs, and for equalizer-like
/// constructions the pointwise solution data before support shrinking.
struct LimitResult {
  FObjectPtr object;
  std::vector<FArrow> legs;
  Mask candidate_support = 0;  // support of the construction before shrinking
  /// Per-atom solution sets below candidate_support. For pullbacks the
  /// entries are pair codes xi + yi * |X_p|; for equalizers source indices.
  std::vector<std::vector<std::uint32_t>> solutions;
};

LimitResult product(const FObjectPtr& a, const FObjectPtr& b);
LimitResult coproduct(const FObjectPtr& a, const FObjectPtr& b);
LimitResult equalizer(const FArrow& f, const FArrow& g);
LimitResult pullback(const FArrow& f, const FArrow& g);

struct SeparatingResult {
  FArrow u;        // from a subterminal object, composites with f and g differ
  int atom = -1;   // the separating component
  std::uint32_t point = 0;
};

/// For distinct parallel arrows, an arrow from a subobject of the terminal
/// that tells them apart under composition.
SeparatingResult separating_arrow(const FArrow& f, const FArrow& g);

/// Bounded object universe: one canonical initial object plus every non-zero
/// support paired with every stalk-size profile in 1..max_stalk. Stalk labels
/// are generated per atom ("x1","x2",... at the first atom, "y1",... next).
std::vector<FObjectPtr> enumerate_objects(const AlgebraPtr& alg, int max_stalk);

/// Canonical n-atom algebra used by generated universes: atoms "p","q","r",...
AlgebraPtr universe_algebra(int atoms);

/// Exhaustive universal-property verification of the four constructions over
/// a bounded universe; every cone/cocone apex ranges over the universe.
Report limits_check(int atoms, int max_stalk);

}  // namespace condsheaf
