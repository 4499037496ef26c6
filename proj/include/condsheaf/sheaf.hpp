#pragma once

#include "condsheaf/boolean_algebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace condsheaf {

/// Cap on lazily enumerated component sizes. Defaults to 10^6 tuples;
/// overridden by the CONDSHEAF_MAX_TUPLES environment variable.
std::uint64_t component_guard();

/// Sheaf on the partition site of a finite algebra, in stalk form: one finite
/// non-empty label set per atom below `top`. The component at an element a is
/// the product of the stalks at the atoms below a, realized lazily through
/// mixed-radix indices (first atom = least significant digit); restriction
/// maps are coordinate projections. The component at 0 is the canonical
/// singleton. Every restriction map is surjective by construction.
class StalkSheaf {
public:
  /// Sheaf on the full algebra, stalks keyed by atom name. Stalk label lists
  /// are canonicalized (sorted, duplicates rejected); empty stalks rejected.
  static StalkSheaf make(AlgebraPtr alg, const std::map<std::string, std::vector<std::string>>& stalks);
  /// Sheaf on the relative algebra below `top`; stalks keyed by atom index.
  static StalkSheaf make_on(AlgebraPtr alg, Mask top, std::map<int, std::vector<std::string>> stalks);
  /// All stalks the singleton {"*"}.
  static StalkSheaf terminal(AlgebraPtr alg, Mask top);
  static StalkSheaf terminal(AlgebraPtr alg);

  const AlgebraPtr& algebra() const { return alg_; }
  Mask top() const { return top_; }
  const std::vector<std::string>& stalk(int atom) const;
  std::uint64_t stalk_size(int atom) const { return stalk(atom).size(); }
  std::uint32_t stalk_index(int atom, const std::string& label) const;  // throws if absent

  std::uint64_t component_size(Mask a) const;  // guarded product
  std::uint64_t restrict_index(Mask from, Mask to, std::uint64_t idx) const;
  /// Stalk index of the tuple coordinate at `atom` (atom must lie in a).
  std::uint32_t digit(Mask a, std::uint64_t idx, int atom) const;
  /// Inverse of digit extraction: build a component index from coordinates.
  std::uint64_t index_from_digits(Mask a, const std::vector<std::uint32_t>& digits_by_position) const;

  /// Tuple label: "*" at 0, the stalk label at an atom, "(l1,l2,...)" above.
  std::string component_label(Mask a, std::uint64_t idx) const;
  std::vector<std::string> component_labels(Mask a) const;

  /// The restriction X|_a: same stalks, top lowered to a.
  StalkSheaf restricted(Mask a) const;

  /// Label-level equality of all components (stalk lists equal per atom,
  /// same top). The identity of the component at 0 never matters.
  bool componentwise_equal(const StalkSheaf& o) const;
  /// Componentwise containment: top below o's top and every stalk below this
  /// top a subset of o's stalk. Restriction maps then agree automatically.
  bool subsheaf_of(const StalkSheaf& o) const;

private:
  StalkSheaf(AlgebraPtr alg, Mask top, std::vector<std::vector<std::string>> stalks)
      : alg_(std::move(alg)), top_(top), stalks_(std::move(stalks)) {}
  AlgebraPtr alg_;
  Mask top_;
  std::vector<std::vector<std::string>> stalks_;  // indexed by ambient atom index
};

/// The amalgamation of a matching family over a partition of `base`: the
/// unique component element restricting to the given picks. Parts must be
/// pairwise disjoint with join `base`; `picks[i]` indexes component(parts[i]).
/// The empty partition of 0 yields the canonical point.
std::uint64_t amalgamate(const StalkSheaf& x, Mask base, const std::vector<Mask>& parts,
                         const std::vector<std::uint64_t>& picks);

StalkSheaf sheaf_from_stalks(AlgebraPtr alg, const std::map<std::string, std::vector<std::string>>& stalks);
StalkSheaf restrict_sheaf(const StalkSheaf& x, Mask a);
bool is_surjective(const StalkSheaf& x);

/// Raw extensional presheaf data on the order: one labeled finite set per
/// element below `top` and one label map per comparable pair. Exists to make
/// the sheaf axioms falsifiable; validation produces the stalk form.
struct ExtensionalSheaf {
  AlgebraPtr alg;
  Mask top = 0;
  /// Component label sets, keyed by element mask.
  std::map<Mask, std::vector<std::string>> components;
  /// Restriction maps keyed by (from, to) with to <= from, as label maps.
  std::map<std::pair<Mask, Mask>, std::map<std::string, std::string>> maps;

  static ExtensionalSheaf of(const StalkSheaf& x);  // canonical encoding
};

struct Violation {
  std::string kind;     // e.g. "x0-singleton", "functoriality", "amalgamation-uniqueness"
  std::string message;  // names concrete elements and atoms
};

struct SheafValidation {
  std::vector<Violation> structural;  // missing components/maps, bad labels
  std::vector<Violation> axiom;       // singleton/functoriality/gluing failures
  std::optional<StalkSheaf> normalized;  // present when ok()
  bool ok() const { return structural.empty() && axiom.empty(); }
};

/// Full sheaf-axiom validation: X_0 a singleton, identities and compositions
/// of the restriction maps, and unique gluing over every partition of every
/// element. Reports every violation found, with witnesses.
SheafValidation validate_sheaf(const ExtensionalSheaf& ext);

/// nullopt when every restriction map is surjective; otherwise a witness
/// naming the pair (to, from) and a target label outside the image.
std::optional<Violation> surjectivity_witness(const ExtensionalSheaf& ext);

/// Natural transformation between stalk-form sheaves with equal algebra and
/// top: one stalk function per atom; all other components act coordinatewise,
/// which makes naturality hold at every order pair.
class StalkTransform {
public:
  StalkTransform(StalkSheaf source, StalkSheaf target,
                 std::vector<std::vector<std::uint32_t>> atom_maps);
  const StalkSheaf& source() const { return src_; }
  const StalkSheaf& target() const { return tgt_; }
  const std::vector<std::uint32_t>& atom_map(int atom) const;
  std::uint64_t apply(Mask a, std::uint64_t idx) const;  // component-level action
  friend bool operator==(const StalkTransform& a, const StalkTransform& b);

private:
  StalkSheaf src_, tgt_;
  std::vector<std::vector<std::uint32_t>> atom_maps_;  // per ambient atom below top
};

StalkTransform identity_transform(const StalkSheaf& x);
StalkTransform compose(const StalkTransform& g, const StalkTransform& f);
/// True iff every component function at an element below a is injective
/// (equivalently: every stalk map at an atom below a is).
bool is_componentwise_injective_below(const StalkTransform& f, Mask a);
/// All transformations from the terminal sheaf, i.e. one stalk pick per atom.
std::vector<StalkTransform> global_elements(const StalkSheaf& x);
/// Exhaustive naturality check over every order pair and component element;
/// holds by construction, evaluated honestly for verification sweeps.
bool naturality_holds(const StalkTransform& f);

/// Naturality check for extensionally given transformation data.
std::vector<Violation> validate_nat_trans(const ExtensionalSheaf& src, const ExtensionalSheaf& tgt,
                                          const std::map<Mask, std::map<std::string, std::string>>& components);

}  // namespace condsheaf
