#pragma once

#include "condsheaf/subobject_lattice.hpp"

#include <optional>

namespace condsheaf {

/// The truth-value sheaf of the ambient site: the component at d is the
/// relative algebra below d and restriction is meet. In stalk form every atom
/// carries the two-element stalk {bottom, the atom itself}; a component index
/// at d decodes to the join of the atoms whose coordinate says "present".
class OmegaSheaf {
public:
  explicit OmegaSheaf(AlgebraPtr alg);
  const AlgebraPtr& algebra() const { return alg_; }
  const StalkSheaf& sheaf() const { return sheaf_; }
  Mask elem_of_index(Mask d, std::uint64_t idx) const;
  std::uint64_t index_of_elem(Mask d, Mask c) const;
  std::uint32_t top_at(int atom) const;     // stalk index meaning "atom present"
  std::uint32_t bottom_at(int atom) const;  // stalk index meaning 0

private:
  AlgebraPtr alg_;
  StalkSheaf sheaf_;
  std::vector<std::uint32_t> top_idx_, bottom_idx_;
};

OmegaSheaf omega(AlgebraPtr alg);
FObjectPtr omega_object(const OmegaSheaf& om);  // (1, Omega)
/// (1,1) -> (1,Omega), picking the top truth value everywhere.
FArrow truth_arrow(const OmegaSheaf& om);

/// Characteristic maps of a subobject of y below its support: at each atom,
/// members of the subobject go to the top truth value, everything else to
/// bottom.
std::vector<std::vector<std::uint32_t>> characteristic_maps(const FObjectPtr& y,
                                                            const SubObject& s,
                                                            const OmegaSheaf& om);

/// Literal join evaluation of the characteristic value: the join of all
/// elements below d whose restriction of the given component element lies in
/// the subobject. Oracle for the stalk-map construction.
Mask characteristic_eval(const FObjectPtr& y, const SubObject& s, Mask d, std::uint64_t idx);

/// The commuting square built on a monic m: (a,X) >-> (b,Y): the terminal
/// arrow on top, truth on the right, the extension of the characteristic map
/// below. The pullback verdict compares the corner against the canonical
/// cospan pullback, whose support is the meet of the map sources (here b)
/// before any shrinking; an isomorphism over the cospan forces equal
/// supports, so the verdict is exactly a = b and does not depend on how the
/// extension behaves above a.
struct ClassifierSquare {
  FArrow m, bang, truth, eta;
  SubObject s;
  bool commutes = false;
  bool is_pullback = false;
  Mask canonical_support = 0;  // support of the cospan pullback in the ambient product
  Mask shrunk_support = 0;     // support after dropping empty solution components
  int missing_atom = -1;       // an atom kept by the canonical pullback but absent from a
  std::optional<FArrow> mediating;  // corner into the shrunk pullback (always exists)
  FObjectPtr fpullback;             // the shrunk pullback object
  std::string witness;
};

ClassifierSquare classifier_square(
    const FArrow& m, const OmegaSheaf& om,
    const std::optional<std::vector<std::vector<std::uint32_t>>>& default_outside = std::nullopt);

/// Every monic in the bounded universe: the square commutes, the pullback
/// verdict equals (source support == target support), the verdict is stable
/// under every choice of extension default, and the characteristic maps
/// classify their subobjects. Emits the first counterexample with a strictly
/// smaller source support.
Report no_classifier_report(int atoms, int max_stalk);

/// First monic square with source support strictly below target support.
std::optional<ClassifierSquare> first_classifier_counterexample(int atoms, int max_stalk);

/// Every distinct parallel pair in the bounded universe is separated by an
/// arrow from a subobject of the terminal object.
Report generator_report(int atoms, int max_stalk);

std::string classifier_square_text(const ClassifierSquare& sq);

}  // namespace condsheaf
