#pragma once

#include "condsheaf/sheaf.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace condsheaf {

/// Raw data for a conditional set living on an element of the algebra: one
/// labeled finite set per element below `lives_on`, plus one label map per
/// element sending the top component onto it.
struct CondSetData {
  AlgebraPtr alg;
  Mask lives_on = 0;
  std::map<Mask, std::vector<std::string>> components;
  std::map<Mask, std::map<std::string, std::string>> gammas;  // X_top -> X_c per c
};

/// A validated conditional set. Internally the maps from the top component
/// are index maps against the stored label lists.
class CondSet {
public:
  const AlgebraPtr& algebra() const { return alg_; }
  Mask lives_on() const { return lives_on_; }
  const std::vector<std::string>& component(Mask c) const;
  std::uint32_t gamma(Mask c, std::uint32_t top_index) const;
  const std::vector<std::uint32_t>& gamma_map(Mask c) const;
  CondSetData data() const;

  /// Equality that ignores the contents of the component at 0.
  bool equal_ignoring_x0(const CondSet& o) const;

  /// The unique conditional set living on 0.
  static CondSet conditional_empty(AlgebraPtr alg);

  /// All components singletons on the given support.
  static CondSet terminal_on(AlgebraPtr alg, Mask lives_on);

  friend struct CondSetAccess;

private:
  CondSet() = default;
  AlgebraPtr alg_;
  Mask lives_on_ = 0;
  std::map<Mask, std::vector<std::string>> components_;
  std::map<Mask, std::vector<std::uint32_t>> gamma_;
};

struct CondSetValidation {
  std::vector<Violation> structural;
  std::vector<Violation> axiom;
  std::optional<CondSet> value;
  bool ok() const { return structural.empty() && axiom.empty(); }
};

/// Checks, in order: the component at 0 is a singleton; the map at the top is
/// the identity; consistency (maps at lower elements never separate what a
/// higher map identifies); stability (every family over every partition of
/// the support has exactly one source in the top component); and surjectivity
/// of every map. All violations are reported with witnesses.
CondSetValidation validate_condset(const CondSetData& data);

/// Conditional set of a stalk-form sheaf: components are the sheaf's
/// components, the maps are the restrictions from the top.
CondSet from_sheaf(const StalkSheaf& x);
/// Extensional variant; requires a valid sheaf with every restriction map
/// surjective and throws with a witness otherwise.
CondSet from_sheaf(const ExtensionalSheaf& x);

/// Sheaf of a conditional set: the pairwise restriction maps are induced by
/// factoring through the surjections from the top, the result is validated
/// and normalized to stalk form. Labels are preserved at every component.
StalkSheaf to_sheaf(const CondSet& c);

/// The induced map from component(b) to component(c), c <= b <= lives_on,
/// as an index map (well-defined by surjectivity and consistency).
std::vector<std::uint32_t> induced_map(const CondSet& x, Mask b, Mask c);

/// Component-level amalgamation computed through stability: extend the family
/// over the missing region by a free pick, solve in the top component,
/// restrict back down. The result is independent of the pick; `free_choice`
/// exists so tests can exercise that independence (default: least index).
std::uint32_t amalgamate_via_stability(const CondSet& x, Mask base, const std::vector<Mask>& parts,
                                       const std::vector<std::uint32_t>& picks,
                                       std::optional<std::uint32_t> free_choice = std::nullopt);

/// True iff X's support is below Y's and X's sheaf is a componentwise
/// subsheaf of Y's restricted to that support. The component at 0 is ignored.
bool conditional_inclusion(const CondSet& x, const CondSet& y);

/// Pointwise product on the infimum of the supports; components are tuples,
/// maps act coordinatewise. The family must be non-empty.
CondSet conditional_product(const std::vector<CondSet>& family);

/// Conditional subset of an ambient conditional set: a support together with
/// index subsets of the ambient components below it.
struct CondSubset {
  Mask support = 0;
  std::map<Mask, std::vector<std::uint32_t>> members;  // sorted ambient indices per c <= support
};

/// Violations if the data fails to be a conditional subset of `ambient`:
/// non-empty components below the support, closure under the induced maps,
/// and closure under amalgamation.
std::vector<Violation> validate_cond_subset(const CondSubset& s, const CondSet& ambient);

struct CondFunctionValidation {
  std::vector<Violation> structural;  // graph not a conditional subset, bad support
  std::vector<Violation> axiom;       // non-total or non-functional at a component
  /// Component functions f_c as index maps X_c -> Y_c for c <= d, when valid.
  std::map<Mask, std::vector<std::uint32_t>> component_functions;
  bool ok() const { return structural.empty() && axiom.empty(); }
};

/// Validates a conditional-function graph: `graph` must be a conditional
/// subset of the conditional product of x and y, and its component at every
/// c <= d must be the graph of a total function X_c -> Y_c.
CondFunctionValidation validate_cond_function(const CondSubset& graph, const CondSet& x,
                                              const CondSet& y, Mask d);

/// Pair coding for components of a binary conditional product: the product
/// component index of (i, j) at c is i + j * |X_c|.
std::pair<std::uint32_t, std::uint32_t> product_pair(const CondSet& x, const CondSet& y, Mask c,
                                                     std::uint32_t product_index);

}  // namespace condsheaf
