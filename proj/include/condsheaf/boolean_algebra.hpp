#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace condsheaf {

/// Element of a finite powerset algebra, encoded as an atom-subset bitmask.
using Mask = std::uint64_t;

/// Thrown on precondition violations: malformed atom names, cross-algebra
/// operands, size-guard overruns, non-covering sieves.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Algebra;
class Elem;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Finite complete atomic Boolean algebra: the powerset of an ordered list of
/// named atoms. Elements are atom subsets (bitmasks over the atom order);
/// meet/join/complement are bit operations. Zero atoms gives the degenerate
/// algebra in which 0 = 1; it is accepted and flagged degenerate.
class Algebra : public std::enable_shared_from_this<Algebra> {
public:
  /// Atom names must be unique and non-empty.
  static AlgebraPtr make(std::vector<std::string> atom_names);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  Mask full() const { return atoms_.empty() ? 0 : ((Mask{1} << atoms_.size()) - 1); }
  bool degenerate() const { return atoms_.empty(); }
  std::uint64_t element_count() const { return std::uint64_t{1} << atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom_name(int i) const { return atoms_.at(static_cast<std::size_t>(i)); }
  int atom_index(std::string_view name) const;

  /// Identity check used to reject cross-algebra operands: two algebras are
  /// the same iff their atom lists coincide.
  bool same_as(const Algebra& other) const;

  /// Atom-subset key: atoms joined by '|' in atom order; "" encodes 0.
  std::string key_of(Mask m) const;
  /// Human-readable form: like key_of but the bottom prints as "0".
  std::string show(Mask m) const;
  std::optional<Mask> parse_key(std::string_view key) const;

  Elem elem(Mask m) const;
  Elem atom(std::string_view name) const;
  Elem zero() const;
  Elem one() const;
  Elem from_atoms(const std::vector<std::string>& names) const;
  std::optional<Elem> parse(std::string_view key) const;

private:
  explicit Algebra(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {}
  std::vector<std::string> atoms_;
};

/// Element of a specific algebra. Carries the algebra so that combining
/// elements of different algebras is a checked error.
class Elem {
public:
  Elem(AlgebraPtr alg, Mask mask);
  const AlgebraPtr& algebra() const { return alg_; }
  Mask mask() const { return mask_; }
  bool is_zero() const { return mask_ == 0; }
  bool is_one() const { return mask_ == alg_->full(); }
  bool is_atom() const;
  std::string show() const { return alg_->show(mask_); }

  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  friend bool operator<(const Elem& a, const Elem& b);  // by mask, for ordered containers

private:
  AlgebraPtr alg_;
  Mask mask_;
};

Elem meet(const Elem& a, const Elem& b);
Elem join(const Elem& a, const Elem& b);
Elem complement(const Elem& a);
Elem diff(const Elem& a, const Elem& b);  // a \ b
bool leq(const Elem& a, const Elem& b);

/// The relative algebra carrier: all elements below b, ascending by mask.
std::vector<Elem> relative_down_set(const Elem& b);

AlgebraPtr make_algebra(std::vector<std::string> atom_names);

/// Pairwise disjoint non-zero elements whose join is the base. Zero parts are
/// dropped on construction (they carry no gluing data), so equality of
/// partitions is plain equality of part sets.
class Partition {
public:
  static Partition make(Elem base, std::vector<Elem> parts);
  const Elem& base() const { return base_; }
  const std::vector<Elem>& parts() const { return parts_; }  // ascending by mask
  friend bool operator==(const Partition& a, const Partition& b);

private:
  Partition(Elem base, std::vector<Elem> parts)
      : base_(std::move(base)), parts_(std::move(parts)) {}
  Elem base_;
  std::vector<Elem> parts_;
};

/// Downward-closed family of elements below a base element.
class Sieve {
public:
  static Sieve make(Elem base, std::vector<Elem> members);
  const Elem& base() const { return base_; }
  const std::vector<Elem>& members() const { return members_; }  // ascending by mask
  /// True iff the join of the members equals the base.
  bool covers() const;
  Elem members_join() const;

private:
  Sieve(Elem base, std::vector<Elem> members)
      : base_(std::move(base)), members_(std::move(members)) {}
  Elem base_;
  std::vector<Elem> members_;
};

/// All partitions of a, in a deterministic order. For a = 0 this is exactly
/// one partition with no parts.
std::vector<Partition> partitions_of(const Elem& a);

/// Mask-level variant used by inner loops; parts ascending within each
/// partition.
std::vector<std::vector<Mask>> partitions_of_mask(const Algebra& alg, Mask a);

/// Turn a covering sieve into a partition by peeling members in the given
/// order: each member contributes what the earlier ones have not covered yet.
/// `order` must be a permutation of the members; when empty, the member
/// enumeration order is used. Every part is itself a member region of the
/// sieve (downward closure), so the output refines the input.
Partition disjointify(const Sieve& s, const std::vector<Elem>& order = {});

/// All sieves on a (including the empty one). Exhaustive; intended for small
/// algebras in verification sweeps.
std::vector<Sieve> sieves_on(const Elem& a);

/// The maximal sieve on a: every element below a.
Sieve maximal_sieve(const Elem& a);

// Mask helpers shared across modules.
namespace bits {

/// Place the low popcount(universe) bits of `index` at the set positions of
/// `universe`, in ascending bit order.
Mask expand(std::uint64_t index, Mask universe);

/// All submasks of m, ascending.
std::vector<Mask> submasks(Mask m);

inline int popcount(Mask m) { return __builtin_popcountll(m); }

/// Indices of set bits, ascending.
std::vector<int> atom_list(Mask m);

}  // namespace bits

}  // namespace condsheaf
