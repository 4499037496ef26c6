#include "condsheaf/boolean_algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace condsheaf {

namespace bits {

Mask expand(std::uint64_t index, Mask universe) {
  Mask out = 0;
  while (universe) {
    Mask low = universe & (~universe + 1);
    if (index & 1) out |= low;
    index >>= 1;
    universe &= universe - 1;
  }
  return out;
}

std::vector<Mask> submasks(Mask m) {
  int k = popcount(m);
  std::vector<Mask> out;
  out.reserve(std::size_t{1} << k);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << k); ++i) out.push_back(expand(i, m));
  return out;
}

std::vector<int> atom_list(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) out.push_back(i);
  return out;
}

}  // namespace bits

AlgebraPtr Algebra::make(std::vector<std::string> atom_names) {
  if (atom_names.size() > 20)
    throw Error("algebra too large: " + std::to_string(atom_names.size()) + " atoms (max 20)");
  std::set<std::string> seen;
  for (const auto& name : atom_names) {
    if (name.empty()) throw Error("empty atom name");
    if (name.find('|') != std::string::npos)
      throw Error("atom name may not contain '|': " + name);
    if (!seen.insert(name).second) throw Error("duplicate atom name: " + name);
  }
  return AlgebraPtr(new Algebra(std::move(atom_names)));
}

AlgebraPtr make_algebra(std::vector<std::string> atom_names) {
  return Algebra::make(std::move(atom_names));
}

int Algebra::atom_index(std::string_view name) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i] == name) return static_cast<int>(i);
  return -1;
}

bool Algebra::same_as(const Algebra& other) const {
  return this == &other || atoms_ == other.atoms_;
}

std::string Algebra::key_of(Mask m) const {
  std::string out;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (m & (Mask{1} << i)) {
      if (!out.empty()) out += '|';
      out += atoms_[i];
    }
  }
  return out;
}

std::string Algebra::show(Mask m) const { return m == 0 ? "0" : key_of(m); }

std::optional<Mask> Algebra::parse_key(std::string_view key) const {
  if (key.empty() || key == "0") return Mask{0};
  Mask m = 0;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t next = key.find('|', pos);
    std::string_view part = key.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                           : next - pos);
    int idx = atom_index(part);
    if (idx < 0) return std::nullopt;
    Mask bit = Mask{1} << idx;
    if (m & bit) return std::nullopt;  // duplicate atom in key
    m |= bit;
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return m;
}

Elem Algebra::elem(Mask m) const {
  if (m & ~full()) throw Error("element mask out of range for algebra");
  return Elem(shared_from_this(), m);
}

Elem Algebra::atom(std::string_view name) const {
  int idx = atom_index(name);
  if (idx < 0) throw Error("unknown atom: " + std::string(name));
  return Elem(shared_from_this(), Mask{1} << idx);
}

Elem Algebra::zero() const { return Elem(shared_from_this(), 0); }
Elem Algebra::one() const { return Elem(shared_from_this(), full()); }

Elem Algebra::from_atoms(const std::vector<std::string>& names) const {
  Mask m = 0;
  for (const auto& n : names) {
    int idx = atom_index(n);
    if (idx < 0) throw Error("unknown atom: " + n);
    m |= Mask{1} << idx;
  }
  return Elem(shared_from_this(), m);
}

std::optional<Elem> Algebra::parse(std::string_view key) const {
  auto m = parse_key(key);
  if (!m) return std::nullopt;
  return Elem(shared_from_this(), *m);
}

Elem::Elem(AlgebraPtr alg, Mask mask) : alg_(std::move(alg)), mask_(mask) {
  if (!alg_) throw Error("element without algebra");
  if (mask_ & ~alg_->full()) throw Error("element mask out of range for algebra");
}

bool Elem::is_atom() const { return bits::popcount(mask_) == 1; }

bool operator==(const Elem& a, const Elem& b) {
  return a.alg_->same_as(*b.alg_) && a.mask_ == b.mask_;
}

bool operator<(const Elem& a, const Elem& b) { return a.mask_ < b.mask_; }

namespace {
void require_same_algebra(const Elem& a, const Elem& b) {
  if (!a.algebra()->same_as(*b.algebra()))
    throw Error("operands belong to different algebras");
}
}  // namespace

Elem meet(const Elem& a, const Elem& b) {
  require_same_algebra(a, b);
  return Elem(a.algebra(), a.mask() & b.mask());
}

Elem join(const Elem& a, const Elem& b) {
  require_same_algebra(a, b);
  return Elem(a.algebra(), a.mask() | b.mask());
}

Elem complement(const Elem& a) { return Elem(a.algebra(), ~a.mask() & a.algebra()->full()); }

Elem diff(const Elem& a, const Elem& b) {
  require_same_algebra(a, b);
  return Elem(a.algebra(), a.mask() & ~b.mask());
}

bool leq(const Elem& a, const Elem& b) {
  require_same_algebra(a, b);
  return (a.mask() & b.mask()) == a.mask();
}

std::vector<Elem> relative_down_set(const Elem& b) {
  std::vector<Elem> out;
  for (Mask m : bits::submasks(b.mask())) out.emplace_back(b.algebra(), m);
  return out;
}

Partition Partition::make(Elem base, std::vector<Elem> parts) {
  std::vector<Elem> kept;
  Mask seen = 0;
  for (auto& p : parts) {
    require_same_algebra(base, p);
    if (p.is_zero()) continue;  // canonical form is 0-free
    if (p.mask() & seen) throw Error("partition parts not pairwise disjoint");
    seen |= p.mask();
    kept.push_back(p);
  }
  if (seen != base.mask()) {
    throw Error("partition parts join to " + base.algebra()->show(seen) + ", expected " +
                base.show());
  }
  std::sort(kept.begin(), kept.end());
  return Partition(std::move(base), std::move(kept));
}

bool operator==(const Partition& a, const Partition& b) {
  return a.base_ == b.base_ && a.parts_ == b.parts_;
}

Sieve Sieve::make(Elem base, std::vector<Elem> members) {
  std::set<Mask> member_set;
  for (auto& m : members) {
    require_same_algebra(base, m);
    if (!leq(m, base)) throw Error("sieve member " + m.show() + " not below base " + base.show());
    member_set.insert(m.mask());
  }
  for (Mask m : member_set)
    for (Mask sub : bits::submasks(m))
      if (!member_set.count(sub))
        throw Error("sieve not downward closed: missing " + base.algebra()->show(sub) +
                    " below " + base.algebra()->show(m));
  std::vector<Elem> sorted;
  sorted.reserve(member_set.size());
  for (Mask m : member_set) sorted.emplace_back(base.algebra(), m);
  return Sieve(std::move(base), std::move(sorted));
}

Elem Sieve::members_join() const {
  Mask m = 0;
  for (const auto& e : members_) m |= e.mask();
  return Elem(base_.algebra(), m);
}

bool Sieve::covers() const { return members_join().mask() == base_.mask(); }

std::vector<std::vector<Mask>> partitions_of_mask(const Algebra& alg, Mask a) {
  if (a & ~alg.full()) throw Error("element mask out of range for algebra");
  std::vector<int> atoms = bits::atom_list(a);
  int k = static_cast<int>(atoms.size());
  std::vector<std::vector<Mask>> out;
  if (k == 0) {
    out.push_back({});  // the empty join covers 0
    return out;
  }
  // Set partitions of the atom list via restricted growth strings.
  std::vector<int> rgs(static_cast<std::size_t>(k), 0);
  while (true) {
    int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<Mask> parts(static_cast<std::size_t>(blocks), 0);
    for (int i = 0; i < k; ++i) parts[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])] |= Mask{1} << atoms[static_cast<std::size_t>(i)];
    std::sort(parts.begin(), parts.end());
    out.push_back(std::move(parts));
    // next RGS
    int i = k - 1;
    while (i > 0) {
      int cap = 0;
      for (int j = 0; j < i; ++j) cap = std::max(cap, rgs[static_cast<std::size_t>(j)]);
      if (rgs[static_cast<std::size_t>(i)] <= cap) break;
      --i;
    }
    if (i == 0) break;
    ++rgs[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) rgs[static_cast<std::size_t>(j)] = 0;
  }
  return out;
}

std::vector<Partition> partitions_of(const Elem& a) {
  std::vector<Partition> out;
  for (auto& parts : partitions_of_mask(*a.algebra(), a.mask())) {
    std::vector<Elem> elems;
    elems.reserve(parts.size());
    for (Mask m : parts) elems.emplace_back(a.algebra(), m);
    out.push_back(Partition::make(a, std::move(elems)));
  }
  return out;
}

Partition disjointify(const Sieve& s, const std::vector<Elem>& order) {
  if (!s.covers())
    throw Error("sieve does not cover its base: members join to " + s.members_join().show() +
                ", base is " + s.base().show());
  const std::vector<Elem>* seq = &s.members();
  if (!order.empty()) {
    if (order.size() != s.members().size())
      throw Error("disjointify order must be a permutation of the sieve members");
    std::set<Mask> a, b;
    for (const auto& e : s.members()) a.insert(e.mask());
    for (const auto& e : order) b.insert(e.mask());
    if (a != b) throw Error("disjointify order must be a permutation of the sieve members");
    seq = &order;
  }
  Mask covered = 0;
  std::vector<Elem> parts;
  for (const auto& m : *seq) {
    Mask fresh = m.mask() & ~covered;
    covered |= fresh;
    if (fresh) parts.emplace_back(s.base().algebra(), fresh);
  }
  return Partition::make(s.base(), std::move(parts));
}

std::vector<Sieve> sieves_on(const Elem& a) {
  std::vector<Mask> below = bits::submasks(a.mask());
  std::size_t n = below.size();
  if (n > 16) throw Error("sieve enumeration limited to bases with at most 4 atoms");
  std::vector<Sieve> out;
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << n); ++pick) {
    std::vector<Mask> chosen;
    for (std::size_t i = 0; i < n; ++i)
      if (pick & (std::uint64_t{1} << i)) chosen.push_back(below[i]);
    // downward closure check
    bool closed = true;
    std::set<Mask> set(chosen.begin(), chosen.end());
    for (Mask m : chosen) {
      for (Mask sub : bits::submasks(m))
        if (!set.count(sub)) {
          closed = false;
          break;
        }
      if (!closed) break;
    }
    if (!closed) continue;
    std::vector<Elem> members;
    members.reserve(chosen.size());
    for (Mask m : chosen) members.emplace_back(a.algebra(), m);
    out.push_back(Sieve::make(a, std::move(members)));
  }
  return out;
}

Sieve maximal_sieve(const Elem& a) { return Sieve::make(a, relative_down_set(a)); }

}  // namespace condsheaf
