#include "condsheaf/sheaf.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace condsheaf {

std::uint64_t component_guard() {
  static const std::uint64_t cap = [] {
    if (const char* env = std::getenv("CONDSHEAF_MAX_TUPLES")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1000000};
  }();
  return cap;
}

namespace {

std::vector<std::string> canonical_stalk(std::vector<std::string> labels, const std::string& where) {
  if (labels.empty()) throw Error("empty stalk at " + where);
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw Error("duplicate label in stalk at " + where);
  return labels;
}

}  // namespace

StalkSheaf StalkSheaf::make(AlgebraPtr alg,
                            const std::map<std::string, std::vector<std::string>>& stalks) {
  if (!alg) throw Error("sheaf without algebra");
  std::map<int, std::vector<std::string>> by_index;
  for (const auto& [name, labels] : stalks) {
    int idx = alg->atom_index(name);
    if (idx < 0) throw Error("unknown atom in stalk map: " + name);
    by_index.emplace(idx, labels);
  }
  return make_on(alg, alg->full(), std::move(by_index));
}

StalkSheaf StalkSheaf::make_on(AlgebraPtr alg, Mask top, std::map<int, std::vector<std::string>> stalks) {
  if (!alg) throw Error("sheaf without algebra");
  if (top & ~alg->full()) throw Error("sheaf top out of range for algebra");
  std::vector<std::vector<std::string>> by_atom(static_cast<std::size_t>(alg->atom_count()));
  for (int atom : bits::atom_list(top)) {
    auto it = stalks.find(atom);
    if (it == stalks.end()) throw Error("missing stalk at atom " + alg->atom_name(atom));
    by_atom[static_cast<std::size_t>(atom)] = canonical_stalk(it->second, alg->atom_name(atom));
  }
  for (const auto& [atom, labels] : stalks) {
    (void)labels;
    if (!(top & (Mask{1} << atom)))
      throw Error("stalk given at atom " + alg->atom_name(atom) + " outside the sheaf's top");
  }
  return StalkSheaf(std::move(alg), top, std::move(by_atom));
}

StalkSheaf StalkSheaf::terminal(AlgebraPtr alg, Mask top) {
  std::map<int, std::vector<std::string>> stalks;
  for (int atom : bits::atom_list(top)) stalks[atom] = {"*"};
  return make_on(std::move(alg), top, std::move(stalks));
}

StalkSheaf StalkSheaf::terminal(AlgebraPtr alg) {
  Mask top = alg->full();
  return terminal(std::move(alg), top);
}

const std::vector<std::string>& StalkSheaf::stalk(int atom) const {
  if (atom < 0 || atom >= alg_->atom_count() || !(top_ & (Mask{1} << atom)))
    throw Error("stalk requested at atom outside the sheaf's top");
  return stalks_[static_cast<std::size_t>(atom)];
}

std::uint32_t StalkSheaf::stalk_index(int atom, const std::string& label) const {
  const auto& s = stalk(atom);
  auto it = std::lower_bound(s.begin(), s.end(), label);
  if (it == s.end() || *it != label)
    throw Error("label '" + label + "' not in stalk at " + alg_->atom_name(atom));
  return static_cast<std::uint32_t>(it - s.begin());
}

std::uint64_t StalkSheaf::component_size(Mask a) const {
  if (a & ~top_) throw Error("component requested above the sheaf's top");
  std::uint64_t size = 1;
  for (int atom : bits::atom_list(a)) {
    size *= stalk_size(atom);
    if (size > component_guard())
      throw Error("component size exceeds guard (" + std::to_string(component_guard()) +
                  " tuples); set CONDSHEAF_MAX_TUPLES to raise");
  }
  return size;
}

std::uint64_t StalkSheaf::restrict_index(Mask from, Mask to, std::uint64_t idx) const {
  if ((to & from) != to) throw Error("restriction target not below source");
  if (from & ~top_) throw Error("component requested above the sheaf's top");
  std::uint64_t out = 0, place = 1;
  for (int atom : bits::atom_list(from)) {
    std::uint64_t k = stalk_size(atom);
    std::uint64_t d = idx % k;
    idx /= k;
    if (to & (Mask{1} << atom)) {
      out += d * place;
      place *= k;
    }
  }
  return out;
}

std::uint32_t StalkSheaf::digit(Mask a, std::uint64_t idx, int atom) const {
  if (!(a & (Mask{1} << atom))) throw Error("digit requested at atom outside the element");
  for (int at : bits::atom_list(a)) {
    std::uint64_t k = stalk_size(at);
    if (at == atom) return static_cast<std::uint32_t>(idx % k);
    idx /= k;
  }
  throw Error("unreachable");
}

std::uint64_t StalkSheaf::index_from_digits(Mask a, const std::vector<std::uint32_t>& digits) const {
  auto atoms = bits::atom_list(a);
  if (digits.size() != atoms.size()) throw Error("digit count mismatch");
  std::uint64_t out = 0, place = 1;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::uint64_t k = stalk_size(atoms[i]);
    if (digits[i] >= k) throw Error("digit out of range");
    out += digits[i] * place;
    place *= k;
  }
  return out;
}

std::string StalkSheaf::component_label(Mask a, std::uint64_t idx) const {
  auto atoms = bits::atom_list(a);
  if (atoms.empty()) return "*";
  if (atoms.size() == 1) return stalk(atoms[0])[static_cast<std::size_t>(idx)];
  std::string out = "(";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::uint64_t k = stalk_size(atoms[i]);
    if (i) out += ",";
    out += stalk(atoms[i])[static_cast<std::size_t>(idx % k)];
    idx /= k;
  }
  out += ")";
  return out;
}

std::vector<std::string> StalkSheaf::component_labels(Mask a) const {
  std::uint64_t n = component_size(a);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(component_label(a, i));
  return out;
}

StalkSheaf StalkSheaf::restricted(Mask a) const {
  if (a & ~top_) throw Error("restriction above the sheaf's top");
  return StalkSheaf(alg_, a, stalks_);
}

bool StalkSheaf::componentwise_equal(const StalkSheaf& o) const {
  if (!alg_->same_as(*o.alg_) || top_ != o.top_) return false;
  for (int atom : bits::atom_list(top_))
    if (stalk(atom) != o.stalk(atom)) return false;
  return true;
}

bool StalkSheaf::subsheaf_of(const StalkSheaf& o) const {
  if (!alg_->same_as(*o.alg_)) return false;
  if ((top_ & o.top_) != top_) return false;
  for (int atom : bits::atom_list(top_)) {
    const auto& mine = stalk(atom);
    const auto& theirs = o.stalk(atom);
    if (!std::includes(theirs.begin(), theirs.end(), mine.begin(), mine.end())) return false;
  }
  return true;
}

std::uint64_t amalgamate(const StalkSheaf& x, Mask base, const std::vector<Mask>& parts,
                         const std::vector<std::uint64_t>& picks) {
  if (parts.size() != picks.size()) throw Error("amalgamation family size mismatch");
  Mask seen = 0;
  for (Mask p : parts) {
    if (p & seen) throw Error("amalgamation parts not pairwise disjoint");
    seen |= p;
  }
  if (seen != base) throw Error("amalgamation parts do not join to the base");
  std::vector<std::uint32_t> digits;
  for (int atom : bits::atom_list(base)) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] & (Mask{1} << atom)) {
        digits.push_back(x.digit(parts[i], picks[i], atom));
        break;
      }
    }
  }
  return x.index_from_digits(base, digits);
}

StalkSheaf sheaf_from_stalks(AlgebraPtr alg,
                             const std::map<std::string, std::vector<std::string>>& stalks) {
  if (alg && stalks.size() != static_cast<std::size_t>(alg->atom_count()))
    throw Error("stalk map must name every atom exactly once");
  return StalkSheaf::make(std::move(alg), stalks);
}

StalkSheaf restrict_sheaf(const StalkSheaf& x, Mask a) { return x.restricted(a); }

bool is_surjective(const StalkSheaf&) {
  // Projections out of products of non-empty stalks are always surjective.
  return true;
}

ExtensionalSheaf ExtensionalSheaf::of(const StalkSheaf& x) {
  ExtensionalSheaf out;
  out.alg = x.algebra();
  out.top = x.top();
  for (Mask a : bits::submasks(x.top())) {
    out.components[a] = x.component_labels(a);
    for (Mask b : bits::submasks(a)) {
      std::map<std::string, std::string> f;
      std::uint64_t n = x.component_size(a);
      for (std::uint64_t i = 0; i < n; ++i)
        f[x.component_label(a, i)] = x.component_label(b, x.restrict_index(a, b, i));
      out.maps[{a, b}] = std::move(f);
    }
  }
  return out;
}

namespace {

struct ExtView {
  const ExtensionalSheaf& ext;
  bool structurally_sound = true;

  const std::vector<std::string>* comp(Mask a) const {
    auto it = ext.components.find(a);
    return it == ext.components.end() ? nullptr : &it->second;
  }
  const std::map<std::string, std::string>* map(Mask from, Mask to) const {
    auto it = ext.maps.find({from, to});
    return it == ext.maps.end() ? nullptr : &it->second;
  }
};

std::string show(const ExtensionalSheaf& ext, Mask m) { return ext.alg->show(m); }

}  // namespace

SheafValidation validate_sheaf(const ExtensionalSheaf& ext) {
  SheafValidation out;
  if (!ext.alg) {
    out.structural.push_back({"structure", "missing algebra"});
    return out;
  }
  if (ext.top & ~ext.alg->full()) {
    out.structural.push_back({"structure", "top out of range for algebra"});
    return out;
  }
  ExtView v{ext};
  auto elements = bits::submasks(ext.top);

  // Structural pass: every component present with unique labels, every order
  // pair mapped, every map total with in-range values.
  for (Mask a : elements) {
    const auto* c = v.comp(a);
    if (!c) {
      out.structural.push_back({"structure", "missing component at " + show(ext, a)});
      continue;
    }
    std::set<std::string> labels(c->begin(), c->end());
    if (labels.size() != c->size())
      out.structural.push_back({"structure", "duplicate labels in component at " + show(ext, a)});
  }
  for (Mask a : elements) {
    if (!v.comp(a)) continue;
    for (Mask b : bits::submasks(a)) {
      if (!v.comp(b)) continue;
      const auto* f = v.map(a, b);
      if (!f) {
        out.structural.push_back(
            {"structure", "missing restriction map " + show(ext, a) + " -> " + show(ext, b)});
        continue;
      }
      std::set<std::string> dom(v.comp(a)->begin(), v.comp(a)->end());
      std::set<std::string> cod(v.comp(b)->begin(), v.comp(b)->end());
      for (const auto& x : dom) {
        auto it = f->find(x);
        if (it == f->end()) {
          out.structural.push_back({"structure", "restriction " + show(ext, a) + " -> " +
                                                     show(ext, b) + " undefined on '" + x + "'"});
        } else if (!cod.count(it->second)) {
          out.structural.push_back({"structure", "restriction " + show(ext, a) + " -> " +
                                                     show(ext, b) + " sends '" + x +
                                                     "' to unknown label '" + it->second + "'"});
        }
      }
      for (const auto& [x, y] : *f) {
        (void)y;
        if (!dom.count(x))
          out.structural.push_back({"structure", "restriction " + show(ext, a) + " -> " +
                                                     show(ext, b) + " defined on unknown label '" +
                                                     x + "'"});
      }
    }
  }
  if (!out.structural.empty()) return out;

  // Axiom (i): the component at 0 is a singleton.
  if (v.comp(0)->size() != 1)
    out.axiom.push_back({"x0-singleton", "component at 0 has " +
                                             std::to_string(v.comp(0)->size()) +
                                             " elements, expected 1"});

  // Functoriality: identities and compositions.
  for (Mask a : elements) {
    const auto& ida = *v.map(a, a);
    for (const auto& x : *v.comp(a)) {
      if (ida.at(x) != x) {
        out.axiom.push_back({"functoriality", "map " + show(ext, a) + " -> " + show(ext, a) +
                                                  " is not the identity: '" + x + "' -> '" +
                                                  ida.at(x) + "'"});
        break;
      }
    }
  }
  for (Mask c : elements) {
    for (Mask b : bits::submasks(c)) {
      for (Mask a : bits::submasks(b)) {
        const auto& cb = *v.map(c, b);
        const auto& ba = *v.map(b, a);
        const auto& ca = *v.map(c, a);
        for (const auto& x : *v.comp(c)) {
          if (ba.at(cb.at(x)) != ca.at(x)) {
            out.axiom.push_back(
                {"functoriality", "composition mismatch at (" + show(ext, a) + " <= " +
                                      show(ext, b) + " <= " + show(ext, c) + ") on '" + x +
                                      "': via " + show(ext, b) + " gives '" + ba.at(cb.at(x)) +
                                      "', direct gives '" + ca.at(x) + "'"});
            break;
          }
        }
      }
    }
  }

  // Gluing: over every partition of every element, every family has exactly
  // one amalgamation.
  for (Mask a : elements) {
    for (const auto& parts : partitions_of_mask(*ext.alg, a)) {
      std::vector<const std::vector<std::string>*> part_comps;
      std::uint64_t families = 1;
      for (Mask p : parts) {
        part_comps.push_back(v.comp(p));
        families *= part_comps.back()->size();
        if (families > component_guard())
          throw Error("family enumeration exceeds guard; set CONDSHEAF_MAX_TUPLES to raise");
      }
      for (std::uint64_t fi = 0; fi < families; ++fi) {
        std::vector<std::string> family;
        std::uint64_t rest = fi;
        for (const auto* pc : part_comps) {
          family.push_back((*pc)[static_cast<std::size_t>(rest % pc->size())]);
          rest /= pc->size();
        }
        std::vector<std::string> hits;
        for (const auto& x : *v.comp(a)) {
          bool match = true;
          for (std::size_t i = 0; i < parts.size(); ++i) {
            if (v.map(a, parts[i])->at(x) != family[i]) {
              match = false;
              break;
            }
          }
          if (match) hits.push_back(x);
        }
        auto family_text = [&] {
          std::string t;
          for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) t += ", ";
            t += show(ext, parts[i]) + ":'" + family[i] + "'";
          }
          return t.empty() ? std::string("<empty>") : t;
        };
        if (hits.empty()) {
          out.axiom.push_back({"amalgamation-existence",
                               "no element of component " + show(ext, a) +
                                   " restricts to the family {" + family_text() + "}"});
        } else if (hits.size() > 1) {
          out.axiom.push_back({"amalgamation-uniqueness",
                               "elements '" + hits[0] + "' and '" + hits[1] + "' of component " +
                                   show(ext, a) + " both restrict to the family {" +
                                   family_text() + "}"});
        }
      }
    }
  }

  if (!out.ok()) return out;

  // Normalize: stalks are the components at atoms.
  std::map<int, std::vector<std::string>> stalks;
  for (int atom : bits::atom_list(ext.top)) stalks[atom] = *v.comp(Mask{1} << atom);
  out.normalized = StalkSheaf::make_on(ext.alg, ext.top, std::move(stalks));
  return out;
}

std::optional<Violation> surjectivity_witness(const ExtensionalSheaf& ext) {
  for (const auto& [key, f] : ext.maps) {
    auto cit = ext.components.find(key.second);
    if (cit == ext.components.end()) continue;
    std::set<std::string> image;
    for (const auto& [x, y] : f) {
      (void)x;
      image.insert(y);
    }
    for (const auto& target : cit->second) {
      if (!image.count(target)) {
        return Violation{"surjectivity",
                         "restriction " + ext.alg->show(key.first) + " -> " +
                             ext.alg->show(key.second) + " misses '" + target + "'"};
      }
    }
  }
  return std::nullopt;
}

StalkTransform::StalkTransform(StalkSheaf source, StalkSheaf target,
                               std::vector<std::vector<std::uint32_t>> atom_maps)
    : src_(std::move(source)), tgt_(std::move(target)), atom_maps_(std::move(atom_maps)) {
  if (!src_.algebra()->same_as(*tgt_.algebra()))
    throw Error("transformation endpoints on different algebras");
  if (src_.top() != tgt_.top()) throw Error("transformation endpoints with different tops");
  atom_maps_.resize(static_cast<std::size_t>(src_.algebra()->atom_count()));
  for (int atom : bits::atom_list(src_.top())) {
    auto& m = atom_maps_[static_cast<std::size_t>(atom)];
    if (m.size() != src_.stalk_size(atom))
      throw Error("stalk map at " + src_.algebra()->atom_name(atom) + " has wrong domain size");
    for (std::uint32_t v : m)
      if (v >= tgt_.stalk_size(atom))
        throw Error("stalk map at " + src_.algebra()->atom_name(atom) + " has out-of-range value");
  }
}

const std::vector<std::uint32_t>& StalkTransform::atom_map(int atom) const {
  if (!(src_.top() & (Mask{1} << atom))) throw Error("stalk map requested outside top");
  return atom_maps_[static_cast<std::size_t>(atom)];
}

std::uint64_t StalkTransform::apply(Mask a, std::uint64_t idx) const {
  std::vector<std::uint32_t> digits;
  for (int atom : bits::atom_list(a)) digits.push_back(atom_map(atom)[src_.digit(a, idx, atom)]);
  return tgt_.index_from_digits(a, digits);
}

bool operator==(const StalkTransform& a, const StalkTransform& b) {
  if (!a.src_.componentwise_equal(b.src_) || !a.tgt_.componentwise_equal(b.tgt_)) return false;
  for (int atom : bits::atom_list(a.src_.top()))
    if (a.atom_map(atom) != b.atom_map(atom)) return false;
  return true;
}

StalkTransform identity_transform(const StalkSheaf& x) {
  std::vector<std::vector<std::uint32_t>> maps(static_cast<std::size_t>(x.algebra()->atom_count()));
  for (int atom : bits::atom_list(x.top())) {
    auto& m = maps[static_cast<std::size_t>(atom)];
    m.resize(x.stalk_size(atom));
    for (std::uint32_t i = 0; i < m.size(); ++i) m[i] = i;
  }
  return StalkTransform(x, x, std::move(maps));
}

StalkTransform compose(const StalkTransform& g, const StalkTransform& f) {
  if (!g.source().componentwise_equal(f.target()))
    throw Error("transformation endpoints do not match for composition");
  std::vector<std::vector<std::uint32_t>> maps(
      static_cast<std::size_t>(f.source().algebra()->atom_count()));
  for (int atom : bits::atom_list(f.source().top())) {
    const auto& fm = f.atom_map(atom);
    const auto& gm = g.atom_map(atom);
    auto& m = maps[static_cast<std::size_t>(atom)];
    m.reserve(fm.size());
    for (std::uint32_t v : fm) m.push_back(gm[v]);
  }
  return StalkTransform(f.source(), g.target(), std::move(maps));
}

bool is_componentwise_injective_below(const StalkTransform& f, Mask a) {
  for (int atom : bits::atom_list(a)) {
    const auto& m = f.atom_map(atom);
    std::set<std::uint32_t> image(m.begin(), m.end());
    if (image.size() != m.size()) return false;
  }
  return true;
}

std::vector<StalkTransform> global_elements(const StalkSheaf& x) {
  StalkSheaf one = StalkSheaf::terminal(x.algebra(), x.top());
  auto atoms = bits::atom_list(x.top());
  std::uint64_t count = 1;
  for (int atom : atoms) {
    count *= x.stalk_size(atom);
    if (count > component_guard())
      throw Error("global-element enumeration exceeds guard");
  }
  std::vector<StalkTransform> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<std::vector<std::uint32_t>> maps(
        static_cast<std::size_t>(x.algebra()->atom_count()));
    std::uint64_t rest = i;
    for (int atom : atoms) {
      std::uint64_t k = x.stalk_size(atom);
      maps[static_cast<std::size_t>(atom)] = {static_cast<std::uint32_t>(rest % k)};
      rest /= k;
    }
    out.emplace_back(one, x, std::move(maps));
  }
  return out;
}

bool naturality_holds(const StalkTransform& f) {
  for (Mask b : bits::submasks(f.source().top())) {
    for (Mask a : bits::submasks(b)) {
      std::uint64_t n = f.source().component_size(b);
      for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t down_then_apply = f.apply(a, f.source().restrict_index(b, a, i));
        std::uint64_t apply_then_down = f.target().restrict_index(b, a, f.apply(b, i));
        if (down_then_apply != apply_then_down) return false;
      }
    }
  }
  return true;
}

std::vector<Violation> validate_nat_trans(
    const ExtensionalSheaf& src, const ExtensionalSheaf& tgt,
    const std::map<Mask, std::map<std::string, std::string>>& components) {
  std::vector<Violation> out;
  if (!src.alg->same_as(*tgt.alg) || src.top != tgt.top) {
    out.push_back({"structure", "transformation endpoints do not share an algebra and top"});
    return out;
  }
  for (Mask a : bits::submasks(src.top)) {
    auto fit = components.find(a);
    if (fit == components.end()) {
      out.push_back({"structure", "missing component at " + src.alg->show(a)});
      continue;
    }
    for (const auto& x : src.components.at(a)) {
      if (!fit->second.count(x))
        out.push_back({"structure",
                       "component at " + src.alg->show(a) + " undefined on '" + x + "'"});
    }
  }
  if (!out.empty()) return out;
  for (Mask b : bits::submasks(src.top)) {
    for (Mask a : bits::submasks(b)) {
      const auto& fb = components.at(b);
      const auto& fa = components.at(a);
      for (const auto& x : src.components.at(b)) {
        const std::string& via_target = tgt.maps.at({b, a}).at(fb.at(x));
        const std::string& via_source = fa.at(src.maps.at({b, a}).at(x));
        if (via_target != via_source) {
          out.push_back({"naturality", "square at (" + src.alg->show(a) + " <= " +
                                           src.alg->show(b) + ") fails on '" + x + "': '" +
                                           via_target + "' vs '" + via_source + "'"});
        }
      }
    }
  }
  return out;
}

}  // namespace condsheaf
