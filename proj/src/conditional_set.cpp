#include "condsheaf/conditional_set.hpp"

#include <algorithm>
#include <set>

namespace condsheaf {

struct CondSetAccess {
  static CondSet make(AlgebraPtr alg, Mask lives_on,
                      std::map<Mask, std::vector<std::string>> components,
                      std::map<Mask, std::vector<std::uint32_t>> gamma) {
    CondSet c;
    c.alg_ = std::move(alg);
    c.lives_on_ = lives_on;
    c.components_ = std::move(components);
    c.gamma_ = std::move(gamma);
    return c;
  }
};

const std::vector<std::string>& CondSet::component(Mask c) const {
  auto it = components_.find(c);
  if (it == components_.end()) throw Error("component requested outside the support");
  return it->second;
}

std::uint32_t CondSet::gamma(Mask c, std::uint32_t top_index) const {
  return gamma_map(c).at(top_index);
}

const std::vector<std::uint32_t>& CondSet::gamma_map(Mask c) const {
  auto it = gamma_.find(c);
  if (it == gamma_.end()) throw Error("gamma requested outside the support");
  return it->second;
}

CondSetData CondSet::data() const {
  CondSetData d;
  d.alg = alg_;
  d.lives_on = lives_on_;
  d.components = components_;
  for (const auto& [c, g] : gamma_) {
    auto& out = d.gammas[c];
    const auto& top_labels = components_.at(lives_on_);
    const auto& c_labels = components_.at(c);
    for (std::size_t i = 0; i < g.size(); ++i) out[top_labels[i]] = c_labels[g[i]];
  }
  return d;
}

bool CondSet::equal_ignoring_x0(const CondSet& o) const {
  if (!alg_->same_as(*o.alg_) || lives_on_ != o.lives_on_) return false;
  for (Mask c : bits::submasks(lives_on_)) {
    if (c == 0) continue;  // identified regardless of the point's identity
    if (component(c) != o.component(c)) return false;
    if (gamma_map(c) != o.gamma_map(c)) return false;
  }
  return true;
}

CondSet CondSet::conditional_empty(AlgebraPtr alg) {
  return terminal_on(std::move(alg), 0);
}

CondSet CondSet::terminal_on(AlgebraPtr alg, Mask lives_on) {
  std::map<Mask, std::vector<std::string>> comps;
  std::map<Mask, std::vector<std::uint32_t>> gamma;
  for (Mask c : bits::submasks(lives_on)) {
    comps[c] = {"*"};
    gamma[c] = {0};
  }
  return CondSetAccess::make(std::move(alg), lives_on, std::move(comps), std::move(gamma));
}

namespace {

std::string fam_text(const Algebra& alg, const std::vector<Mask>& parts,
                     const std::vector<std::string>& labels) {
  std::string t;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) t += ", ";
    t += alg.show(parts[i]) + ":'" + labels[i] + "'";
  }
  return t.empty() ? std::string("<empty>") : t;
}

}  // namespace

CondSetValidation validate_condset(const CondSetData& data) {
  CondSetValidation out;
  if (!data.alg) {
    out.structural.push_back({"structure", "missing algebra"});
    return out;
  }
  const Algebra& alg = *data.alg;
  if (data.lives_on & ~alg.full()) {
    out.structural.push_back({"structure", "support out of range for algebra"});
    return out;
  }
  auto elements = bits::submasks(data.lives_on);

  for (Mask c : elements) {
    auto it = data.components.find(c);
    if (it == data.components.end()) {
      out.structural.push_back({"structure", "missing component at " + alg.show(c)});
      continue;
    }
    std::set<std::string> labels(it->second.begin(), it->second.end());
    if (labels.size() != it->second.size())
      out.structural.push_back({"structure", "duplicate labels in component at " + alg.show(c)});
    if (it->second.empty())
      out.structural.push_back({"structure", "empty component at " + alg.show(c)});
  }
  if (!out.structural.empty()) return out;

  const auto& top_labels = data.components.at(data.lives_on);
  std::map<Mask, std::vector<std::uint32_t>> gamma;
  for (Mask c : elements) {
    auto git = data.gammas.find(c);
    if (git == data.gammas.end()) {
      out.structural.push_back({"structure", "missing gamma at " + alg.show(c)});
      continue;
    }
    const auto& c_labels = data.components.at(c);
    std::vector<std::uint32_t> index_map;
    index_map.reserve(top_labels.size());
    for (const auto& x : top_labels) {
      auto xi = git->second.find(x);
      if (xi == git->second.end()) {
        out.structural.push_back(
            {"structure", "gamma at " + alg.show(c) + " undefined on '" + x + "'"});
        continue;
      }
      auto pos = std::find(c_labels.begin(), c_labels.end(), xi->second);
      if (pos == c_labels.end()) {
        out.structural.push_back({"structure", "gamma at " + alg.show(c) + " sends '" + x +
                                                   "' to unknown label '" + xi->second + "'"});
        continue;
      }
      index_map.push_back(static_cast<std::uint32_t>(pos - c_labels.begin()));
    }
    if (index_map.size() == top_labels.size()) gamma[c] = std::move(index_map);
  }
  if (!out.structural.empty()) return out;

  // (i) the component at 0 is a singleton
  if (data.components.at(0).size() != 1)
    out.axiom.push_back({"x0-singleton", "component at 0 has " +
                                             std::to_string(data.components.at(0).size()) +
                                             " elements, expected 1"});

  // (ii) the map at the support is the identity
  {
    const auto& g = gamma.at(data.lives_on);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
      if (g[i] != i) {
        out.axiom.push_back({"gamma-top-identity",
                             "gamma at the support is not the identity: '" + top_labels[i] +
                                 "' -> '" + top_labels[g[i]] + "'"});
        break;
      }
    }
  }

  // (iii) consistency: identification at b propagates below b
  for (Mask b : elements) {
    for (Mask c : bits::submasks(b)) {
      const auto& gb = gamma.at(b);
      const auto& gc = gamma.at(c);
      bool reported = false;
      for (std::uint32_t x = 0; x < gb.size() && !reported; ++x) {
        for (std::uint32_t y = static_cast<std::uint32_t>(x + 1); y < gb.size(); ++y) {
          if (gb[x] == gb[y] && gc[x] != gc[y]) {
            out.axiom.push_back({"consistency",
                                 "gamma at " + alg.show(b) + " identifies '" + top_labels[x] +
                                     "' and '" + top_labels[y] + "' but gamma at " + alg.show(c) +
                                     " separates them"});
            reported = true;
            break;
          }
        }
      }
    }
  }

  // (iv) stability: one solution per family per partition of the support
  for (const auto& parts : partitions_of_mask(alg, data.lives_on)) {
    std::uint64_t families = 1;
    for (Mask p : parts) {
      families *= data.components.at(p).size();
      if (families > component_guard())
        throw Error("stability enumeration exceeds guard; set CONDSHEAF_MAX_TUPLES to raise");
    }
    for (std::uint64_t fi = 0; fi < families; ++fi) {
      std::vector<std::uint32_t> picks;
      std::vector<std::string> pick_labels;
      std::uint64_t rest = fi;
      for (Mask p : parts) {
        std::uint64_t k = data.components.at(p).size();
        picks.push_back(static_cast<std::uint32_t>(rest % k));
        pick_labels.push_back(data.components.at(p)[static_cast<std::size_t>(rest % k)]);
        rest /= k;
      }
      std::vector<std::uint32_t> hits;
      for (std::uint32_t x = 0; x < top_labels.size(); ++x) {
        bool match = true;
        for (std::size_t i = 0; i < parts.size(); ++i) {
          if (gamma.at(parts[i])[x] != picks[i]) {
            match = false;
            break;
          }
        }
        if (match) hits.push_back(x);
      }
      if (hits.empty()) {
        out.axiom.push_back({"stability-existence",
                             "no element of the top component restricts to the family {" +
                                 fam_text(alg, parts, pick_labels) + "}"});
      } else if (hits.size() > 1) {
        out.axiom.push_back({"stability-uniqueness",
                             "elements '" + top_labels[hits[0]] + "' and '" +
                                 top_labels[hits[1]] + "' both restrict to the family {" +
                                 fam_text(alg, parts, pick_labels) + "}"});
      }
    }
  }

  // surjectivity of every gamma
  for (Mask c : elements) {
    const auto& g = gamma.at(c);
    std::set<std::uint32_t> image(g.begin(), g.end());
    const auto& c_labels = data.components.at(c);
    for (std::uint32_t i = 0; i < c_labels.size(); ++i) {
      if (!image.count(i)) {
        out.axiom.push_back({"surjectivity", "gamma at " + alg.show(c) + " misses '" +
                                                 c_labels[i] + "'"});
        break;
      }
    }
  }

  if (out.ok())
    out.value = CondSetAccess::make(data.alg, data.lives_on, data.components, std::move(gamma));
  return out;
}

CondSet from_sheaf(const StalkSheaf& x) {
  std::map<Mask, std::vector<std::string>> comps;
  std::map<Mask, std::vector<std::uint32_t>> gamma;
  Mask top = x.top();
  std::uint64_t n = x.component_size(top);
  for (Mask c : bits::submasks(top)) {
    comps[c] = x.component_labels(c);
    auto& g = gamma[c];
    g.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i)
      g.push_back(static_cast<std::uint32_t>(x.restrict_index(top, c, i)));
  }
  return CondSetAccess::make(x.algebra(), top, std::move(comps), std::move(gamma));
}

CondSet from_sheaf(const ExtensionalSheaf& x) {
  auto validation = validate_sheaf(x);
  if (!validation.ok()) {
    const auto& v = validation.structural.empty() ? validation.axiom.front()
                                                  : validation.structural.front();
    throw Error("not a sheaf (" + v.kind + "): " + v.message);
  }
  if (auto w = surjectivity_witness(x)) throw Error("not surjective: " + w->message);
  std::map<Mask, std::vector<std::string>> comps;
  std::map<Mask, std::vector<std::uint32_t>> gamma;
  const auto& top_labels = x.components.at(x.top);
  for (Mask c : bits::submasks(x.top)) {
    const auto& c_labels = x.components.at(c);
    comps[c] = c_labels;
    const auto& f = x.maps.at({x.top, c});
    auto& g = gamma[c];
    for (const auto& lbl : top_labels) {
      auto pos = std::find(c_labels.begin(), c_labels.end(), f.at(lbl));
      g.push_back(static_cast<std::uint32_t>(pos - c_labels.begin()));
    }
  }
  return CondSetAccess::make(x.alg, x.top, std::move(comps), std::move(gamma));
}

std::vector<std::uint32_t> induced_map(const CondSet& x, Mask b, Mask c) {
  if ((c & b) != c || (b & x.lives_on()) != b) throw Error("induced map outside the support");
  const auto& gb = x.gamma_map(b);
  const auto& gc = x.gamma_map(c);
  std::vector<std::uint32_t> out(x.component(b).size(), 0);
  std::vector<bool> seen(out.size(), false);
  for (std::uint32_t t = 0; t < gb.size(); ++t) {
    std::uint32_t u = gb[t];
    if (!seen[u]) {
      seen[u] = true;
      out[u] = gc[t];  // well-defined: consistency makes the choice immaterial
    }
  }
  for (bool s : seen)
    if (!s) throw Error("induced map undefined: gamma not surjective");
  return out;
}

StalkSheaf to_sheaf(const CondSet& c) {
  ExtensionalSheaf ext;
  ext.alg = c.algebra();
  ext.top = c.lives_on();
  for (Mask b : bits::submasks(ext.top)) {
    ext.components[b] = c.component(b);
    for (Mask a : bits::submasks(b)) {
      auto idx = induced_map(c, b, a);
      std::map<std::string, std::string> f;
      const auto& from = c.component(b);
      const auto& to = c.component(a);
      for (std::size_t i = 0; i < from.size(); ++i) f[from[i]] = to[idx[i]];
      ext.maps[{b, a}] = std::move(f);
    }
  }
  auto validation = validate_sheaf(ext);
  if (!validation.ok()) {
    const auto& v = validation.structural.empty() ? validation.axiom.front()
                                                  : validation.structural.front();
    throw Error("conditional set does not induce a sheaf (" + v.kind + "): " + v.message);
  }
  return *validation.normalized;
}

std::uint32_t amalgamate_via_stability(const CondSet& x, Mask base, const std::vector<Mask>& parts,
                                       const std::vector<std::uint32_t>& picks,
                                       std::optional<std::uint32_t> free_choice) {
  if ((base & x.lives_on()) != base) throw Error("amalgamation base outside the support");
  if (parts.size() != picks.size()) throw Error("amalgamation family size mismatch");
  Mask seen = 0;
  for (Mask p : parts) {
    if (p & seen) throw Error("amalgamation parts not pairwise disjoint");
    seen |= p;
  }
  if (seen != base) throw Error("amalgamation parts do not join to the base");

  Mask rest = x.lives_on() & ~base;
  std::uint32_t rest_pick = free_choice.value_or(0);
  if (rest != 0 && rest_pick >= x.component(rest).size())
    throw Error("free choice out of range");

  std::vector<std::uint32_t> hits;
  std::uint32_t top_size = static_cast<std::uint32_t>(x.component(x.lives_on()).size());
  for (std::uint32_t t = 0; t < top_size; ++t) {
    bool match = true;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i] == 0) continue;  // the point at 0 matches everything
      if (x.gamma(parts[i], t) != picks[i]) {
        match = false;
        break;
      }
    }
    if (match && rest != 0 && x.gamma(rest, t) != rest_pick) match = false;
    if (match) hits.push_back(t);
  }
  if (hits.size() != 1)
    throw Error("stability failed to produce a unique solution (got " +
                std::to_string(hits.size()) + ")");
  return x.gamma(base, hits[0]);
}

bool conditional_inclusion(const CondSet& x, const CondSet& y) {
  if (!x.algebra()->same_as(*y.algebra()))
    throw Error("conditional inclusion across different ambient algebras");
  Mask a = x.lives_on(), b = y.lives_on();
  if ((a & b) != a) return false;
  StalkSheaf xs = to_sheaf(x);
  StalkSheaf ys = to_sheaf(y);
  return xs.subsheaf_of(ys.restricted(a));
}

CondSet conditional_product(const std::vector<CondSet>& family) {
  if (family.empty()) throw Error("conditional product of an empty family");
  AlgebraPtr alg = family.front().algebra();
  Mask support = family.front().lives_on();
  for (const auto& x : family) {
    if (!x.algebra()->same_as(*alg)) throw Error("conditional product across different algebras");
    support &= x.lives_on();
  }

  CondSetData data;
  data.alg = alg;
  data.lives_on = support;
  std::map<Mask, std::vector<std::vector<std::uint32_t>>> tuples;  // per component
  for (Mask c : bits::submasks(support)) {
    std::uint64_t n = 1;
    for (const auto& x : family) {
      n *= x.component(c).size();
      if (n > component_guard())
        throw Error("product component exceeds guard; set CONDSHEAF_MAX_TUPLES to raise");
    }
    auto& labels = data.components[c];
    auto& tpl = tuples[c];
    for (std::uint64_t i = 0; i < n; ++i) {
      std::vector<std::uint32_t> digits;
      std::string label;
      std::uint64_t r = i;
      for (const auto& x : family) {
        std::uint64_t k = x.component(c).size();
        auto d = static_cast<std::uint32_t>(r % k);
        r /= k;
        if (family.size() > 1) {
          label += label.empty() ? "(" : ",";
          label += x.component(c)[d];
        } else {
          label = x.component(c)[d];
        }
        digits.push_back(d);
      }
      if (family.size() > 1) label += ")";
      labels.push_back(std::move(label));
      tpl.push_back(std::move(digits));
    }
  }
  // coordinatewise maps from the product's top component
  std::vector<std::map<Mask, std::vector<std::uint32_t>>> factor_maps(family.size());
  for (std::size_t f = 0; f < family.size(); ++f)
    for (Mask c : bits::submasks(support)) factor_maps[f][c] = induced_map(family[f], support, c);
  for (Mask c : bits::submasks(support)) {
    auto& g = data.gammas[c];
    const auto& top_tuples = tuples.at(support);
    for (std::size_t t = 0; t < top_tuples.size(); ++t) {
      std::uint64_t out = 0, place = 1;
      for (std::size_t f = 0; f < family.size(); ++f) {
        out += factor_maps[f][c][top_tuples[t][f]] * place;
        place *= family[f].component(c).size();
      }
      g[data.components.at(support)[t]] = data.components.at(c)[static_cast<std::size_t>(out)];
    }
  }

  auto validation = validate_condset(data);
  if (!validation.ok()) throw Error("conditional product failed validation");
  return *validation.value;
}

std::vector<Violation> validate_cond_subset(const CondSubset& s, const CondSet& ambient) {
  std::vector<Violation> out;
  const Algebra& alg = *ambient.algebra();
  if ((s.support & ambient.lives_on()) != s.support) {
    out.push_back({"structure", "subset support not below the ambient support"});
    return out;
  }
  for (Mask c : bits::submasks(s.support)) {
    auto it = s.members.find(c);
    if (it == s.members.end()) {
      out.push_back({"structure", "missing member set at " + alg.show(c)});
      continue;
    }
    if (it->second.empty())
      out.push_back({"non-empty", "member set at " + alg.show(c) + " is empty"});
    for (std::uint32_t i : it->second)
      if (i >= ambient.component(c).size())
        out.push_back({"structure", "member index out of range at " + alg.show(c)});
  }
  if (!out.empty()) return out;

  auto contains = [&](Mask c, std::uint32_t i) {
    const auto& m = s.members.at(c);
    return std::binary_search(m.begin(), m.end(), i);
  };

  // closure under the induced restriction maps
  for (Mask c : bits::submasks(s.support)) {
    for (Mask cc : bits::submasks(c)) {
      auto f = induced_map(ambient, c, cc);
      for (std::uint32_t i : s.members.at(c)) {
        if (!contains(cc, f[i])) {
          out.push_back({"restriction-closure",
                         "restriction of '" + ambient.component(c)[i] + "' from " + alg.show(c) +
                             " to " + alg.show(cc) + " leaves the subset"});
        }
      }
    }
  }
  // closure under amalgamation
  for (Mask c : bits::submasks(s.support)) {
    for (const auto& parts : partitions_of_mask(alg, c)) {
      std::uint64_t families = 1;
      for (Mask p : parts) families *= s.members.at(p).size();
      for (std::uint64_t fi = 0; fi < families; ++fi) {
        std::vector<std::uint32_t> picks;
        std::uint64_t r = fi;
        for (Mask p : parts) {
          const auto& m = s.members.at(p);
          picks.push_back(m[static_cast<std::size_t>(r % m.size())]);
          r /= m.size();
        }
        std::uint32_t glued = amalgamate_via_stability(ambient, c, parts, picks);
        if (!contains(c, glued)) {
          out.push_back({"amalgamation-closure",
                         "amalgamation '" + ambient.component(c)[glued] + "' at " + alg.show(c) +
                             " leaves the subset"});
        }
      }
    }
  }
  return out;
}

std::pair<std::uint32_t, std::uint32_t> product_pair(const CondSet& x, const CondSet& y, Mask c,
                                                     std::uint32_t product_index) {
  (void)y;
  auto kx = static_cast<std::uint32_t>(x.component(c).size());
  return {product_index % kx, product_index / kx};
}

CondFunctionValidation validate_cond_function(const CondSubset& graph, const CondSet& x,
                                              const CondSet& y, Mask d) {
  CondFunctionValidation out;
  CondSet prod = conditional_product({x, y});
  if ((d & prod.lives_on()) != d) {
    out.structural.push_back(
        {"structure", "domain support is not below the product's support"});
    return out;
  }
  if ((d & graph.support) != d) {
    out.structural.push_back({"structure", "graph support does not reach the domain support"});
    return out;
  }
  auto subset_violations = validate_cond_subset(graph, prod);
  for (auto& v : subset_violations) out.structural.push_back(std::move(v));
  if (!out.structural.empty()) return out;

  const Algebra& alg = *x.algebra();
  for (Mask c : bits::submasks(d)) {
    std::vector<std::int64_t> image(x.component(c).size(), -1);
    bool bad = false;
    for (std::uint32_t member : graph.members.at(c)) {
      auto [xi, yi] = product_pair(x, y, c, member);
      if (image[xi] >= 0) {
        out.axiom.push_back({"functionality",
                             "graph at " + alg.show(c) + " relates '" + x.component(c)[xi] +
                                 "' to both '" + y.component(c)[static_cast<std::size_t>(image[xi])] +
                                 "' and '" + y.component(c)[yi] + "'"});
        bad = true;
        continue;
      }
      image[xi] = yi;
    }
    for (std::size_t xi = 0; xi < image.size(); ++xi) {
      if (image[xi] < 0) {
        out.axiom.push_back({"totality", "graph at " + alg.show(c) + " has no value for '" +
                                             x.component(c)[xi] + "'"});
        bad = true;
      }
    }
    if (!bad) {
      auto& f = out.component_functions[c];
      f.reserve(image.size());
      for (auto v : image) f.push_back(static_cast<std::uint32_t>(v));
    }
  }
  return out;
}

}  // namespace condsheaf
