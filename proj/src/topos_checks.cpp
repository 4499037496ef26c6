#include "condsheaf/topos_checks.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace condsheaf {

OmegaSheaf::OmegaSheaf(AlgebraPtr alg)
    : alg_(alg), sheaf_(StalkSheaf::terminal(alg)) {
  std::map<int, std::vector<std::string>> stalks;
  for (int atom : bits::atom_list(alg->full()))
    stalks[atom] = {"0", alg->atom_name(atom)};
  sheaf_ = StalkSheaf::make_on(alg, alg->full(), std::move(stalks));
  top_idx_.resize(static_cast<std::size_t>(alg->atom_count()));
  bottom_idx_.resize(static_cast<std::size_t>(alg->atom_count()));
  for (int atom : bits::atom_list(alg->full())) {
    top_idx_[static_cast<std::size_t>(atom)] = sheaf_.stalk_index(atom, alg->atom_name(atom));
    bottom_idx_[static_cast<std::size_t>(atom)] = sheaf_.stalk_index(atom, "0");
  }
}

Mask OmegaSheaf::elem_of_index(Mask d, std::uint64_t idx) const {
  Mask out = 0;
  for (int atom : bits::atom_list(d))
    if (sheaf_.digit(d, idx, atom) == top_idx_[static_cast<std::size_t>(atom)])
      out |= Mask{1} << atom;
  return out;
}

std::uint64_t OmegaSheaf::index_of_elem(Mask d, Mask c) const {
  if ((c & d) != c) throw Error("truth value outside the relative algebra");
  std::vector<std::uint32_t> digits;
  for (int atom : bits::atom_list(d))
    digits.push_back((c & (Mask{1} << atom)) ? top_idx_[static_cast<std::size_t>(atom)]
                                             : bottom_idx_[static_cast<std::size_t>(atom)]);
  return sheaf_.index_from_digits(d, digits);
}

std::uint32_t OmegaSheaf::top_at(int atom) const {
  return top_idx_.at(static_cast<std::size_t>(atom));
}

std::uint32_t OmegaSheaf::bottom_at(int atom) const {
  return bottom_idx_.at(static_cast<std::size_t>(atom));
}

OmegaSheaf omega(AlgebraPtr alg) { return OmegaSheaf(std::move(alg)); }

FObjectPtr omega_object(const OmegaSheaf& om) {
  return make_fobject(om.algebra()->full(), om.sheaf());
}

FArrow truth_arrow(const OmegaSheaf& om) {
  const auto& alg = om.algebra();
  FObjectPtr one = terminal_object(alg);
  std::vector<std::vector<std::uint32_t>> maps(static_cast<std::size_t>(alg->atom_count()));
  for (int atom : bits::atom_list(alg->full()))
    maps[static_cast<std::size_t>(atom)] = {om.top_at(atom)};
  return FArrow(one, omega_object(om), std::move(maps));
}

std::vector<std::vector<std::uint32_t>> characteristic_maps(const FObjectPtr& y,
                                                            const SubObject& s,
                                                            const OmegaSheaf& om) {
  const auto& alg = y->carrier.algebra();
  std::vector<std::vector<std::uint32_t>> maps(static_cast<std::size_t>(alg->atom_count()));
  for (int atom : bits::atom_list(s.support)) {
    const auto& subset = s.stalk_subsets[static_cast<std::size_t>(atom)];
    if (subset.empty()) throw Error("subobject with an empty component below its support");
    auto& m = maps[static_cast<std::size_t>(atom)];
    m.resize(y->carrier.stalk_size(atom));
    for (std::uint32_t i = 0; i < m.size(); ++i)
      m[i] = std::binary_search(subset.begin(), subset.end(), i) ? om.top_at(atom)
                                                                 : om.bottom_at(atom);
  }
  return maps;
}

Mask characteristic_eval(const FObjectPtr& y, const SubObject& s, Mask d, std::uint64_t idx) {
  Mask out = 0;
  for (Mask c : bits::submasks(d & s.support)) {
    bool inside = true;
    for (int atom : bits::atom_list(c)) {
      const auto& subset = s.stalk_subsets[static_cast<std::size_t>(atom)];
      if (!std::binary_search(subset.begin(), subset.end(), y->carrier.digit(d, idx, atom))) {
        inside = false;
        break;
      }
    }
    if (inside) out |= c;
  }
  return out;
}

ClassifierSquare classifier_square(
    const FArrow& m, const OmegaSheaf& om,
    const std::optional<std::vector<std::vector<std::uint32_t>>>& default_outside) {
  const auto& alg = m.src()->carrier.algebra();
  Mask a = m.src()->support;
  Mask b = m.tgt()->support;

  ClassifierSquare sq{m,
                      identity_arrow(m.src()),
                      truth_arrow(om),
                      identity_arrow(m.src()),
                      subobject_of_monic(m),
                      false,
                      false,
                      0,
                      0,
                      -1,
                      std::nullopt,
                      nullptr,
                      ""};

  // top edge: the unique arrow to the terminal object
  FObjectPtr one = terminal_object(alg);
  std::vector<std::vector<std::uint32_t>> bang_maps(
      static_cast<std::size_t>(alg->atom_count()));
  for (int atom : bits::atom_list(a))
    bang_maps[static_cast<std::size_t>(atom)].assign(m.src()->carrier.stalk_size(atom), 0);
  sq.bang = FArrow(m.src(), one, std::move(bang_maps));

  // bottom edge: characteristic maps below a, the chosen default elsewhere
  auto phi = characteristic_maps(m.tgt(), sq.s, om);
  std::vector<std::vector<std::uint32_t>> eta_maps(
      static_cast<std::size_t>(alg->atom_count()));
  for (int atom : bits::atom_list(b)) {
    Mask bit = Mask{1} << atom;
    if (a & bit) {
      eta_maps[static_cast<std::size_t>(atom)] = phi[static_cast<std::size_t>(atom)];
    } else if (default_outside) {
      eta_maps[static_cast<std::size_t>(atom)] =
          default_outside->at(static_cast<std::size_t>(atom));
    } else {
      eta_maps[static_cast<std::size_t>(atom)].assign(m.tgt()->carrier.stalk_size(atom),
                                                      om.bottom_at(atom));
    }
  }
  sq.eta = FArrow(m.tgt(), omega_object(om), std::move(eta_maps));

  sq.commutes = compose(sq.eta, m) == compose(sq.truth, sq.bang);

  // canonical cospan pullback: its support starts at the meet of the leg
  // sources (here b); empty solution components are then dropped
  LimitResult pb = pullback(sq.eta, sq.truth);
  sq.canonical_support = pb.candidate_support;
  sq.shrunk_support = pb.object->support;
  sq.fpullback = pb.object;

  // mediating arrow from the corner into the shrunk pullback
  for (const auto& h : hom_set(m.src(), pb.object)) {
    if (compose(pb.legs[0], h) == m && compose(pb.legs[1], h) == sq.bang) {
      sq.mediating = h;
      break;
    }
  }

  // verdict: an isomorphism over the cospan needs the corner support to equal
  // the canonical support, and the solution components to match the image
  bool verdict = (a == sq.canonical_support);
  if (verdict) {
    for (int atom : bits::atom_list(sq.canonical_support)) {
      std::vector<std::uint32_t> sol;
      for (std::uint32_t code : pb.solutions[static_cast<std::size_t>(atom)])
        sol.push_back(code % static_cast<std::uint32_t>(m.tgt()->carrier.stalk_size(atom)));
      std::sort(sol.begin(), sol.end());
      if (sol != sq.s.stalk_subsets[static_cast<std::size_t>(atom)]) {
        verdict = false;
        break;
      }
    }
  }
  sq.is_pullback = verdict;

  if (!sq.is_pullback) {
    for (int atom : bits::atom_list(sq.canonical_support & ~a)) {
      sq.missing_atom = atom;
      break;
    }
    std::ostringstream w;
    w << "canonical pullback keeps support " << alg->show(sq.canonical_support)
      << " but the corner has support " << alg->show(a)
      << "; no isomorphism over the cospan can change the support";
    if (sq.missing_atom >= 0) w << " (atom " << alg->atom_name(sq.missing_atom) << " is lost)";
    sq.witness = w.str();
  } else {
    sq.witness = "corner matches the canonical pullback componentwise";
  }
  return sq;
}

namespace {

// every map from the target's stalks below b but outside a into the truth
// stalks, enumerated as a default sweep
std::vector<std::vector<std::vector<std::uint32_t>>> enumerate_defaults(const FObjectPtr& tgt,
                                                                        Mask a,
                                                                        const OmegaSheaf& om) {
  const auto& alg = tgt->carrier.algebra();
  auto atoms = bits::atom_list(tgt->support & ~a);
  std::uint64_t total = 1;
  for (int atom : atoms) {
    for (std::uint64_t i = 0; i < tgt->carrier.stalk_size(atom); ++i) total *= 2;
  }
  std::vector<std::vector<std::vector<std::uint32_t>>> out;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<std::vector<std::uint32_t>> maps(static_cast<std::size_t>(alg->atom_count()));
    std::uint64_t rest = code;
    for (int atom : atoms) {
      auto& m = maps[static_cast<std::size_t>(atom)];
      for (std::uint64_t i = 0; i < tgt->carrier.stalk_size(atom); ++i) {
        m.push_back((rest & 1) ? om.top_at(atom) : om.bottom_at(atom));
        rest >>= 1;
      }
    }
    out.push_back(std::move(maps));
  }
  return out;
}

}  // namespace

Report no_classifier_report(int atoms, int max_stalk) {
  auto start = std::chrono::steady_clock::now();
  Report report;
  report.command = "classifier";
  report.inputs_digest =
      fnv1a_hex("classifier/" + std::to_string(atoms) + "/" + std::to_string(max_stalk));
  AlgebraPtr alg = universe_algebra(atoms);
  OmegaSheaf om(alg);
  auto universe = enumerate_objects(alg, max_stalk);

  std::uint64_t monics = 0, squares_commute = 0, defaults_checked = 0, classify_checked = 0;
  bool dichotomy_ok = true, invariance_ok = true, commute_ok = true, classify_ok = true;
  std::string dichotomy_witness, invariance_witness, commute_witness, classify_witness;
  std::optional<ClassifierSquare> counterexample;

  for (const auto& src : universe) {
    for (const auto& tgt : universe) {
      for (const auto& arrow : hom_set(src, tgt)) {
        if (!is_monic(arrow)) continue;
        ++monics;
        ClassifierSquare sq = classifier_square(arrow, om);
        if (sq.commutes) {
          ++squares_commute;
        } else if (commute_ok) {
          commute_ok = false;
          commute_witness = "square fails to commute for " + arrow.show();
        }
        bool expected = src->support == tgt->support;
        if (sq.is_pullback != expected && dichotomy_ok) {
          dichotomy_ok = false;
          dichotomy_witness = "verdict " + std::string(sq.is_pullback ? "pullback" : "not") +
                              " for " + arrow.show();
        }
        if (src->support != tgt->support && !sq.is_pullback &&
            (!counterexample || (counterexample->m.src()->support == 0 && src->support != 0)))
          counterexample = sq;
        // the verdict must not depend on the extension default
        for (const auto& dflt : enumerate_defaults(tgt, src->support, om)) {
          ++defaults_checked;
          ClassifierSquare alt = classifier_square(arrow, om, dflt);
          if ((alt.is_pullback != sq.is_pullback || !alt.commutes) && invariance_ok) {
            invariance_ok = false;
            invariance_witness = "verdict varies with the extension default for " + arrow.show();
          }
        }
        // the characteristic maps classify: below a, the truth preimage is
        // exactly the subobject (evaluated against the literal join formula)
        for (Mask d : bits::submasks(src->support)) {
          std::uint64_t n = tgt->carrier.component_size(d);
          for (std::uint64_t i = 0; i < n; ++i) {
            ++classify_checked;
            std::vector<std::uint32_t> digits;
            for (int atom : bits::atom_list(d)) {
              const auto& phi = sq.eta.map_at(atom);
              digits.push_back(phi[tgt->carrier.digit(d, i, atom)]);
            }
            Mask via_maps = om.elem_of_index(d, om.sheaf().index_from_digits(d, digits));
            Mask via_formula = characteristic_eval(tgt, sq.s, d, i);
            if (via_maps != via_formula && classify_ok) {
              classify_ok = false;
              classify_witness = "characteristic value mismatch at " + alg->show(d);
            }
          }
        }
      }
    }
  }

  report.add("squares commute", commute_ok, squares_commute, commute_witness);
  report.add("pullback iff equal supports", dichotomy_ok, monics, dichotomy_witness);
  report.add("verdict invariant under defaults", invariance_ok, defaults_checked,
             invariance_witness);
  report.add("characteristic maps classify", classify_ok, classify_checked, classify_witness);
  if (counterexample) {
    std::string detail = "monic " + counterexample->m.show() + ": " + counterexample->witness;
    if (counterexample->mediating)
      detail += "; mediating " + counterexample->mediating->show() +
                " has no inverse over the cospan";
    report.add("counterexample emitted", true, 1, detail);
  } else {
    report.add("counterexample emitted", atoms == 0, 0,
               atoms == 0 ? "no proper monics exist in a degenerate universe"
                          : "no strict-support monic found");
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::optional<ClassifierSquare> first_classifier_counterexample(int atoms, int max_stalk) {
  AlgebraPtr alg = universe_algebra(atoms);
  OmegaSheaf om(alg);
  auto universe = enumerate_objects(alg, max_stalk);
  std::optional<ClassifierSquare> fallback;
  for (const auto& src : universe) {
    for (const auto& tgt : universe) {
      if (src->support == tgt->support) continue;
      for (const auto& arrow : hom_set(src, tgt)) {
        if (!is_monic(arrow)) continue;
        ClassifierSquare sq = classifier_square(arrow, om);
        if (sq.is_pullback) continue;
        // prefer a non-initial corner: it carries a visible characteristic map
        if (src->support != 0) return sq;
        if (!fallback) fallback = sq;
      }
    }
  }
  return fallback;
}

Report generator_report(int atoms, int max_stalk) {
  auto start = std::chrono::steady_clock::now();
  Report report;
  report.command = "generator";
  report.inputs_digest =
      fnv1a_hex("generator/" + std::to_string(atoms) + "/" + std::to_string(max_stalk));
  AlgebraPtr alg = universe_algebra(atoms);
  auto universe = enumerate_objects(alg, max_stalk);
  StalkSheaf one = StalkSheaf::terminal(alg);

  std::uint64_t pairs = 0;
  bool ok = true;
  std::string witness;
  for (const auto& src : universe) {
    for (const auto& tgt : universe) {
      auto homs = hom_set(src, tgt);
      for (std::size_t i = 0; i < homs.size(); ++i) {
        for (std::size_t j = i + 1; j < homs.size(); ++j) {
          ++pairs;
          SeparatingResult sep = separating_arrow(homs[i], homs[j]);
          bool separated = !(compose(homs[i], sep.u) == compose(homs[j], sep.u));
          bool subterminal = sep.u.src()->carrier.componentwise_equal(one);
          if ((!separated || !subterminal) && ok) {
            ok = false;
            witness = "separation fails for " + homs[i].show() + " vs " + homs[j].show();
          }
        }
      }
    }
  }
  report.add("parallel pairs separated by subterminals", ok, pairs, witness);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string classifier_square_text(const ClassifierSquare& sq) {
  const auto& alg = sq.m.src()->carrier.algebra();
  std::ostringstream os;
  os << "square on the monic\n  m:     " << sq.m.show() << "\n";
  os << "  top:   " << sq.bang.show() << "\n";
  os << "  right: " << sq.truth.show() << "\n";
  os << "  bottom(eta): " << sq.eta.show() << "\n";
  os << "commutes: " << (sq.commutes ? "yes" : "NO") << "\n";
  os << "canonical pullback support: " << alg->show(sq.canonical_support)
     << ", corner support: " << alg->show(sq.m.src()->support) << "\n";
  os << "pullback verdict: " << (sq.is_pullback ? "pullback" : "not a pullback") << "\n";
  os << "  " << sq.witness << "\n";
  if (sq.mediating) {
    os << "mediating arrow into the shrunk pullback:\n  " << sq.mediating->show() << "\n";
    if (!sq.is_pullback) {
      os << "reverse mediating candidate (pullback -> corner): ";
      if ((sq.canonical_support & sq.m.src()->support) != sq.canonical_support) {
        os << "none, support " << alg->show(sq.canonical_support) << " is not below "
           << alg->show(sq.m.src()->support) << "\n";
      } else {
        os << "would not commute with the legs\n";
      }
    }
  }
  return os.str();
}

}  // namespace condsheaf
