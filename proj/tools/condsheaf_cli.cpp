#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "condsheaf/drivers.hpp"
#include "condsheaf/model_io.hpp"
#include "condsheaf/subobject_lattice.hpp"
#include "condsheaf/topos_checks.hpp"

namespace {

using namespace condsheaf;

constexpr int kExitPass = 0;
constexpr int kExitViolations = 1;
constexpr int kExitStructural = 2;

void emit(const Report& report, const std::string& format) {
  if (format == "json")
    std::cout << report.to_json_text();
  else
    std::cout << report.to_text();
}

int run_check(const std::string& path, const std::string& what, const std::string& format) {
  ModelFile model = load_model_file(path);
  Report report;
  report.command = "check " + what;
  report.inputs_digest = fnv1a_hex(path + "#" + what);
  if (what == "sheaf") {
    for (const auto& [name, entry] : model.sheaves) {
      if (entry.stalk) {
        report.add(name, true, 1, "stalk form, valid by construction");
        continue;
      }
      auto validation = validate_sheaf(*entry.ext);
      std::string detail;
      for (const auto& v : validation.structural) detail += "[" + v.kind + "] " + v.message + "; ";
      for (const auto& v : validation.axiom) detail += "[" + v.kind + "] " + v.message + "; ";
      report.add(name, validation.ok(), 1, detail);
    }
  } else if (what == "condset") {
    for (const auto& [name, data] : model.condsets) {
      auto validation = validate_condset(data);
      std::string detail;
      for (const auto& v : validation.structural) detail += "[" + v.kind + "] " + v.message + "; ";
      for (const auto& v : validation.axiom) detail += "[" + v.kind + "] " + v.message + "; ";
      report.add(name, validation.ok(), 1, detail);
    }
  } else if (what == "farrow") {
    for (const auto& [name, entry] : model.farrows) {
      (void)entry;
      auto violations = check_farrow(model, name);
      std::string detail;
      for (const auto& v : violations) detail += "[" + v.kind + "] " + v.message + "; ";
      report.add(name, violations.empty(), 1, detail);
    }
  } else {
    throw Error("unknown check target: " + what);
  }
  emit(report, format);
  return report.all_pass() ? kExitPass : kExitViolations;
}

int run_verify(int atoms, int max_stalk, std::vector<std::string> claims, bool unsafe_large,
               std::uint64_t seed, const std::string& format) {
  if ((atoms > 3 || max_stalk > 3) && !unsafe_large)
    throw Error("universe bounds exceed the default guard (3 atoms, 3 stalk elements); "
                "pass --unsafe-large to proceed");
  const std::vector<std::string> known = {"roundtrip", "sublattice-boolean", "classifier",
                                          "generator", "limits"};
  if (claims.empty()) claims = known;
  for (const auto& c : claims)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw Error("unknown claim: " + c);

  // Work order may be shuffled; the assembled report is order-independent.
  std::vector<std::string> order = claims;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::map<std::string, Report> results;
  for (const auto& claim : order) {
    if (claim == "roundtrip") results[claim] = roundtrip_check(atoms, max_stalk);
    if (claim == "sublattice-boolean") results[claim] = sublattice_check(atoms, max_stalk);
    if (claim == "classifier") results[claim] = no_classifier_report(atoms, max_stalk);
    if (claim == "generator") results[claim] = generator_report(atoms, max_stalk);
    if (claim == "limits") results[claim] = limits_check(atoms, max_stalk);
  }

  Report combined;
  combined.command = "verify";
  std::string digest_input =
      "verify/" + std::to_string(atoms) + "/" + std::to_string(max_stalk);
  for (const auto& c : known)
    if (std::find(claims.begin(), claims.end(), c) != claims.end()) digest_input += "/" + c;
  combined.inputs_digest = fnv1a_hex(digest_input);
  for (const auto& claim : known) {
    auto it = results.find(claim);
    if (it == results.end()) continue;
    combined.elapsed_seconds += it->second.elapsed_seconds;
    for (const auto& line : it->second.checks)
      combined.add(claim + ": " + line.name, line.pass, line.count, line.detail);
  }
  emit(combined, format);
  return combined.all_pass() ? kExitPass : kExitViolations;
}

int run_sublattice(const std::string& path, const std::string& object, const std::string& dot,
                   const std::string& format) {
  ModelFile model = load_model_file(path);
  FObjectPtr obj = resolve_fobject(model, object);
  SubLattice lat = SubLattice::enumerate(obj);
  Report report = verify_boolean_algebra(lat);
  report.command = "sublattice " + object;

  std::uint64_t lattice_atoms = 0;
  for (int atom : bits::atom_list(obj->support)) lattice_atoms += obj->carrier.stalk_size(atom);
  report.checks.insert(report.checks.begin(),
                       {"lattice size", true, lat.size(),
                        std::to_string(lat.size()) + " subobjects, " +
                            std::to_string(lattice_atoms) + " lattice atoms"});
  if (!dot.empty()) {
    std::ofstream out(dot);
    if (!out) throw Error("cannot write DOT file: " + dot);
    out << hasse_dot(lat);
  }
  emit(report, format);
  return report.all_pass() ? kExitPass : kExitViolations;
}

int run_classifier_demo(int atoms, int max_stalk, const std::string& format) {
  auto sq = first_classifier_counterexample(atoms, max_stalk);
  if (!sq) {
    std::cout << "no monic with strictly smaller source support exists in this universe\n";
    return kExitPass;
  }
  if (format == "json") {
    nlohmann::json j;
    const auto& alg = sq->m.src()->carrier.algebra();
    j["monic"] = sq->m.show();
    j["eta"] = sq->eta.show();
    j["truth"] = sq->truth.show();
    j["commutes"] = sq->commutes;
    j["is_pullback"] = sq->is_pullback;
    j["corner_support"] = alg->show(sq->m.src()->support);
    j["canonical_pullback_support"] = alg->show(sq->canonical_support);
    j["witness"] = sq->witness;
    if (sq->mediating) j["mediating"] = sq->mediating->show();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << classifier_square_text(*sq);
  }
  return kExitPass;
}

int run_generator_demo(int atoms, int max_stalk, const std::string& format) {
  AlgebraPtr alg = universe_algebra(atoms);
  auto universe = enumerate_objects(alg, max_stalk);
  for (const auto& src : universe) {
    for (const auto& tgt : universe) {
      auto homs = hom_set(src, tgt);
      for (std::size_t i = 0; i < homs.size(); ++i) {
        for (std::size_t j = i + 1; j < homs.size(); ++j) {
          SeparatingResult sep = separating_arrow(homs[i], homs[j]);
          if (format == "json") {
            nlohmann::json out;
            out["f"] = homs[i].show();
            out["g"] = homs[j].show();
            out["separator"] = sep.u.show();
            out["separating_atom"] = alg->atom_name(sep.atom);
            out["f_after_u"] = compose(homs[i], sep.u).show();
            out["g_after_u"] = compose(homs[j], sep.u).show();
            std::cout << out.dump(2) << "\n";
          } else {
            std::cout << "distinct parallel arrows\n  f: " << homs[i].show() << "\n  g: "
                      << homs[j].show() << "\n";
            std::cout << "separator from a subterminal at atom " << alg->atom_name(sep.atom)
                      << "\n  u: " << sep.u.show() << "\n";
            std::cout << "  f.u: " << compose(homs[i], sep.u).show() << "\n";
            std::cout << "  g.u: " << compose(homs[j], sep.u).show() << "\n";
          }
          return kExitPass;
        }
      }
    }
  }
  std::cout << "no distinct parallel pair exists in this universe\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite models of conditional sets, sheaves on a Boolean site, and their category"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::string check_path, check_what;
  auto* check = app.add_subcommand("check", "validate entries of a model file");
  check->fallthrough();
  check->add_option("file", check_path, "model file")->required();
  check->add_option("--what", check_what, "what to validate")
      ->required()
      ->check(CLI::IsMember({"sheaf", "condset", "farrow"}));

  int atoms = 2, max_stalk = 2;
  bool unsafe_large = false;
  std::uint64_t seed = 0;
  std::vector<std::string> claims;
  auto* verify = app.add_subcommand("verify", "exhaustive checks over a generated universe");
  verify->fallthrough();
  verify->add_option("--atoms", atoms, "number of atoms in the generated algebra");
  verify->add_option("--max-stalk", max_stalk, "largest stalk size in generated models");
  verify->add_option("--claims", claims,
                     "subset of: roundtrip, sublattice-boolean, classifier, generator, limits")
      ->delimiter(',');
  verify->add_flag("--unsafe-large", unsafe_large, "lift the universe size guard");
  verify->add_option("--seed", seed, "shuffles the internal work order only");

  std::string sub_path, sub_object, dot_file;
  auto* sublattice = app.add_subcommand("sublattice", "report on the subobject lattice of an object");
  sublattice->fallthrough();
  sublattice->add_option("file", sub_path, "model file")->required();
  sublattice->add_option("object", sub_object, "object name")->required();
  sublattice->add_option("--dot", dot_file, "write a Hasse diagram in DOT form");

  int demo_atoms = 2, demo_stalk = 2;
  auto* classifier_demo =
      app.add_subcommand("classifier-demo", "exhibit a commuting square that is not a pullback");
  classifier_demo->fallthrough();
  classifier_demo->add_option("--atoms", demo_atoms, "universe atoms");
  classifier_demo->add_option("--max-stalk", demo_stalk, "universe stalk bound");

  int gen_atoms = 2, gen_stalk = 2;
  auto* generator_demo =
      app.add_subcommand("generator-demo", "separate a parallel pair through a subterminal");
  generator_demo->fallthrough();
  generator_demo->add_option("--atoms", gen_atoms, "universe atoms");
  generator_demo->add_option("--max-stalk", gen_stalk, "universe stalk bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitStructural;
  }

  try {
    if (check->parsed()) return run_check(check_path, check_what, format);
    if (verify->parsed())
      return run_verify(atoms, max_stalk, claims, unsafe_large, seed, format);
    if (sublattice->parsed()) return run_sublattice(sub_path, sub_object, dot_file, format);
    if (classifier_demo->parsed()) return run_classifier_demo(demo_atoms, demo_stalk, format);
    if (generator_demo->parsed()) return run_generator_demo(gen_atoms, gen_stalk, format);
  } catch (const condsheaf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStructural;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitStructural;
  }
  return kExitStructural;
}
