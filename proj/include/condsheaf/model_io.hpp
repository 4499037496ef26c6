#pragma once

#include "condsheaf/category_f.hpp"
#include "condsheaf/conditional_set.hpp"

#include <map>
#include <optional>
#include <string>

namespace condsheaf {

/// One named sheaf from a model file: stalk form or raw extensional data.
struct SheafEntry {
  std::optional<StalkSheaf> stalk;
  std::optional<ExtensionalSheaf> ext;
};

struct FObjectEntry {
  Mask support = 0;
  std::string sheaf;  // names an entry in ModelFile::sheaves
};

struct FArrowEntry {
  std::string source, target;  // name entries in ModelFile::fobjects
  std::map<int, std::map<std::string, std::string>> stalk_maps;  // per atom index
};

/// Parsed model document: one algebra plus named sheaves, conditional sets,
/// objects and arrows. Element keys are atom names joined by '|' ("" is 0).
/// Parsing resolves structure only; axiom validation stays with the module
/// validators.
struct ModelFile {
  AlgebraPtr algebra;
  std::map<std::string, SheafEntry> sheaves;
  std::map<std::string, CondSetData> condsets;
  std::map<std::string, FObjectEntry> fobjects;
  std::map<std::string, FArrowEntry> farrows;
};

/// Throws Error on unreadable files or structurally ill-formed documents.
ModelFile load_model_file(const std::string& path);
ModelFile parse_model_text(const std::string& text);

/// The named object with its carrier resolved (extensional carriers are
/// validated and normalized first). Throws Error when the entry is missing
/// or its carrier is not a surjective sheaf on the full algebra.
FObjectPtr resolve_fobject(const ModelFile& model, const std::string& name);

/// Structural check of a named arrow entry; on success the arrow is built.
std::vector<Violation> check_farrow(const ModelFile& model, const std::string& name,
                                    std::optional<FArrow>* arrow = nullptr);

}  // namespace condsheaf
