#include "condsheaf/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace condsheaf {

namespace {

using nlohmann::json;

Mask parse_elem_key(const Algebra& alg, const std::string& key, const std::string& where) {
  auto m = alg.parse_key(key);
  if (!m) throw Error(where + ": unknown element key '" + key + "'");
  return *m;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw Error(where + ": expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::map<std::string, std::string> string_map(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + ": expected an object of strings");
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) throw Error(where + ": expected string values");
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

SheafEntry parse_sheaf(const AlgebraPtr& alg, const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(where + ": expected an object");
  SheafEntry entry;
  if (j.contains("stalks")) {
    std::map<std::string, std::vector<std::string>> stalks;
    for (auto it = j.at("stalks").begin(); it != j.at("stalks").end(); ++it)
      stalks[it.key()] = string_list(it.value(), where + ".stalks." + it.key());
    entry.stalk = StalkSheaf::make(alg, stalks);
    return entry;
  }
  if (!j.contains("components") || !j.contains("maps"))
    throw Error(where + ": expected either 'stalks' or 'components' with 'maps'");
  ExtensionalSheaf ext;
  ext.alg = alg;
  ext.top = alg->full();
  if (j.contains("top")) ext.top = parse_elem_key(*alg, j.at("top").get<std::string>(), where);
  for (auto it = j.at("components").begin(); it != j.at("components").end(); ++it) {
    Mask m = parse_elem_key(*alg, it.key(), where + ".components");
    ext.components[m] = string_list(it.value(), where + ".components." + it.key());
  }
  for (auto it = j.at("maps").begin(); it != j.at("maps").end(); ++it) {
    const std::string& key = it.key();
    auto arrow_pos = key.find("->");
    if (arrow_pos == std::string::npos)
      throw Error(where + ".maps: key '" + key + "' is not of the form 'from->to'");
    Mask from = parse_elem_key(*alg, key.substr(0, arrow_pos), where + ".maps");
    Mask to = parse_elem_key(*alg, key.substr(arrow_pos + 2), where + ".maps");
    if ((to & from) != to)
      throw Error(where + ".maps: '" + key + "' does not go downward");
    ext.maps[{from, to}] = string_map(it.value(), where + ".maps." + key);
  }
  entry.ext = std::move(ext);
  return entry;
}

CondSetData parse_condset(const AlgebraPtr& alg, const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("lives_on") || !j.contains("components") ||
      !j.contains("gammas"))
    throw Error(where + ": expected 'lives_on', 'components' and 'gammas'");
  CondSetData data;
  data.alg = alg;
  data.lives_on = parse_elem_key(*alg, j.at("lives_on").get<std::string>(), where);
  for (auto it = j.at("components").begin(); it != j.at("components").end(); ++it) {
    Mask m = parse_elem_key(*alg, it.key(), where + ".components");
    data.components[m] = string_list(it.value(), where + ".components." + it.key());
  }
  for (auto it = j.at("gammas").begin(); it != j.at("gammas").end(); ++it) {
    Mask m = parse_elem_key(*alg, it.key(), where + ".gammas");
    data.gammas[m] = string_map(it.value(), where + ".gammas." + it.key());
  }
  return data;
}

}  // namespace

ModelFile parse_model_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("algebra") || !doc.at("algebra").contains("atoms"))
    throw Error("model file must carry an 'algebra' with 'atoms'");
  ModelFile model;
  model.algebra = Algebra::make(string_list(doc.at("algebra").at("atoms"), "algebra.atoms"));

  if (doc.contains("sheaves")) {
    for (auto it = doc.at("sheaves").begin(); it != doc.at("sheaves").end(); ++it)
      model.sheaves[it.key()] =
          parse_sheaf(model.algebra, it.value(), "sheaves." + it.key());
  }
  if (doc.contains("condsets")) {
    for (auto it = doc.at("condsets").begin(); it != doc.at("condsets").end(); ++it)
      model.condsets[it.key()] =
          parse_condset(model.algebra, it.value(), "condsets." + it.key());
  }
  if (doc.contains("fobjects")) {
    for (auto it = doc.at("fobjects").begin(); it != doc.at("fobjects").end(); ++it) {
      const auto& j = it.value();
      const std::string where = "fobjects." + it.key();
      if (!j.is_object() || !j.contains("support") || !j.contains("sheaf"))
        throw Error(where + ": expected 'support' and 'sheaf'");
      FObjectEntry entry;
      entry.support = parse_elem_key(*model.algebra, j.at("support").get<std::string>(), where);
      entry.sheaf = j.at("sheaf").get<std::string>();
      if (!model.sheaves.count(entry.sheaf))
        throw Error(where + ": unresolved sheaf name '" + entry.sheaf + "'");
      model.fobjects[it.key()] = std::move(entry);
    }
  }
  if (doc.contains("farrows")) {
    for (auto it = doc.at("farrows").begin(); it != doc.at("farrows").end(); ++it) {
      const auto& j = it.value();
      const std::string where = "farrows." + it.key();
      if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
          !j.contains("stalk_maps"))
        throw Error(where + ": expected 'source', 'target' and 'stalk_maps'");
      FArrowEntry entry;
      entry.source = j.at("source").get<std::string>();
      entry.target = j.at("target").get<std::string>();
      for (const auto& name : {entry.source, entry.target})
        if (!model.fobjects.count(name))
          throw Error(where + ": unresolved object name '" + name + "'");
      for (auto mit = j.at("stalk_maps").begin(); mit != j.at("stalk_maps").end(); ++mit) {
        int atom = model.algebra->atom_index(mit.key());
        if (atom < 0) throw Error(where + ".stalk_maps: unknown atom '" + mit.key() + "'");
        entry.stalk_maps[atom] = string_map(mit.value(), where + ".stalk_maps." + mit.key());
      }
      model.farrows[it.key()] = std::move(entry);
    }
  }
  return model;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model_text(buffer.str());
}

FObjectPtr resolve_fobject(const ModelFile& model, const std::string& name) {
  auto it = model.fobjects.find(name);
  if (it == model.fobjects.end()) throw Error("unknown object: " + name);
  const SheafEntry& sheaf = model.sheaves.at(it->second.sheaf);
  StalkSheaf carrier = [&] {
    if (sheaf.stalk) return *sheaf.stalk;
    auto validation = validate_sheaf(*sheaf.ext);
    if (!validation.ok()) {
      const auto& v = validation.structural.empty() ? validation.axiom.front()
                                                    : validation.structural.front();
      throw Error("carrier '" + it->second.sheaf + "' is not a sheaf (" + v.kind + "): " +
                  v.message);
    }
    if (auto w = surjectivity_witness(*sheaf.ext))
      throw Error("carrier '" + it->second.sheaf + "' is not surjective: " + w->message);
    return *validation.normalized;
  }();
  if (carrier.top() != model.algebra->full())
    throw Error("carrier '" + it->second.sheaf + "' must live on the full algebra");
  return make_fobject(it->second.support, std::move(carrier));
}

std::vector<Violation> check_farrow(const ModelFile& model, const std::string& name,
                                    std::optional<FArrow>* arrow) {
  std::vector<Violation> out;
  auto it = model.farrows.find(name);
  if (it == model.farrows.end()) {
    out.push_back({"structure", "unknown arrow: " + name});
    return out;
  }
  FObjectPtr src, tgt;
  try {
    src = resolve_fobject(model, it->second.source);
    tgt = resolve_fobject(model, it->second.target);
  } catch (const Error& e) {
    out.push_back({"structure", e.what()});
    return out;
  }
  if ((src->support & tgt->support) != src->support) {
    out.push_back({"hom-empty", "no arrows exist: source support " +
                                    model.algebra->show(src->support) +
                                    " is not below target support " +
                                    model.algebra->show(tgt->support)});
    return out;
  }
  std::vector<std::vector<std::uint32_t>> maps(
      static_cast<std::size_t>(model.algebra->atom_count()));
  for (int atom : bits::atom_list(src->support)) {
    auto mit = it->second.stalk_maps.find(atom);
    if (mit == it->second.stalk_maps.end()) {
      out.push_back({"structure", "missing stalk map at atom " + model.algebra->atom_name(atom)});
      continue;
    }
    auto& m = maps[static_cast<std::size_t>(atom)];
    m.assign(src->carrier.stalk_size(atom), 0);
    std::vector<bool> seen(src->carrier.stalk_size(atom), false);
    for (const auto& [from, to] : mit->second) {
      std::uint32_t fi = 0, ti = 0;
      try {
        fi = src->carrier.stalk_index(atom, from);
        ti = tgt->carrier.stalk_index(atom, to);
      } catch (const Error& e) {
        out.push_back({"structure", e.what()});
        continue;
      }
      m[fi] = ti;
      seen[fi] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        out.push_back({"structure", "stalk map at " + model.algebra->atom_name(atom) +
                                        " undefined on '" + src->carrier.stalk(atom)[i] + "'"});
  }
  if (out.empty() && arrow) *arrow = FArrow(src, tgt, std::move(maps));
  return out;
}

}  // namespace condsheaf
