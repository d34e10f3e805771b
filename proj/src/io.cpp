#include "rlab/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rlab/errors.hpp"

namespace rlab::io {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.is_array()) throw ConfigError(std::string(field) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(std::string(field) + " must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double number_field(const json& obj, const char* field) {
  if (!obj.contains(field)) throw ConfigError(std::string("missing field '") + field + "'");
  const auto& v = obj.at(field);
  if (!v.is_number()) throw ConfigError(std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

SourceMeasure atoms_from_json(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw ConfigError("'atoms' must be a nonempty array");
  std::vector<Atom> atoms;
  for (const auto& a : arr) {
    if (!a.is_object()) throw ConfigError("each atom must be an object {\"A\":..., \"a\":[...]}");
    if (!a.contains("a")) throw ConfigError("atom is missing its location 'a'");
    atoms.push_back({number_field(a, "A"), Vec(number_array(a.at("a"), "a"))});
  }
  try {
    return AtomicMeasure(std::move(atoms));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

SourceMeasure grid_from_json(const json& g) {
  if (!g.is_object()) throw ConfigError("'grid' must be an object");
  for (const char* f : {"origin", "shape", "values"}) {
    if (!g.contains(f)) throw ConfigError(std::string("grid is missing '") + f + "'");
  }
  GridSpec spec;
  spec.origin = Vec(number_array(g.at("origin"), "origin"));
  spec.h = number_field(g, "h");
  for (const auto& s : g.at("shape")) {
    if (!s.is_number_integer() || s.get<long long>() <= 0) {
      throw ConfigError("grid shape entries must be positive integers");
    }
    spec.shape.push_back(s.get<std::size_t>());
  }
  try {
    return GriddedDensity(std::move(spec), number_array(g.at("values"), "values"));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

SourceMeasure parse_measure(const std::string& text) {
  const json doc = parse_document(text, "measure");
  if (!doc.is_object()) throw ConfigError("measure document must be a JSON object");
  const bool has_atoms = doc.contains("atoms");
  const bool has_grid = doc.contains("grid");
  if (has_atoms == has_grid) throw ConfigError("measure needs exactly one of 'atoms' or 'grid'");
  return has_atoms ? atoms_from_json(doc.at("atoms")) : grid_from_json(doc.at("grid"));
}

SourceMeasure load_measure(const std::filesystem::path& path) {
  return parse_measure(read_file(path));
}

std::string dump_measure(const SourceMeasure& source) {
  json doc;
  if (const auto* atomic = std::get_if<AtomicMeasure>(&source)) {
    json arr = json::array();
    for (const auto& a : atomic->atoms()) {
      arr.push_back({{"A", a.weight}, {"a", a.location.components()}});
    }
    doc["atoms"] = std::move(arr);
  } else {
    const auto& g = std::get<GriddedDensity>(source);
    doc["grid"] = {{"origin", g.grid().origin.components()},
                   {"h", g.h()},
                   {"shape", g.grid().shape},
                   {"values", g.values()}};
  }
  return doc.dump();
}

Params parse_params(const std::string& text) {
  const json doc = parse_document(text, "params");
  if (!doc.is_object()) throw ConfigError("params document must be a JSON object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer()) {
    throw ConfigError("params: 'n' must be an integer");
  }
  if (!doc.contains("p")) throw ConfigError("params: missing field 'p'");
  double p = 0.0;
  const auto& pj = doc.at("p");
  if (pj.is_string()) {
    try {
      p = parse_p(pj.get<std::string>());
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  } else if (pj.is_number()) {
    p = pj.get<double>();
  } else {
    throw ConfigError("params: 'p' must be a number or \"inf\"");
  }
  try {
    return Params(doc.at("n").get<int>(), p, number_field(doc, "q"), number_field(doc, "alpha"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

Params load_params(const std::filesystem::path& path) { return parse_params(read_file(path)); }

std::string dump_params(const Params& params) {
  json doc{{"n", params.n()}, {"q", params.q()}, {"alpha", params.alpha()}};
  if (params.p_is_infinite()) {
    doc["p"] = "inf";
  } else {
    doc["p"] = params.p();
  }
  return doc.dump();
}

}  // namespace rlab::io
