#include "gibbs1d/model.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gibbs1d {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) ok = true;
    if (!ok) fail(errc::invalid_input, "model: unknown field '" + key + "' in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    fail(errc::invalid_input, "model: missing field '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(errc::invalid_input, "model: expected a number in " + where);
  return v.get<double>();
}

std::vector<std::string> names(const json& v, const std::string& where) {
  if (!v.is_array()) fail(errc::invalid_input, "model: expected an array in " + where);
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) fail(errc::invalid_input, "model: expected strings in " + where);
    out.push_back(e.get<std::string>());
  }
  return out;
}

Term parse_term(const json& t, size_t index) {
  const std::string where = "terms[" + std::to_string(index) + "]";
  if (!t.is_object()) fail(errc::invalid_input, "model: expected an object in " + where);
  const std::string family = require(t, "family", where).get<std::string>();
  if (family == "exponential_pair") {
    reject_unknown(t, {"family", "coupling", "rate"}, where);
    return Term::exponential_pair(number(require(t, "coupling", where), where),
                                  number(require(t, "rate", where), where));
  }
  if (family == "power_law_pair") {
    reject_unknown(t, {"family", "coupling", "exponent"}, where);
    return Term::power_law_pair(number(require(t, "coupling", where), where),
                                number(require(t, "exponent", where), where));
  }
  if (family == "single_site_field") {
    reject_unknown(t, {"family", "field"}, where);
    return Term::single_site_field(number(require(t, "field", where), where));
  }
  if (family == "finite_range_table") {
    reject_unknown(t, {"family", "range", "tables"}, where);
    const json& r = require(t, "range", where);
    if (!r.is_number_integer()) fail(errc::invalid_input, "model: range must be an integer in " + where);
    const json& tabs = require(t, "tables", where);
    if (!tabs.is_array()) fail(errc::invalid_input, "model: tables must be an array in " + where);
    std::vector<std::vector<double>> tables;
    for (const auto& row : tabs) {
      if (!row.is_array()) fail(errc::invalid_input, "model: each table must be an array in " + where);
      std::vector<double> vals;
      for (const auto& e : row) vals.push_back(number(e, where));
      tables.push_back(std::move(vals));
    }
    return Term::finite_range_table(r.get<int>(), std::move(tables));
  }
  fail(errc::invalid_input, "model: unknown family '" + family + "' in " + where);
}

Channel parse_channel(const json& c, const Alphabet& source, const std::string& name) {
  const std::string where = "channels." + name;
  if (!c.is_object()) fail(errc::invalid_input, "model: expected an object in " + where);
  const std::string type = require(c, "type", where).get<std::string>();
  const Alphabet target(names(require(c, "target", where), where + ".target"));
  if (type == "kernel") {
    reject_unknown(c, {"type", "target", "rows"}, where);
    const json& rows = require(c, "rows", where);
    if (!rows.is_array()) fail(errc::invalid_input, "model: rows must be an array in " + where);
    std::vector<std::vector<double>> matrix;
    for (const auto& row : rows) {
      if (!row.is_array()) fail(errc::invalid_input, "model: each row must be an array in " + where);
      std::vector<double> vals;
      for (const auto& e : row) vals.push_back(number(e, where));
      matrix.push_back(std::move(vals));
    }
    return SiteKernel(source, target, std::move(matrix));
  }
  if (type == "det") {
    reject_unknown(c, {"type", "target", "map"}, where);
    std::vector<Sym> image;
    for (const std::string& n : names(require(c, "map", where), where + ".map"))
      image.push_back(target.index_of(n));
    return DetMap(source, target, std::move(image));
  }
  fail(errc::invalid_input, "model: unknown channel type '" + type + "' in " + where);
}

}  // namespace

Model parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(errc::invalid_input, std::string("model: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(errc::invalid_input, "model: document must be a JSON object");
  reject_unknown(doc, {"alphabet", "spin_values", "terms", "channels"}, "the model document");

  std::optional<std::vector<double>> values;
  if (doc.contains("spin_values")) {
    const json& v = doc["spin_values"];
    if (!v.is_array()) fail(errc::invalid_input, "model: spin_values must be an array");
    std::vector<double> vals;
    for (const auto& e : v) vals.push_back(number(e, "spin_values"));
    values = std::move(vals);
  }
  const Alphabet alphabet(names(require(doc, "alphabet", "the model document"), "alphabet"),
                          std::move(values));

  const json& terms_doc = require(doc, "terms", "the model document");
  if (!terms_doc.is_array()) fail(errc::invalid_input, "model: terms must be an array");
  std::vector<Term> terms;
  for (size_t i = 0; i < terms_doc.size(); ++i) terms.push_back(parse_term(terms_doc[i], i));

  Model model{Potential(alphabet, std::move(terms)), {}};
  if (doc.contains("channels")) {
    const json& chans = doc["channels"];
    if (!chans.is_object()) fail(errc::invalid_input, "model: channels must be an object");
    for (const auto& [name, c] : chans.items())
      model.channels.emplace(name, parse_channel(c, alphabet, name));
  }
  return model;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::invalid_input, "model not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

const Channel& select_channel(const Model& model, const std::string& name) {
  auto it = model.channels.find(name);
  if (it == model.channels.end()) {
    std::string known;
    for (const auto& [n, c] : model.channels) known += (known.empty() ? "" : ", ") + n;
    fail(errc::invalid_input,
         "model: no channel named '" + name + "' (available: " + (known.empty() ? "none" : known) + ")");
  }
  return it->second;
}

}  // namespace gibbs1d
