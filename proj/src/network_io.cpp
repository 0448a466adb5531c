#include "whybn/network_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "whybn/errors.hpp"

namespace whybn {

using json = nlohmann::ordered_json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing key \"" + key + "\"");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace

Network parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "syntax error at byte " << e.byte << ": " << e.what();
    throw ParseError(msg.str());
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");

  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) name = as_string(*it, "name");

  const json& vars = require(doc, "variables", "network");
  if (!vars.is_array()) throw ParseError("variables: expected an array");
  std::vector<Variable> variables;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string where = "variables[" + std::to_string(i) + "]";
    const json& v = vars[i];
    if (!v.is_object()) throw ParseError(where + ": expected an object");
    Variable var;
    var.name = as_string(require(v, "name", where), where + ".name");
    const json& states = require(v, "states", where);
    if (!states.is_array()) throw ParseError(where + ".states: expected an array");
    for (std::size_t s = 0; s < states.size(); ++s)
      var.states.push_back(as_string(states[s], where + ".states[" + std::to_string(s) + "]"));
    variables.push_back(std::move(var));
  }

  auto lookup = [&](const std::string& var_name, const std::string& where) -> VarId {
    for (VarId v = 0; v < variables.size(); ++v)
      if (variables[v].name == var_name) return v;
    throw ValidationError(where + ": unknown variable '" + var_name + "'");
  };

  const json& cpt_obj = require(doc, "cpts", "network");
  if (!cpt_obj.is_object()) throw ParseError("cpts: expected an object keyed by variable name");
  std::vector<Cpt> cpts;
  for (const auto& [child_name, entry] : cpt_obj.items()) {
    const std::string where = "cpts." + child_name;
    Cpt cpt;
    cpt.child = lookup(child_name, where);
    if (!entry.is_object()) throw ParseError(where + ": expected an object");
    if (auto it = entry.find("parents"); it != entry.end()) {
      if (!it->is_array()) throw ParseError(where + ".parents: expected an array");
      for (const auto& p : *it) cpt.parents.push_back(lookup(as_string(p, where + ".parents"), where + ".parents"));
    }
    const json& table = require(entry, "table", where);
    if (!table.is_array()) throw ParseError(where + ".table: expected an array of rows");
    const std::size_t card = variables[cpt.child].states.size();
    for (std::size_t r = 0; r < table.size(); ++r) {
      const std::string row_where = where + ".table[" + std::to_string(r) + "]";
      if (!table[r].is_array()) throw ParseError(row_where + ": expected an array");
      if (table[r].size() != card) {
        std::ostringstream msg;
        msg << row_where << ": has " << table[r].size() << " columns, expected " << card;
        throw ValidationError(msg.str());
      }
      for (const auto& p : table[r]) cpt.table.push_back(as_number(p, row_where));
    }
    cpts.push_back(std::move(cpt));
  }
  return Network(std::move(name), std::move(variables), std::move(cpts));
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

std::string serialize_network(const Network& net) {
  json doc;
  doc["name"] = net.name();
  doc["variables"] = json::array();
  for (const auto& v : net.variables()) doc["variables"].push_back({{"name", v.name}, {"states", v.states}});
  json cpts = json::object();
  for (VarId v = 0; v < net.size(); ++v) {
    const Cpt& cpt = net.cpt(v);
    json parents = json::array();
    for (VarId p : cpt.parents) parents.push_back(net.variable(p).name);
    const std::size_t card = net.cardinality(v);
    json rows = json::array();
    for (std::size_t r = 0; r < cpt.row_count(card); ++r)
      rows.push_back(std::vector<double>(cpt.table.begin() + r * card, cpt.table.begin() + (r + 1) * card));
    cpts[net.variable(v).name] = {{"parents", parents}, {"table", rows}};
  }
  doc["cpts"] = cpts;
  return doc.dump(2) + "\n";
}

}  // namespace whybn
