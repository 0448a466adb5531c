#include "whybn/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "whybn/errors.hpp"

namespace whybn {

using json = nlohmann::ordered_json;

namespace {

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw ParseError("tree: expected a number");
}

const char* kind_name(BranchKind k) {
  switch (k) {
    case BranchKind::expanded: return "expanded";
    case BranchKind::observed: return "observed";
    case BranchKind::pruned: return "pruned";
  }
  return "expanded";
}

BranchKind kind_from(const std::string& s) {
  if (s == "expanded") return BranchKind::expanded;
  if (s == "observed") return BranchKind::observed;
  if (s == "pruned") return BranchKind::pruned;
  throw ParseError("tree: unknown branch kind '" + s + "'");
}

json node_to_json(const Network& net, const ExplanationTree& node) {
  json out = json::object();
  if (node.is_leaf()) return out;
  const Variable& var = net.variable(*node.variable);
  out["variable"] = var.name;
  out["score"] = number(node.score);
  out["branches"] = json::array();
  for (const auto& b : node.branches)
    out["branches"].push_back({{"state", var.states[b.state]},
                               {"label", number(b.label)},
                               {"kind", kind_name(b.kind)},
                               {"subtree", node_to_json(net, b.subtree)}});
  return out;
}

ExplanationTree node_from_json(const Network& net, const json& j) {
  if (!j.is_object()) throw ParseError("tree: node must be an object");
  ExplanationTree node;
  if (!j.contains("variable")) return node;
  const VarId v = net.id(j.at("variable").get<std::string>());
  node.variable = v;
  node.score = read_number(j.at("score"));
  for (const auto& b : j.at("branches")) {
    Branch br;
    const auto label = b.at("state").get<std::string>();
    auto s = net.variable(v).find_state(label);
    if (!s) throw ParseError("tree: unknown state '" + label + "'");
    br.state = *s;
    br.label = read_number(b.at("label"));
    br.kind = kind_from(b.at("kind").get<std::string>());
    br.subtree = node_from_json(net, b.at("subtree"));
    node.branches.push_back(std::move(br));
  }
  return node;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void dot_node(const Network& net, const ExplanationTree& node, std::size_t& next_id, std::ostringstream& os) {
  const std::size_t id = next_id++;
  if (node.is_leaf()) {
    os << "  n" << id << " [shape=point, label=\"\"];\n";
    return;
  }
  const Variable& var = net.variable(*node.variable);
  os << "  n" << id << " [label=" << quoted(var.name) << "];\n";
  for (const auto& b : node.branches) {
    const std::size_t child = next_id;
    dot_node(net, b.subtree, next_id, os);
    const std::string text = var.states[b.state] + ": " +
                             (b.kind == BranchKind::pruned ? std::string("pruned") : format_fixed4(b.label));
    os << "  n" << id << " -> n" << child << " [label=" << quoted(text) << "];\n";
  }
}

void ascii_node(const Network& net, const ExplanationTree& node, std::size_t indent, std::ostringstream& os) {
  if (node.is_leaf()) return;
  const Variable& var = net.variable(*node.variable);
  os << std::string(indent, ' ') << var.name << "  [score " << format_fixed4(node.score) << "]\n";
  for (const auto& b : node.branches) {
    os << std::string(indent + 2, ' ') << var.name << "=" << var.states[b.state];
    if (b.kind == BranchKind::pruned)
      os << "  (pruned: observations impossible)\n";
    else
      os << "  " << format_fixed4(b.label) << (b.kind == BranchKind::observed ? "  (observed)" : "") << "\n";
    ascii_node(net, b.subtree, indent + 4, os);
  }
}

const char* score_kind_name(ScoreKind k) {
  return k == ScoreKind::bayes_factor ? "bayes_factor" : "posterior_probability";
}

}  // namespace

std::string format_fixed4(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string tree_to_json(const Network& net, const ExplanationTree& tree, TreeMethod method) {
  json doc;
  doc["method"] = method == TreeMethod::causal ? "cet" : "et";
  doc["tree"] = node_to_json(net, tree);
  return doc.dump(2) + "\n";
}

ExplanationTree tree_from_json(const Network& net, std::string_view text) {
  try {
    const json doc = json::parse(text.begin(), text.end());
    return node_from_json(net, doc.at("tree"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("tree: ") + e.what());
  } catch (const BindingError& e) {
    throw ParseError(std::string("tree: ") + e.what());
  }
}

std::string tree_to_dot(const Network& net, const ExplanationTree& tree) {
  std::ostringstream os;
  os << "digraph explanation {\n";
  std::size_t next_id = 0;
  dot_node(net, tree, next_id, os);
  os << "}\n";
  return os.str();
}

std::string tree_to_ascii(const Network& net, const ExplanationTree& tree) {
  if (tree.is_leaf()) return "(empty tree)\n";
  std::ostringstream os;
  ascii_node(net, tree, 0, os);
  return os.str();
}

std::string ranked_to_json(const Network& net, const RankedExplanations& ranked) {
  json doc;
  doc["entries"] = json::array();
  for (const auto& e : ranked.entries) {
    json h = json::object();
    for (const auto& [v, s] : e.hypothesis) h[net.variable(v).name] = net.variable(v).states[s];
    doc["entries"].push_back({{"hypothesis", h}, {"score", number(e.score)}, {"kind", score_kind_name(e.kind)}});
  }
  doc["evaluated"] = ranked.evaluated;
  doc["degenerate"] = ranked.degenerate;
  return doc.dump(2) + "\n";
}

std::string ranked_to_ascii(const Network& net, const RankedExplanations& ranked) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    const auto& e = ranked.entries[i];
    const std::string h = e.hypothesis.empty() ? std::string("(nothing to explain)") : format_assignment(net, e.hypothesis, " & ");
    os << i + 1 << ". " << h << "  " << (e.kind == ScoreKind::bayes_factor ? "BF " : "p ") << format_fixed4(e.score)
       << "\n";
  }
  if (ranked.degenerate > 0) os << "(" << ranked.degenerate << " degenerate hypotheses skipped)\n";
  return os.str();
}

}  // namespace whybn
