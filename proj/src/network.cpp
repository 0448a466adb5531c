#include "whybn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "whybn/errors.hpp"

namespace whybn {

std::optional<StateId> Variable::find_state(std::string_view label) const {
  for (StateId s = 0; s < states.size(); ++s)
    if (states[s] == label) return s;
  return std::nullopt;
}

std::optional<StateId> Assignment::get(VarId var) const {
  auto it = bindings_.find(var);
  if (it == bindings_.end()) return std::nullopt;
  return it->second;
}

std::vector<VarId> Assignment::variables() const {
  std::vector<VarId> out;
  out.reserve(bindings_.size());
  for (const auto& [v, s] : bindings_) out.push_back(v);
  return out;
}

bool Assignment::disjoint(const Assignment& other) const {
  for (const auto& [v, s] : bindings_)
    if (other.contains(v)) return false;
  return true;
}

bool Assignment::compatible(const Assignment& other) const {
  for (const auto& [v, s] : bindings_) {
    auto o = other.get(v);
    if (o && *o != s) return false;
  }
  return true;
}

Assignment Assignment::merged(const Assignment& other) const {
  Assignment out = *this;
  for (const auto& [v, s] : other.bindings_) out.bindings_[v] = s;
  return out;
}

Assignment Assignment::without(std::span<const VarId> vars) const {
  Assignment out = *this;
  for (VarId v : vars) out.bindings_.erase(v);
  return out;
}

namespace {

void check_variables(const std::vector<Variable>& variables) {
  std::set<std::string> names;
  for (const auto& var : variables) {
    if (var.name.empty()) throw ValidationError("variable with empty name");
    if (!names.insert(var.name).second) throw ValidationError("duplicate variable '" + var.name + "'");
    if (var.states.size() < 2)
      throw ValidationError("variable '" + var.name + "' needs at least two states");
    std::set<std::string> labels;
    for (const auto& s : var.states) {
      if (s.empty()) throw ValidationError("variable '" + var.name + "' has an empty state label");
      if (!labels.insert(s).second)
        throw ValidationError("variable '" + var.name + "' repeats state '" + s + "'");
    }
  }
}

}  // namespace

Network::Network(std::string name, std::vector<Variable> variables, std::vector<Cpt> cpts)
    : name_(std::move(name)), variables_(std::move(variables)) {
  check_variables(variables_);
  const std::size_t n = variables_.size();

  std::vector<bool> seen(n, false);
  cpts_.resize(n);
  for (auto& cpt : cpts) {
    if (cpt.child >= n) throw ValidationError("CPT for unknown variable index");
    const auto& child = variables_[cpt.child];
    if (seen[cpt.child]) throw ValidationError("duplicate CPT for '" + child.name + "'");
    seen[cpt.child] = true;

    std::set<VarId> distinct;
    std::size_t rows = 1;
    for (VarId p : cpt.parents) {
      if (p >= n) throw ValidationError("CPT of '" + child.name + "' names an unknown parent");
      if (p == cpt.child) throw ValidationError("'" + child.name + "' lists itself as a parent");
      if (!distinct.insert(p).second)
        throw ValidationError("CPT of '" + child.name + "' repeats parent '" + variables_[p].name + "'");
      rows *= variables_[p].cardinality();
    }
    const std::size_t card = child.cardinality();
    if (cpt.table.size() != rows * card) {
      std::ostringstream msg;
      msg << "CPT of '" << child.name << "' has " << cpt.table.size() << " entries, expected " << rows
          << " rows x " << card << " states";
      throw ValidationError(msg.str());
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < card; ++c) {
        double p = cpt.table[r * card + c];
        if (!(p >= 0.0 && p <= 1.0)) {
          std::ostringstream msg;
          msg << "CPT of '" << child.name << "' row " << r << " has entry " << p << " outside [0,1]";
          throw ValidationError(msg.str());
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "CPT of '" << child.name << "' row " << r << " sums to " << sum << ", not 1";
        throw ValidationError(msg.str());
      }
    }
    cpts_[cpt.child] = std::move(cpt);
  }
  for (VarId v = 0; v < n; ++v)
    if (!seen[v]) throw ValidationError("missing CPT for '" + variables_[v].name + "'");

  children_.assign(n, {});
  for (VarId v = 0; v < n; ++v)
    for (VarId p : cpts_[v].parents) children_[p].push_back(v);

  // Kahn's algorithm; the min-heap on VarId gives declaration-order tie-breaking.
  std::vector<std::size_t> indegree(n);
  for (VarId v = 0; v < n; ++v) indegree[v] = cpts_[v].parents.size();
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (VarId v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  while (!ready.empty()) {
    VarId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (VarId c : children_[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (topo_.size() != n) {
    std::string members;
    for (VarId v = 0; v < n; ++v)
      if (indegree[v] > 0) members += (members.empty() ? "" : ", ") + variables_[v].name;
    throw ValidationError("cycle detected among: " + members);
  }
}

std::optional<VarId> Network::find(std::string_view name) const {
  for (VarId v = 0; v < variables_.size(); ++v)
    if (variables_[v].name == name) return v;
  return std::nullopt;
}

VarId Network::id(std::string_view name) const {
  auto v = find(name);
  if (!v) throw BindingError("unknown variable '" + std::string(name) + "'");
  return *v;
}

std::vector<std::pair<VarId, VarId>> Network::edges() const {
  std::vector<std::pair<VarId, VarId>> out;
  for (VarId v = 0; v < cpts_.size(); ++v)
    for (VarId p : cpts_[v].parents) out.emplace_back(p, v);
  std::sort(out.begin(), out.end());
  return out;
}

double Network::probability(VarId child, StateId state, std::span<const StateId> parent_states) const {
  const Cpt& cpt = cpts_.at(child);
  std::size_t row = 0;
  for (std::size_t i = 0; i < cpt.parents.size(); ++i)
    row = row * variables_[cpt.parents[i]].cardinality() + parent_states[i];
  return cpt.table[row * variables_[child].cardinality() + state];
}

double Network::probability_in(VarId child, std::span<const StateId> full_states) const {
  const Cpt& cpt = cpts_.at(child);
  std::size_t row = 0;
  for (VarId p : cpt.parents) row = row * variables_[p].cardinality() + full_states[p];
  return cpt.table[row * variables_[child].cardinality() + full_states[child]];
}

std::size_t Network::state_space_size() const {
  std::size_t total = 1;
  for (const auto& v : variables_) {
    if (total > std::numeric_limits<std::size_t>::max() / v.cardinality())
      return std::numeric_limits<std::size_t>::max();
    total *= v.cardinality();
  }
  return total;
}

bool reachable_any(const Network& net, VarId source, std::span<const VarId> targets,
                   std::span<const VarId> blocked) {
  std::vector<bool> is_target(net.size(), false), is_blocked(net.size(), false);
  for (VarId t : targets) is_target[t] = true;
  for (VarId b : blocked) is_blocked[b] = true;

  std::vector<bool> visited(net.size(), false);
  std::vector<VarId> stack{source};
  visited[source] = true;
  while (!stack.empty()) {
    VarId v = stack.back();
    stack.pop_back();
    for (VarId c : net.children(v)) {
      if (is_target[c]) return true;
      if (visited[c] || is_blocked[c]) continue;
      visited[c] = true;
      stack.push_back(c);
    }
  }
  return false;
}

bool reachable(const Network& net, VarId source, VarId target, std::span<const VarId> blocked) {
  return reachable_any(net, source, std::span<const VarId>(&target, 1), blocked);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = text.find(',');
    auto piece = trim(text.substr(0, pos));
    if (!piece.empty()) out.push_back(piece);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

void bind_token(const Network& net, std::string_view token, Assignment& out) {
  auto eq = token.find('=');
  if (eq == std::string_view::npos)
    throw BindingError("binding '" + std::string(token) + "' is not of the form Var=state");
  auto name = trim(token.substr(0, eq));
  auto label = trim(token.substr(eq + 1));
  VarId v = net.id(name);
  auto s = net.variable(v).find_state(label);
  if (!s)
    throw BindingError("variable '" + std::string(name) + "' has no state '" + std::string(label) + "'");
  if (auto prev = out.get(v); prev && *prev != *s)
    throw BindingError("conflicting states given for '" + std::string(name) + "'");
  out.set(v, *s);
}

}  // namespace

Assignment parse_bindings(const Network& net, std::string_view text) {
  Assignment out;
  for (auto token : split_commas(text)) bind_token(net, token, out);
  return out;
}

Assignment parse_bindings(const Network& net, std::span<const std::string> tokens) {
  Assignment out;
  for (const auto& t : tokens)
    for (auto token : split_commas(t)) bind_token(net, token, out);
  return out;
}

std::vector<VarId> parse_variable_list(const Network& net, std::string_view text) {
  std::vector<VarId> out;
  for (auto name : split_commas(text)) {
    VarId v = net.id(name);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

std::string format_assignment(const Network& net, const Assignment& a, std::string_view sep) {
  std::string out;
  for (const auto& [v, s] : a) {
    if (!out.empty()) out += sep;
    out += net.variable(v).name + "=" + net.variable(v).states[s];
  }
  return out;
}

}  // namespace whybn
