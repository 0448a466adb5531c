#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace whybn {

/// Variables and states are addressed by position: a variable by its index in
/// declaration order, a state by its index in the variable's state list.
using VarId = std::size_t;
using StateId = std::size_t;

struct Variable {
  std::string name;
  std::vector<std::string> states;

  std::size_t cardinality() const { return states.size(); }
  std::optional<StateId> find_state(std::string_view label) const;
};

/// Conditional table p(child | parents). Rows enumerate parent configurations
/// in mixed radix with the last parent varying fastest; columns are the
/// child's states.
struct Cpt {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<double> table;  // row-major, rows x child cardinality

  std::size_t row_count(std::size_t child_card) const {
    return child_card == 0 ? 0 : table.size() / child_card;
  }
};

/// Partial mapping variable -> state, kept ordered by variable index.
class Assignment {
 public:
  using Map = std::map<VarId, StateId>;
  using const_iterator = Map::const_iterator;

  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const VarId, StateId>> init) : bindings_(init) {}

  void set(VarId var, StateId state) { bindings_[var] = state; }
  void erase(VarId var) { bindings_.erase(var); }
  bool contains(VarId var) const { return bindings_.count(var) != 0; }
  std::optional<StateId> get(VarId var) const;
  StateId at(VarId var) const { return bindings_.at(var); }

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const_iterator begin() const { return bindings_.begin(); }
  const_iterator end() const { return bindings_.end(); }

  std::vector<VarId> variables() const;

  /// True when no variable is bound in both.
  bool disjoint(const Assignment& other) const;
  /// True when every variable bound in both has the same state.
  bool compatible(const Assignment& other) const;
  /// Union; `other` wins on shared variables.
  Assignment merged(const Assignment& other) const;
  /// Copy without any of the listed variables.
  Assignment without(std::span<const VarId> vars) const;
  Assignment without(const Assignment& other) const { return without(other.variables()); }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment& a, const Assignment& b) { return a.bindings_ <=> b.bindings_; }

 private:
  Map bindings_;
};

/// Immutable discrete Bayesian network. Construction validates every
/// structural and numerical invariant; a Network object is always valid.
class Network {
 public:
  static constexpr double kRowSumTolerance = 1e-9;

  /// Throws ValidationError on any violated invariant. `cpts` may be given
  /// in any order but must cover each variable exactly once.
  Network(std::string name, std::vector<Variable> variables, std::vector<Cpt> cpts);

  const std::string& name() const { return name_; }
  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId v) const { return variables_.at(v); }
  std::size_t cardinality(VarId v) const { return variables_.at(v).cardinality(); }

  std::optional<VarId> find(std::string_view name) const;
  /// Throws BindingError for unknown names.
  VarId id(std::string_view name) const;

  const Cpt& cpt(VarId v) const { return cpts_.at(v); }
  const std::vector<VarId>& parents(VarId v) const { return cpts_.at(v).parents; }
  const std::vector<VarId>& children(VarId v) const { return children_.at(v); }
  std::vector<std::pair<VarId, VarId>> edges() const;

  /// p(child = state | parents = parent_states), parent_states in CPT parent order.
  double probability(VarId child, StateId state, std::span<const StateId> parent_states) const;
  /// Same, reading the parent states out of a full assignment indexed by VarId.
  double probability_in(VarId child, std::span<const StateId> full_states) const;

  /// Parents before children; ties broken by declaration order.
  const std::vector<VarId>& topological_order() const { return topo_; }

  /// Product of all cardinalities (saturates at SIZE_MAX).
  std::size_t state_space_size() const;

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;  // indexed by child
  std::vector<std::vector<VarId>> children_;
  std::vector<VarId> topo_;
};

/// Directed path source -> ... -> target whose interior avoids `blocked`.
bool reachable(const Network& net, VarId source, VarId target, std::span<const VarId> blocked = {});
/// Directed path from source to any of `targets` avoiding `blocked` in its interior.
bool reachable_any(const Network& net, VarId source, std::span<const VarId> targets,
                   std::span<const VarId> blocked = {});

// Binding text "Var=state[,Var=state...]"; tokens may also be passed one per element.
Assignment parse_bindings(const Network& net, std::string_view text);
Assignment parse_bindings(const Network& net, std::span<const std::string> tokens);
std::vector<VarId> parse_variable_list(const Network& net, std::string_view text);
std::string format_assignment(const Network& net, const Assignment& a, std::string_view sep = ", ");

}  // namespace whybn
