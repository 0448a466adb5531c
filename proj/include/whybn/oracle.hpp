#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "whybn/causal.hpp"
#include "whybn/inference.hpp"
#include "whybn/network.hpp"

/// Brute-force reference computations by full-joint enumeration. Every
/// measure here is expanded directly from its defining sum and shares no
/// code path with the elimination engine.
namespace whybn::oracle {

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 20;

/// Truncated-factorization joint: every full assignment, scope in
/// topological order, last scope variable varying fastest.
struct JointTable {
  std::vector<VarId> scope;
  std::vector<std::size_t> cards;
  std::vector<double> values;
  std::size_t variable_count = 0;

  /// Calls fn(states, p) where states[v] is the state of VarId v.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::vector<StateId> states(variable_count, 0);
    for (std::size_t k = 0; k < values.size(); ++k) {
      std::size_t rest = k;
      for (std::size_t i = scope.size(); i-- > 0;) {
        states[scope[i]] = rest % cards[i];
        rest /= cards[i];
      }
      fn(std::span<const StateId>(states), values[k]);
    }
  }
};

/// Throws StateSpaceTooLarge beyond `cap` full assignments.
JointTable enumerate_joint(const Network& net, const InterventionSet& do_set = {},
                           std::size_t cap = kDefaultStateCap);

/// p(event | given) by summation. Throws ImpossibleConditioning when p(given) = 0.
double oracle_query(const JointTable& table, const Assignment& event, const Assignment& given = {});

double cmi(const Network& net, VarId x, VarId y, const Assignment& context);
double information_flow(const Network& net, VarId x, VarId y, const Assignment& observed,
                        const InterventionSet& do_set);
double flow_to_state(const Network& net, VarId x, const Assignment& e, const Assignment& observed,
                     const InterventionSet& do_set);
double pointwise_flow(const Network& net, VarId x, StateId x_state, const Assignment& e,
                      const Assignment& observed_rest, const InterventionSet& do_set);

/// Exhaustive argmax over completions; ties go to the lexicographically
/// smallest completion (declaration order, then state order).
MpeResult mpe(const Network& net, const Assignment& evidence);

/// QueryEngine answering from enumerated joints. Joints are memoized per
/// intervention set for the network given at construction.
class EnumerationEngine final : public QueryEngine {
 public:
  explicit EnumerationEngine(const Network& net, std::size_t cap = kDefaultStateCap) : net_(net), cap_(cap) {}
  QueryResult query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                    const Assignment& do_set) const override;

 private:
  std::shared_ptr<const JointTable> joint_for(const Network& net, const Assignment& do_set) const;

  const Network& net_;
  std::size_t cap_;
  mutable std::mutex mutex_;
  mutable std::map<Assignment, std::shared_ptr<const JointTable>> cache_;
};

/// Answers every query with `primary` and recomputes it with the oracle;
/// throws OracleDivergence when any probability differs by more than `tolerance`.
class CrossCheckEngine final : public QueryEngine {
 public:
  CrossCheckEngine(const QueryEngine& primary, const EnumerationEngine& reference, double tolerance = 1e-9)
      : primary_(primary), reference_(reference), tolerance_(tolerance) {}
  QueryResult query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                    const Assignment& do_set) const override;
  std::size_t checks() const;

 private:
  const QueryEngine& primary_;
  const EnumerationEngine& reference_;
  double tolerance_;
  mutable std::mutex mutex_;
  mutable std::size_t checks_ = 0;
};

}  // namespace whybn::oracle
