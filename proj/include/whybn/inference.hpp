#pragma once

#include <atomic>
#include <cstddef>
#include <span>
#include <vector>

#include "whybn/factor.hpp"
#include "whybn/network.hpp"

namespace whybn {

struct QueryResult {
  Factor distribution;          // over the requested targets, normalized
  double evidence_probability;  // probability of the conditioning event
};

/// Source of the one primitive every measure is built from: the distribution
/// of `targets` given observations, evaluated in the network after applying
/// the interventions `do_set`. Intervention is applied first, then
/// observational conditioning. Implementations throw ImpossibleConditioning
/// when the observations have probability zero.
class QueryEngine {
 public:
  virtual ~QueryEngine() = default;
  virtual QueryResult query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                            const Assignment& do_set) const = 0;
};

/// Exact inference by variable elimination (min-degree order, ties by
/// declaration order). Stateless.
class EliminationEngine final : public QueryEngine {
 public:
  QueryResult query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                    const Assignment& do_set) const override;
};

/// Forwards to another engine and counts calls. Thread-safe.
class CountingEngine final : public QueryEngine {
 public:
  explicit CountingEngine(const QueryEngine& inner) : inner_(inner) {}
  QueryResult query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                    const Assignment& do_set) const override;
  std::size_t calls() const { return calls_.load(); }
  void reset() { calls_ = 0; }

 private:
  const QueryEngine& inner_;
  mutable std::atomic<std::size_t> calls_{0};
};

const QueryEngine& default_engine();

/// Greedy min-degree elimination order over `vars` for the interaction graph
/// of `factors`; ties go to the lower VarId.
std::vector<VarId> min_degree_order(std::span<const Factor> factors, std::vector<VarId> vars);

/// Chain-rule product over a full assignment. Throws BindingError if a variable is unbound.
double joint_probability(const Network& net, const Assignment& full);

/// p(event | given). Overlapping bindings are allowed: a conflicting overlap
/// gives 0, an agreeing one is dropped from the event.
double event_probability(const Network& net, const Assignment& event, const Assignment& given = {},
                         const QueryEngine& engine = default_engine());

struct MpeResult {
  Assignment assignment;  // every unobserved variable
  double probability;     // p(assignment | evidence)
};

/// Most probable completion of `evidence` by max-product elimination.
/// Ties resolve to the lowest state index during traceback.
MpeResult mpe(const Network& net, const Assignment& evidence);

/// I(X; Y | context) in bits.
double conditional_mutual_information(const Network& net, VarId x, VarId y, const Assignment& context,
                                      const QueryEngine& engine = default_engine());

}  // namespace whybn
