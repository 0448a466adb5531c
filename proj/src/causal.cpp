#include "whybn/causal.hpp"

#include <cmath>

#include "whybn/errors.hpp"

namespace whybn {

namespace {

void require_free(const Network& net, VarId x, const Assignment& a, const char* role) {
  if (a.contains(x))
    throw BindingError("'" + net.variable(x).name + "' must not be bound in the " + role);
}

// p(X | o, p^) together with p(e | o, x^, p^) for every x with positive weight.
// Terms with zero weight are dropped: their interventional conditional may be
// undefined, and p(x, o | p^) > 0 guarantees p(o | x^, p^) > 0 for the rest.
struct InterventionTerms {
  std::vector<double> weight;      // p(x | o, p^)
  std::vector<double> likelihood;  // p(e | o, x^, p^), 0 where weight is 0
  double mixture = 0.0;            // sum_x weight * likelihood
};

InterventionTerms intervention_terms(const Network& net, VarId x, const Assignment& e, const Assignment& observed,
                                     const InterventionSet& do_set, const QueryEngine& engine) {
  const VarId xs[] = {x};
  const Factor px = engine.query(net, xs, observed, do_set).distribution;
  const auto targets = e.variables();

  InterventionTerms t;
  t.weight = px.values();
  t.likelihood.assign(t.weight.size(), 0.0);
  for (StateId s = 0; s < t.weight.size(); ++s) {
    if (t.weight[s] <= 0.0) continue;
    InterventionSet forced = do_set;
    forced.set(x, s);
    t.likelihood[s] = engine.query(net, targets, observed, forced).distribution.at(e);
    t.mixture += t.weight[s] * t.likelihood[s];
  }
  return t;
}

}  // namespace

Network mutilate(const Network& net, const InterventionSet& do_set) {
  for (const auto& [v, s] : do_set) {
    if (v >= net.size()) throw BindingError("intervention on an unknown variable");
    if (s >= net.cardinality(v)) throw BindingError("intervention state outside the domain of '" + net.variable(v).name + "'");
  }
  std::vector<Cpt> cpts;
  for (VarId v = 0; v < net.size(); ++v) {
    if (auto s = do_set.get(v)) {
      Cpt point{v, {}, std::vector<double>(net.cardinality(v), 0.0)};
      point.table[*s] = 1.0;
      cpts.push_back(std::move(point));
    } else {
      cpts.push_back(net.cpt(v));
    }
  }
  return Network(net.name(), net.variables(), std::move(cpts));
}

double interventional_probability(const Network& net, const Assignment& event, const Assignment& observed,
                                  const InterventionSet& do_set, const QueryEngine& engine) {
  const Assignment conditioning = observed.merged(do_set);
  if (!event.compatible(conditioning)) {
    engine.query(net, {}, observed, do_set);
    return 0.0;
  }
  // Event variables that are also intervened on hold with certainty.
  const Assignment rest = event.without(do_set).without(observed);
  const auto targets = rest.variables();
  return engine.query(net, targets, observed, do_set).distribution.at(rest);
}

double information_flow(const Network& net, VarId x, VarId y, const Assignment& observed,
                        const InterventionSet& do_set, const QueryEngine& engine) {
  if (x == y) throw BindingError("information flow needs two distinct variables");
  require_free(net, x, do_set, "intervention set");
  require_free(net, y, do_set, "intervention set");
  require_free(net, x, observed, "observations");
  require_free(net, y, observed, "observations");

  const VarId xs[] = {x}, ys[] = {y};
  const std::vector<double> weight = engine.query(net, xs, observed, do_set).distribution.values();
  const std::size_t cy = net.cardinality(y);

  std::vector<std::vector<double>> conditional(weight.size());
  std::vector<double> mixture(cy, 0.0);
  for (StateId s = 0; s < weight.size(); ++s) {
    if (weight[s] <= 0.0) continue;
    InterventionSet forced = do_set;
    forced.set(x, s);
    conditional[s] = engine.query(net, ys, observed, forced).distribution.values();
    for (StateId t = 0; t < cy; ++t) mixture[t] += weight[s] * conditional[s][t];
  }

  double flow = 0.0;
  for (StateId s = 0; s < weight.size(); ++s) {
    if (weight[s] <= 0.0) continue;
    for (StateId t = 0; t < cy; ++t) {
      const double p = conditional[s][t];
      if (p > 0.0) flow += weight[s] * p * std::log2(p / mixture[t]);
    }
  }
  return flow;
}

double flow_to_state(const Network& net, VarId x, const Assignment& e, const Assignment& observed,
                     const InterventionSet& do_set, const QueryEngine& engine) {
  require_free(net, x, e, "explanandum");
  require_free(net, x, observed, "observations");
  require_free(net, x, do_set, "intervention set");
  if (e.empty()) throw BindingError("explanandum is empty");

  const double prior = interventional_probability(net, e, observed, do_set, engine);
  if (!(prior > 0.0)) throw ImpossibleConditioning("explanandum has probability zero under the conditioning");

  const InterventionTerms t = intervention_terms(net, x, e, observed, do_set, engine);
  double flow = 0.0;
  for (StateId s = 0; s < t.weight.size(); ++s) {
    const double p = t.likelihood[s];
    if (t.weight[s] > 0.0 && p > 0.0) flow += t.weight[s] * p / prior * std::log2(p / t.mixture);
  }
  return flow;
}

double pointwise_flow(const Network& net, VarId x, StateId x_state, const Assignment& e,
                      const Assignment& observed_rest, const InterventionSet& do_set, const QueryEngine& engine) {
  require_free(net, x, e, "explanandum");
  require_free(net, x, observed_rest, "remaining observations");
  require_free(net, x, do_set, "intervention set");
  if (x_state >= net.cardinality(x)) throw BindingError("state outside the domain of '" + net.variable(x).name + "'");

  const InterventionTerms t = intervention_terms(net, x, e, observed_rest, do_set, engine);
  InterventionSet forced = do_set;
  forced.set(x, x_state);
  const double p = interventional_probability(net, e, observed_rest, forced, engine);
  if (!(t.mixture > 0.0)) throw ImpossibleConditioning("explanandum has probability zero under the conditioning");
  return std::log2(p / t.mixture);
}

}  // namespace whybn
