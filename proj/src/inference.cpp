#include "whybn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "whybn/errors.hpp"

namespace whybn {

namespace {

// Ancestral closure of `seeds` in the network with incoming edges of
// intervened variables removed. Everything outside it is barren for the query.
std::vector<bool> relevant_variables(const Network& net, const std::vector<VarId>& seeds, const Assignment& do_set) {
  std::vector<bool> keep(net.size(), false);
  std::vector<VarId> stack;
  for (VarId v : seeds)
    if (!keep[v]) {
      keep[v] = true;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    VarId v = stack.back();
    stack.pop_back();
    if (do_set.contains(v)) continue;
    for (VarId p : net.parents(v))
      if (!keep[p]) {
        keep[p] = true;
        stack.push_back(p);
      }
  }
  return keep;
}

Factor product_of(std::vector<Factor>& factors) {
  Factor acc;
  for (auto& f : factors) acc = acc * f;
  return acc;
}

void check_binding(const Network& net, const Assignment& a) {
  for (const auto& [v, s] : a) {
    if (v >= net.size()) throw BindingError("binding refers to an unknown variable");
    if (s >= net.cardinality(v))
      throw BindingError("binding gives '" + net.variable(v).name + "' a state outside its domain");
  }
}

}  // namespace

std::vector<VarId> min_degree_order(std::span<const Factor> factors, std::vector<VarId> vars) {
  std::vector<std::set<VarId>> scopes;
  for (const auto& f : factors) scopes.emplace_back(f.scope().begin(), f.scope().end());

  std::vector<VarId> order;
  std::sort(vars.begin(), vars.end());
  while (!vars.empty()) {
    std::size_t best = 0, best_degree = SIZE_MAX;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      std::set<VarId> neighbours;
      for (const auto& s : scopes)
        if (s.count(vars[i])) neighbours.insert(s.begin(), s.end());
      neighbours.erase(vars[i]);
      if (neighbours.size() < best_degree) {
        best_degree = neighbours.size();
        best = i;
      }
    }
    const VarId v = vars[best];
    order.push_back(v);
    vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(best));

    std::set<VarId> merged;
    std::vector<std::set<VarId>> rest;
    for (auto& s : scopes) {
      if (s.count(v))
        merged.insert(s.begin(), s.end());
      else
        rest.push_back(std::move(s));
    }
    merged.erase(v);
    rest.push_back(std::move(merged));
    scopes = std::move(rest);
  }
  return order;
}

QueryResult EliminationEngine::query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                                     const Assignment& do_set) const {
  check_binding(net, observed);
  check_binding(net, do_set);
  std::vector<VarId> target_list(targets.begin(), targets.end());
  for (VarId t : target_list)
    if (t >= net.size()) throw BindingError("query target refers to an unknown variable");

  std::vector<VarId> seeds = target_list;
  for (const auto& [v, s] : observed) seeds.push_back(v);
  const auto keep = relevant_variables(net, seeds, do_set);

  // Observed targets stay in scope through an indicator instead of being reduced away.
  Assignment reduce_by;
  for (const auto& [v, s] : observed)
    if (std::find(target_list.begin(), target_list.end(), v) == target_list.end()) reduce_by.set(v, s);

  std::vector<Factor> factors;
  for (VarId v = 0; v < net.size(); ++v) {
    if (!keep[v]) continue;
    Factor f = do_set.contains(v) ? Factor::indicator(v, net.cardinality(v), do_set.at(v)) : Factor::from_cpt(net, v);
    factors.push_back(f.reduce(reduce_by));
  }
  for (const auto& [v, s] : observed)
    if (!reduce_by.contains(v)) factors.push_back(Factor::indicator(v, net.cardinality(v), s));

  std::vector<VarId> hidden;
  for (VarId v = 0; v < net.size(); ++v)
    if (keep[v] && !reduce_by.contains(v) &&
        std::find(target_list.begin(), target_list.end(), v) == target_list.end())
      hidden.push_back(v);

  for (VarId v : min_degree_order(factors, hidden)) {
    std::vector<Factor> touching, rest;
    for (auto& f : factors) (f.contains(v) ? touching : rest).push_back(std::move(f));
    rest.push_back(product_of(touching).sum_out(v));
    factors = std::move(rest);
  }

  Factor joint = product_of(factors);
  // Targets outside every factor's scope cannot occur: each target is relevant
  // and so owns a CPT or indicator factor.
  joint = joint.reordered(target_list);
  const double z = joint.total();
  if (!(z > 0.0)) throw ImpossibleConditioning("conditioning event has probability zero");
  return {joint.normalized(), z};
}

QueryResult CountingEngine::query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                                  const Assignment& do_set) const {
  ++calls_;
  return inner_.query(net, targets, observed, do_set);
}

const QueryEngine& default_engine() {
  static const EliminationEngine engine;
  return engine;
}

double joint_probability(const Network& net, const Assignment& full) {
  check_binding(net, full);
  std::vector<StateId> states(net.size());
  for (VarId v = 0; v < net.size(); ++v) {
    auto s = full.get(v);
    if (!s) throw BindingError("joint probability needs a state for '" + net.variable(v).name + "'");
    states[v] = *s;
  }
  double p = 1.0;
  for (VarId v = 0; v < net.size(); ++v) p *= net.probability_in(v, states);
  return p;
}

double event_probability(const Network& net, const Assignment& event, const Assignment& given,
                         const QueryEngine& engine) {
  if (!event.compatible(given)) {
    // Still reject impossible conditioning before answering 0.
    engine.query(net, {}, given, {});
    return 0.0;
  }
  const Assignment rest = event.without(given);
  const auto targets = rest.variables();
  const QueryResult r = engine.query(net, targets, given, {});
  return r.distribution.at(rest);
}

MpeResult mpe(const Network& net, const Assignment& evidence) {
  const double p_evidence = default_engine().query(net, {}, evidence, {}).evidence_probability;

  std::vector<Factor> factors;
  for (VarId v = 0; v < net.size(); ++v) factors.push_back(Factor::from_cpt(net, v).reduce(evidence));

  std::vector<VarId> free_vars;
  for (VarId v = 0; v < net.size(); ++v)
    if (!evidence.contains(v)) free_vars.push_back(v);

  // Keep each variable's combined factor for traceback.
  std::vector<std::pair<VarId, Factor>> trace;
  for (VarId v : min_degree_order(factors, free_vars)) {
    std::vector<Factor> touching, rest;
    for (auto& f : factors) (f.contains(v) ? touching : rest).push_back(std::move(f));
    Factor combined = product_of(touching);
    rest.push_back(combined.max_out(v));
    trace.emplace_back(v, std::move(combined));
    factors = std::move(rest);
  }
  const double max_joint = product_of(factors).total();

  Assignment decoded;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    const auto& [v, combined] = *it;
    Assignment probe = decoded;
    StateId best_state = 0;
    double best = -1.0;
    for (StateId s = 0; s < net.cardinality(v); ++s) {
      probe.set(v, s);
      const double value = combined.at(probe);
      if (value > best) {
        best = value;
        best_state = s;
      }
    }
    decoded.set(v, best_state);
  }
  return {decoded, max_joint / p_evidence};
}

double conditional_mutual_information(const Network& net, VarId x, VarId y, const Assignment& context,
                                      const QueryEngine& engine) {
  if (x == y) throw BindingError("mutual information needs two distinct variables");
  const std::vector<VarId> pair{x, y};
  const Factor joint = engine.query(net, pair, context, {}).distribution;
  const Factor px = joint.sum_out(y);
  const Factor py = joint.sum_out(x);

  double info = 0.0;
  const std::size_t cy = net.cardinality(y);
  for (StateId a = 0; a < net.cardinality(x); ++a)
    for (StateId b = 0; b < cy; ++b) {
      const double pxy = joint.values()[a * cy + b];
      if (pxy > 0.0) info += pxy * std::log2(pxy / (px.values()[a] * py.values()[b]));
    }
  return info;
}

}  // namespace whybn
