#include "whybn/oracle.hpp"

#include <cmath>
#include <sstream>

#include "whybn/errors.hpp"

namespace whybn::oracle {

namespace {

bool matches(std::span<const StateId> states, const Assignment& a) {
  for (const auto& [v, s] : a)
    if (states[v] != s) return false;
  return true;
}

}  // namespace

JointTable enumerate_joint(const Network& net, const InterventionSet& do_set, std::size_t cap) {
  if (net.state_space_size() > cap) {
    std::ostringstream msg;
    msg << "joint state space of " << net.state_space_size() << " exceeds the enumeration cap of " << cap;
    throw StateSpaceTooLarge(msg.str());
  }
  JointTable table;
  table.scope = net.topological_order();
  table.variable_count = net.size();
  std::size_t total = 1;
  for (VarId v : table.scope) {
    table.cards.push_back(net.cardinality(v));
    total *= net.cardinality(v);
  }
  table.values.assign(total, 0.0);

  std::vector<StateId> states(net.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (std::size_t i = table.scope.size(); i-- > 0;) {
      states[table.scope[i]] = rest % table.cards[i];
      rest /= table.cards[i];
    }
    double p = 1.0;
    for (VarId v = 0; v < net.size() && p > 0.0; ++v) {
      if (auto forced = do_set.get(v))
        p *= states[v] == *forced ? 1.0 : 0.0;
      else
        p *= net.probability_in(v, states);
    }
    table.values[k] = p;
  }
  return table;
}

double oracle_query(const JointTable& table, const Assignment& event, const Assignment& given) {
  double joint = 0.0, marginal = 0.0;
  table.for_each([&](std::span<const StateId> states, double p) {
    if (!matches(states, given)) return;
    marginal += p;
    if (matches(states, event)) joint += p;
  });
  if (!(marginal > 0.0)) throw ImpossibleConditioning("conditioning event has probability zero");
  return joint / marginal;
}

double cmi(const Network& net, VarId x, VarId y, const Assignment& context) {
  const JointTable table = enumerate_joint(net);
  const double pz = [&] {
    double z = 0.0;
    table.for_each([&](std::span<const StateId> s, double p) { z += matches(s, context) ? p : 0.0; });
    return z;
  }();
  if (!(pz > 0.0)) throw ImpossibleConditioning("context has probability zero");

  double info = 0.0;
  for (StateId a = 0; a < net.cardinality(x); ++a) {
    Assignment with_x = context;
    with_x.set(x, a);
    const double px = oracle_query(table, Assignment{{x, a}}, context);
    if (px <= 0.0) continue;
    double inner = 0.0;
    for (StateId b = 0; b < net.cardinality(y); ++b) {
      const double py_x = oracle_query(table, Assignment{{y, b}}, with_x);
      const double py = oracle_query(table, Assignment{{y, b}}, context);
      if (py_x > 0.0) inner += py_x * std::log2(py_x / py);
    }
    info += px * inner;
  }
  return info;
}

double information_flow(const Network& net, VarId x, VarId y, const Assignment& observed,
                        const InterventionSet& do_set) {
  const JointTable base = enumerate_joint(net, do_set);
  const std::size_t cx = net.cardinality(x), cy = net.cardinality(y);
  std::vector<double> px(cx);
  std::vector<std::vector<double>> py_x(cx, std::vector<double>(cy, 0.0));
  for (StateId a = 0; a < cx; ++a) {
    px[a] = oracle_query(base, Assignment{{x, a}}, observed);
    if (px[a] <= 0.0) continue;
    InterventionSet forced = do_set;
    forced.set(x, a);
    const JointTable cut = enumerate_joint(net, forced);
    for (StateId b = 0; b < cy; ++b) py_x[a][b] = oracle_query(cut, Assignment{{y, b}}, observed);
  }
  double flow = 0.0;
  for (StateId a = 0; a < cx; ++a) {
    if (px[a] <= 0.0) continue;
    for (StateId b = 0; b < cy; ++b) {
      double pstar = 0.0;
      for (StateId a2 = 0; a2 < cx; ++a2) pstar += px[a2] * py_x[a2][b];
      if (py_x[a][b] > 0.0) flow += px[a] * py_x[a][b] * std::log2(py_x[a][b] / pstar);
    }
  }
  return flow;
}

double flow_to_state(const Network& net, VarId x, const Assignment& e, const Assignment& observed,
                     const InterventionSet& do_set) {
  const JointTable base = enumerate_joint(net, do_set);
  const double prior = oracle_query(base, e, observed);
  if (!(prior > 0.0)) throw ImpossibleConditioning("explanandum has probability zero under the conditioning");
  const std::size_t cx = net.cardinality(x);
  std::vector<double> px(cx), pe(cx, 0.0);
  double mixture = 0.0;
  for (StateId a = 0; a < cx; ++a) {
    px[a] = oracle_query(base, Assignment{{x, a}}, observed);
    if (px[a] <= 0.0) continue;
    InterventionSet forced = do_set;
    forced.set(x, a);
    pe[a] = oracle_query(enumerate_joint(net, forced), e, observed);
    mixture += px[a] * pe[a];
  }
  double flow = 0.0;
  for (StateId a = 0; a < cx; ++a)
    if (px[a] > 0.0 && pe[a] > 0.0) flow += px[a] * pe[a] / prior * std::log2(pe[a] / mixture);
  return flow;
}

double pointwise_flow(const Network& net, VarId x, StateId x_state, const Assignment& e,
                      const Assignment& observed_rest, const InterventionSet& do_set) {
  const JointTable base = enumerate_joint(net, do_set);
  double mixture = 0.0, target = 0.0;
  for (StateId a = 0; a < net.cardinality(x); ++a) {
    InterventionSet forced = do_set;
    forced.set(x, a);
    const double px = oracle_query(base, Assignment{{x, a}}, observed_rest);
    if (a == x_state) target = oracle_query(enumerate_joint(net, forced), e, observed_rest);
    if (px > 0.0) mixture += px * oracle_query(enumerate_joint(net, forced), e, observed_rest);
  }
  if (!(mixture > 0.0)) throw ImpossibleConditioning("explanandum has probability zero under the conditioning");
  return std::log2(target / mixture);
}

MpeResult mpe(const Network& net, const Assignment& evidence) {
  const JointTable table = enumerate_joint(net);
  double best = -1.0, marginal = 0.0;
  std::vector<StateId> best_states;
  table.for_each([&](std::span<const StateId> states, double p) {
    if (!matches(states, evidence)) return;
    marginal += p;
    const bool better = p > best || (p == best && std::vector<StateId>(states.begin(), states.end()) < best_states);
    if (better) {
      best = p;
      best_states.assign(states.begin(), states.end());
    }
  });
  if (!(marginal > 0.0)) throw ImpossibleConditioning("evidence has probability zero");
  Assignment completion;
  for (VarId v = 0; v < net.size(); ++v)
    if (!evidence.contains(v)) completion.set(v, best_states[v]);
  return {completion, best / marginal};
}

std::shared_ptr<const JointTable> EnumerationEngine::joint_for(const Network& net, const Assignment& do_set) const {
  if (&net != &net_) return std::make_shared<const JointTable>(enumerate_joint(net, do_set, cap_));
  std::lock_guard lock(mutex_);
  auto& slot = cache_[do_set];
  if (!slot) slot = std::make_shared<const JointTable>(enumerate_joint(net, do_set, cap_));
  return slot;
}

QueryResult EnumerationEngine::query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                                     const Assignment& do_set) const {
  const auto table = joint_for(net, do_set);
  std::vector<std::size_t> cards;
  for (VarId t : targets) cards.push_back(net.cardinality(t));
  std::size_t size = 1;
  for (auto c : cards) size *= c;
  std::vector<double> mass(size, 0.0);
  double z = 0.0;
  table->for_each([&](std::span<const StateId> states, double p) {
    if (!matches(states, observed)) return;
    z += p;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) idx = idx * cards[i] + states[targets[i]];
    mass[idx] += p;
  });
  if (!(z > 0.0)) throw ImpossibleConditioning("conditioning event has probability zero");
  for (double& m : mass) m /= z;
  return {Factor(std::vector<VarId>(targets.begin(), targets.end()), std::move(cards), std::move(mass)), z};
}

QueryResult CrossCheckEngine::query(const Network& net, std::span<const VarId> targets, const Assignment& observed,
                                    const Assignment& do_set) const {
  QueryResult got;
  bool got_impossible = false, want_impossible = false;
  try {
    got = primary_.query(net, targets, observed, do_set);
  } catch (const ImpossibleConditioning&) {
    got_impossible = true;
  }
  QueryResult want;
  try {
    want = reference_.query(net, targets, observed, do_set);
  } catch (const ImpossibleConditioning&) {
    want_impossible = true;
  }
  {
    std::lock_guard lock(mutex_);
    ++checks_;
  }
  if (got_impossible != want_impossible)
    throw OracleDivergence("engine and oracle disagree on whether the conditioning event is possible");
  if (got_impossible) throw ImpossibleConditioning("conditioning event has probability zero");

  double worst = std::abs(got.evidence_probability - want.evidence_probability);
  const auto& a = got.distribution.values();
  const auto& b = want.distribution.values();
  if (a.size() != b.size()) throw OracleDivergence("engine and oracle returned tables of different shape");
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  if (worst > tolerance_) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "engine and oracle differ by " << std::scientific << worst << " (tolerance " << tolerance_ << ")";
    throw OracleDivergence(msg.str());
  }
  return got;
}

std::size_t CrossCheckEngine::checks() const {
  std::lock_guard lock(mutex_);
  return checks_;
}

}  // namespace whybn::oracle
