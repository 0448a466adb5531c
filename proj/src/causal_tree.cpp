#include <algorithm>
#include <cmath>

#include "whybn/causal.hpp"
#include "whybn/errors.hpp"
#include "whybn/explainers.hpp"

namespace whybn {

namespace {

class CausalTreeBuilder {
 public:
  CausalTreeBuilder(const Network& net, const Assignment& observed, const Assignment& e, const ExplainerConfig& config,
                    const QueryEngine& engine, ExplainStats* stats)
      : net_(net), observed_(observed), e_(e), e_vars_(e.variables()), config_(config), counter_(engine), stats_(stats) {
    prior_ = interventional_probability(net_, e_, observed_, {}, counter_);
    if (!(prior_ > 0.0)) throw ImpossibleConditioning("explanandum has probability zero given the observations");
  }

  ExplanationTree build(std::vector<VarId> candidates, const InterventionSet& path) {
    const std::size_t calls_before = counter_.calls();
    // Variables already forced on this path are no longer observations.
    const Assignment obs = observed_.without(path);

    std::vector<VarId> blocked = obs.variables();
    for (const auto& [v, s] : path) blocked.push_back(v);

    std::optional<VarId> best;
    double best_flow = 0.0;
    for (VarId x : candidates) {
      if (config_.prune_unreachable) {
        std::vector<VarId> others;
        for (VarId b : blocked)
          if (b != x) others.push_back(b);
        if (!reachable_any(net_, x, e_vars_, others)) continue;
      }
      double flow;
      try {
        if (auto known = obs.get(x))
          flow = pointwise_flow(net_, x, *known, e_, obs.without(std::vector<VarId>{x}), path, counter_);
        else
          flow = flow_to_state(net_, x, e_, obs, path, counter_);
      } catch (const ImpossibleConditioning&) {
        continue;
      }
      if (std::isnan(flow)) continue;
      if (!best || flow > best_flow) {
        best = x;
        best_flow = flow;
      }
    }

    ExplanationTree node;
    if (!best || best_flow < config_.alpha) {
      record(candidates.size(), calls_before);
      return node;
    }
    node.variable = *best;
    node.score = best_flow;

    std::vector<StateId> states;
    const auto known = obs.get(*best);
    if (known) {
      states.push_back(*known);
    } else {
      for (StateId s = 0; s < net_.cardinality(*best); ++s) states.push_back(s);
    }

    InterventionSet child_path = path;
    for (StateId s : states) {
      Branch br;
      br.state = s;
      br.kind = known ? BranchKind::observed : BranchKind::expanded;
      child_path.set(*best, s);
      try {
        const double p = interventional_probability(net_, e_, observed_.without(child_path), child_path, counter_);
        br.label = std::log2(p / prior_);
      } catch (const ImpossibleConditioning&) {
        br.kind = BranchKind::pruned;
        br.label = 0.0;
      }
      node.branches.push_back(std::move(br));
    }
    record(candidates.size(), calls_before);

    std::vector<VarId> rest;
    for (VarId c : candidates)
      if (c != *best) rest.push_back(c);
    for (auto& br : node.branches) {
      if (br.kind == BranchKind::pruned) continue;
      child_path.set(*best, br.state);
      br.subtree = build(rest, child_path);
    }
    return node;
  }

 private:
  void record(std::size_t candidates, std::size_t calls_before) {
    if (stats_) stats_->nodes.push_back({candidates, counter_.calls() - calls_before});
  }

  const Network& net_;
  const Assignment& observed_;
  const Assignment& e_;
  std::vector<VarId> e_vars_;
  const ExplainerConfig& config_;
  CountingEngine counter_;
  ExplainStats* stats_;
  double prior_ = 0.0;
};

}  // namespace

ExplanationTree causal_explanation_tree(const Network& net, std::span<const VarId> hypothesis,
                                        const Assignment& observed, const Assignment& e,
                                        const ExplainerConfig& config, const QueryEngine& engine,
                                        ExplainStats* stats) {
  if (e.empty()) throw BindingError("explanandum is empty");
  if (!e.disjoint(observed)) throw BindingError("explanandum and observations bind the same variable");
  std::vector<VarId> candidates;
  for (VarId h : hypothesis) {
    if (h >= net.size()) throw BindingError("hypothesis refers to an unknown variable");
    if (e.contains(h)) throw BindingError("'" + net.variable(h).name + "' is both explanandum and hypothesis");
    if (std::find(candidates.begin(), candidates.end(), h) == candidates.end()) candidates.push_back(h);
  }
  std::sort(candidates.begin(), candidates.end());

  CausalTreeBuilder builder(net, observed, e, config, engine, stats);
  return builder.build(std::move(candidates), {});
}

}  // namespace whybn
