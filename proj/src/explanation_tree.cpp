#include <algorithm>

#include "whybn/errors.hpp"
#include "whybn/explainers.hpp"

namespace whybn {

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Network& net, const Assignment& e, const ExplainerConfig& config, const QueryEngine& engine,
              ExplainStats* stats)
      : net_(net), e_(e), config_(config), counter_(engine), stats_(stats) {}

  // `path_posterior` is p(p | e) for the current path p.
  ExplanationTree build(const std::vector<VarId>& candidates, const Assignment& path, double path_posterior) {
    const std::size_t calls_before = counter_.calls();
    ExplanationTree node;
    if (candidates.empty() || path_posterior < config_.beta) {
      record(candidates.size(), calls_before);
      return node;
    }

    const Assignment context = e_.merged(path);
    const std::size_t n = candidates.size();
    std::vector<std::vector<double>> info(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        info[i][j] = info[j][i] = conditional_mutual_information(net_, candidates[i], candidates[j], context, counter_);

    std::size_t best = 0;
    double best_sum = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) sum += info[i][j];
      if (sum > best_sum) {
        best_sum = sum;
        best = i;
      }
    }
    // With a single candidate left there is nothing to share information
    // with; it is expanded and only the posterior threshold applies.
    if (n > 1) {
      double strongest = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != best) strongest = std::max(strongest, info[best][j]);
      if (strongest < config_.alpha) {
        record(n, calls_before);
        return node;
      }
    }

    const VarId chosen = candidates[best];
    node.variable = chosen;
    node.score = best_sum;
    const VarId target[] = {chosen};
    const auto conditional = counter_.query(net_, target, context, {}).distribution.values();
    for (StateId s = 0; s < conditional.size(); ++s)
      node.branches.push_back({s, path_posterior * conditional[s], BranchKind::expanded, {}});
    record(n, calls_before);

    std::vector<VarId> rest;
    for (VarId c : candidates)
      if (c != chosen) rest.push_back(c);
    for (auto& br : node.branches) {
      if (br.label <= 0.0) continue;
      Assignment child = path;
      child.set(chosen, br.state);
      br.subtree = build(rest, child, br.label);
    }
    return node;
  }

 private:
  void record(std::size_t candidates, std::size_t calls_before) {
    if (stats_) stats_->nodes.push_back({candidates, counter_.calls() - calls_before});
  }

  const Network& net_;
  const Assignment& e_;
  const ExplainerConfig& config_;
  CountingEngine counter_;
  ExplainStats* stats_;
};

}  // namespace

ExplanationTree explanation_tree(const Network& net, std::span<const VarId> hypothesis, const Assignment& e,
                                 const ExplainerConfig& config, const QueryEngine& engine, ExplainStats* stats) {
  if (e.empty()) throw BindingError("explanandum is empty");
  std::vector<VarId> candidates;
  for (VarId h : hypothesis) {
    if (h >= net.size()) throw BindingError("hypothesis refers to an unknown variable");
    if (e.contains(h)) throw BindingError("'" + net.variable(h).name + "' is both explanandum and hypothesis");
    if (std::find(candidates.begin(), candidates.end(), h) == candidates.end()) candidates.push_back(h);
  }
  std::sort(candidates.begin(), candidates.end());
  // Fails with ImpossibleConditioning when p(e) = 0.
  engine.query(net, {}, e, {});

  TreeBuilder builder(net, e, config, engine, stats);
  return builder.build(candidates, {}, 1.0);
}

}  // namespace whybn
