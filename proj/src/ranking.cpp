#include <algorithm>

#include "whybn/errors.hpp"
#include "whybn/explainers.hpp"

namespace whybn {

RankedExplanations mpe_explanation(const Network& net, const Assignment& evidence) {
  const MpeResult best = mpe(net, evidence);
  RankedExplanations out;
  out.entries.push_back({best.assignment, best.probability, ScoreKind::posterior_probability});
  out.evaluated = 1;
  return out;
}

namespace {

// Calls fn(subset) for every subset of `pool` of the given size, in
// lexicographic order of positions.
template <typename Fn>
void for_each_subset(const std::vector<VarId>& pool, std::size_t size, Fn&& fn) {
  std::vector<std::size_t> pos(size);
  for (std::size_t i = 0; i < size; ++i) pos[i] = i;
  while (true) {
    std::vector<VarId> subset;
    for (auto p : pos) subset.push_back(pool[p]);
    fn(subset);
    std::size_t i = size;
    while (i-- > 0 && pos[i] == pool.size() - size + i) {
    }
    if (i == static_cast<std::size_t>(-1)) return;
    ++pos[i];
    for (std::size_t j = i + 1; j < size; ++j) pos[j] = pos[j - 1] + 1;
  }
}

}  // namespace

RankedExplanations bayes_factor_search(const Network& net, std::span<const VarId> hypothesis, const Assignment& e,
                                       const ExplainerConfig& config, const QueryEngine& engine) {
  if (e.empty()) throw BindingError("explanandum is empty");
  std::vector<VarId> pool;
  for (VarId h : hypothesis) {
    if (h >= net.size()) throw BindingError("hypothesis refers to an unknown variable");
    if (e.contains(h)) throw BindingError("'" + net.variable(h).name + "' is both explanandum and hypothesis");
    if (std::find(pool.begin(), pool.end(), h) == pool.end()) pool.push_back(h);
  }
  std::sort(pool.begin(), pool.end());
  if (config.max_subset_size == 0 || config.max_subset_size > pool.size())
    throw BindingError("maximum subset size must be between 1 and the hypothesis count");
  if (config.top_k == 0) throw BindingError("top_k must be positive");
  engine.query(net, {}, e, {});

  RankedExplanations out;
  for (std::size_t size = 1; size <= config.max_subset_size; ++size) {
    for_each_subset(pool, size, [&](const std::vector<VarId>& subset) {
      const Factor posterior = engine.query(net, subset, e, {}).distribution;
      const Factor prior = engine.query(net, subset, {}, {}).distribution;
      std::vector<std::size_t> cards;
      for (VarId v : subset) cards.push_back(net.cardinality(v));
      std::vector<StateId> states(subset.size(), 0);
      for (std::size_t k = 0; k < posterior.size(); ++k) {
        Assignment h;
        for (std::size_t i = 0; i < subset.size(); ++i) h.set(subset[i], states[i]);
        for (std::size_t i = states.size(); i-- > 0;) {
          if (++states[i] < cards[i]) break;
          states[i] = 0;
        }

        const double post = posterior.values()[k];
        const double pri = prior.values()[k];
        ++out.evaluated;
        if (post >= 1.0 || (config.bf_form == BayesFactorForm::prior_normalized && (pri <= 0.0 || pri >= 1.0))) {
          ++out.degenerate;
          continue;
        }
        double score = post / (1.0 - post);
        if (config.bf_form == BayesFactorForm::prior_normalized) score /= pri / (1.0 - pri);
        out.entries.push_back({std::move(h), score, ScoreKind::bayes_factor});
      }
    });
  }

  std::stable_sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.hypothesis < b.hypothesis;
  });
  if (out.entries.size() > config.top_k) out.entries.resize(config.top_k);
  return out;
}

}  // namespace whybn
