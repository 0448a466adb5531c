#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "whybn/inference.hpp"
#include "whybn/network.hpp"

namespace whybn {

enum class TreeMethod { causal, noncausal };

enum class BranchKind {
  expanded,  // ordinary branch (its subtree may still be a leaf)
  observed,  // the single known value of an observed variable (causal trees)
  pruned,    // forcing this value makes the observations impossible; label unused
};

struct Branch;

/// A node is either a leaf (no variable) or a variable with one branch per
/// state. Causal trees label a branch with log2(p(e | o, p^, x^) / p(e | o));
/// noncausal trees label it with p(p, x | e).
struct ExplanationTree {
  std::optional<VarId> variable;
  double score = 0.0;  // selection criterion value of `variable`
  std::vector<Branch> branches;

  bool is_leaf() const { return !variable.has_value(); }
  std::size_t node_count() const;
  std::size_t depth() const;
};

struct Branch {
  StateId state = 0;
  double label = 0.0;
  BranchKind kind = BranchKind::expanded;
  ExplanationTree subtree;
};

bool operator==(const ExplanationTree& a, const ExplanationTree& b);
bool operator==(const Branch& a, const Branch& b);

enum class BayesFactorForm {
  prior_normalized,  // [p(h|e)/(1-p(h|e))] / [p(h)/(1-p(h))]
  posterior_odds,    // p(h|e)/(1-p(h|e))
};

struct ExplainerConfig {
  double alpha = 0.0;                   // minimum flow (causal) / information (noncausal)
  double beta = 0.0;                    // minimum path posterior, noncausal trees only
  bool prune_unreachable = true;        // causal trees: skip candidates with no open directed path to e
  std::size_t max_subset_size = 2;      // Bayes' factor search
  std::size_t top_k = 3;                // Bayes' factor search
  BayesFactorForm bf_form = BayesFactorForm::prior_normalized;
};

/// Per-node inference cost, for checking the growth of query counts.
struct NodeCost {
  std::size_t candidates = 0;  // |H| when the node was built
  std::size_t calls = 0;       // engine queries issued for this node itself
};

struct ExplainStats {
  std::vector<NodeCost> nodes;
  std::size_t total_calls() const;
};

/// Causal explanation tree for explanandum `e` given observations
/// `observed`, choosing among `hypothesis` variables by causal information
/// flow. Observed hypothesis variables are scored by pointwise flow and get
/// a single branch for their known value.
///
/// Throws ImpossibleConditioning when p(e | observed) = 0 and BindingError
/// when e is empty or overlaps the hypothesis set.
ExplanationTree causal_explanation_tree(const Network& net, std::span<const VarId> hypothesis,
                                        const Assignment& observed, const Assignment& e,
                                        const ExplainerConfig& config, const QueryEngine& engine = default_engine(),
                                        ExplainStats* stats = nullptr);

/// Noncausal explanation tree: greedy choice by summed conditional mutual
/// information with the remaining hypothesis variables, conditioned on e and
/// the path so far.
ExplanationTree explanation_tree(const Network& net, std::span<const VarId> hypothesis, const Assignment& e,
                                 const ExplainerConfig& config, const QueryEngine& engine = default_engine(),
                                 ExplainStats* stats = nullptr);

/// Path with the highest final-branch label; ties go to the first path in
/// state order. A leaf-only tree yields the empty assignment with the
/// implicit root label (0 for causal, 1 for noncausal trees). Throws
/// std::invalid_argument if every branch is pruned.
std::pair<Assignment, double> best_explanation(const ExplanationTree& tree, TreeMethod method);

enum class ScoreKind { posterior_probability, bayes_factor };

struct RankedEntry {
  Assignment hypothesis;
  double score = 0.0;
  ScoreKind kind = ScoreKind::posterior_probability;
};

struct RankedExplanations {
  std::vector<RankedEntry> entries;  // nonincreasing score, ties by assignment order
  std::size_t evaluated = 0;         // hypotheses scored
  std::size_t degenerate = 0;        // hypotheses skipped because the factor is undefined
};

RankedExplanations mpe_explanation(const Network& net, const Assignment& evidence);

/// Scores every partial assignment over subsets of `hypothesis` with 1 to
/// max_subset_size variables and keeps the top_k.
RankedExplanations bayes_factor_search(const Network& net, std::span<const VarId> hypothesis, const Assignment& e,
                                       const ExplainerConfig& config, const QueryEngine& engine = default_engine());

}  // namespace whybn
