#include <algorithm>
#include <stdexcept>

#include "whybn/explainers.hpp"

namespace whybn {

std::size_t ExplanationTree::node_count() const {
  std::size_t n = 1;
  for (const auto& b : branches) n += b.subtree.node_count();
  return n;
}

std::size_t ExplanationTree::depth() const {
  std::size_t d = 0;
  for (const auto& b : branches) d = std::max(d, 1 + b.subtree.depth());
  return d;
}

bool operator==(const ExplanationTree& a, const ExplanationTree& b) {
  return a.variable == b.variable && a.score == b.score && a.branches == b.branches;
}

bool operator==(const Branch& a, const Branch& b) {
  return a.state == b.state && a.label == b.label && a.kind == b.kind && a.subtree == b.subtree;
}

std::size_t ExplainStats::total_calls() const {
  std::size_t total = 0;
  for (const auto& n : nodes) total += n.calls;
  return total;
}

namespace {

void collect_best(const ExplanationTree& node, Assignment& path, std::optional<std::pair<Assignment, double>>& best) {
  for (const auto& b : node.branches) {
    if (b.kind == BranchKind::pruned) continue;
    path.set(*node.variable, b.state);
    if (b.subtree.is_leaf()) {
      if (!best || b.label > best->second) best = std::make_pair(path, b.label);
    } else {
      collect_best(b.subtree, path, best);
    }
    path.erase(*node.variable);
  }
}

}  // namespace

std::pair<Assignment, double> best_explanation(const ExplanationTree& tree, TreeMethod method) {
  if (tree.is_leaf()) return {Assignment{}, method == TreeMethod::causal ? 0.0 : 1.0};
  Assignment path;
  std::optional<std::pair<Assignment, double>> best;
  collect_best(tree, path, best);
  if (!best) throw std::invalid_argument("explanation tree has no unpruned path");
  return *best;
}

}  // namespace whybn
