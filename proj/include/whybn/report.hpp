#pragma once

#include <string>
#include <string_view>

#include "whybn/explainers.hpp"
#include "whybn/network.hpp"

namespace whybn {

/// Tree as JSON with full-precision labels:
///   {"method": "cet"|"et", "tree": NODE}
///   NODE   = {} for a leaf, or {"variable": name, "score": x, "branches": [BRANCH...]}
///   BRANCH = {"state": label, "label": x, "kind": "expanded"|"observed"|"pruned", "subtree": NODE}
/// Non-finite numbers are written as the strings "inf", "-inf", "nan".
std::string tree_to_json(const Network& net, const ExplanationTree& tree, TreeMethod method);
/// Inverse of tree_to_json; throws ParseError on schema violations.
ExplanationTree tree_from_json(const Network& net, std::string_view text);

/// Graphviz digraph: one statement per tree node, one edge per branch labeled
/// "<state>: <label to 4 decimals>".
std::string tree_to_dot(const Network& net, const ExplanationTree& tree);
/// Indented text rendering with 4-decimal labels.
std::string tree_to_ascii(const Network& net, const ExplanationTree& tree);

std::string ranked_to_json(const Network& net, const RankedExplanations& ranked);
std::string ranked_to_ascii(const Network& net, const RankedExplanations& ranked);

/// Fixed-point with 4 decimals; non-finite values as "inf"/"-inf"/"nan".
std::string format_fixed4(double x);

}  // namespace whybn
