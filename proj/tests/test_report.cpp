#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <regex>

#include "support.hpp"
#include "whybn/errors.hpp"
#include "whybn/explainers.hpp"
#include "whybn/report.hpp"

using namespace whybn;
using namespace whybn::testing;

namespace {

ExplanationTree drug_cet() {
  const VarId hyp[] = {0, 1};
  return causal_explanation_tree(drug(), hyp, {}, {{2, 0}}, {});
}

std::size_t count(const std::string& s, const std::regex& re) {
  return std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator());
}

std::size_t branch_count(const ExplanationTree& t) {
  std::size_t n = t.branches.size();
  for (const auto& b : t.branches) n += branch_count(b.subtree);
  return n;
}

}  // namespace

TEST_CASE("format_fixed4") {
  CHECK(format_fixed4(0.63742992) == "0.6374");
  CHECK(format_fixed4(-1.16992500) == "-1.1699");
  CHECK(format_fixed4(-0.00001) == "0.0000");
  CHECK(format_fixed4(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_fixed4(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_fixed4(std::nan("")) == "nan");
}

TEST_CASE("json trees round-trip exactly") {
  const Network& net = drug();
  const ExplanationTree t = drug_cet();
  const std::string text = tree_to_json(net, t, TreeMethod::causal);
  CHECK(text.find("\"method\": \"cet\"") != std::string::npos);
  CHECK(tree_from_json(net, text) == t);

  ExplanationTree odd = t;
  odd.branches[0].label = -std::numeric_limits<double>::infinity();
  odd.branches[1].kind = BranchKind::pruned;
  CHECK(tree_from_json(net, tree_to_json(net, odd, TreeMethod::causal)) == odd);

  CHECK(tree_from_json(net, tree_to_json(net, ExplanationTree{}, TreeMethod::noncausal)).is_leaf());

  std::mt19937 rng(61);
  for (int round = 0; round < 10; ++round) {
    const Network r = random_network(rng, {.max_states = 3});
    const VarId target = r.topological_order().back();
    std::vector<VarId> hyp;
    for (VarId v = 0; v < r.size(); ++v)
      if (v != target) hyp.push_back(v);
    const auto et = explanation_tree(r, hyp, {{target, 0}}, {.alpha = 0.001});
    CHECK(tree_from_json(r, tree_to_json(r, et, TreeMethod::noncausal)) == et);
  }
}

TEST_CASE("json schema violations") {
  const Network& net = drug();
  CHECK_THROWS_AS(tree_from_json(net, "[]"), ParseError);
  CHECK_THROWS_AS(tree_from_json(net, "{\"method\":\"cet\"}"), ParseError);
  CHECK_THROWS_AS(tree_from_json(net, "{\"method\":\"cet\",\"tree\":{\"variable\":\"Nope\",\"score\":0,\"branches\":[]}}"),
                  ParseError);
  CHECK_THROWS_AS(tree_from_json(net, "{\"method\":\"cet\",\"tree\":"), ParseError);
}

TEST_CASE("dot output has one statement per node and one labeled edge per branch") {
  const Network& net = drug();
  const ExplanationTree t = drug_cet();
  const std::string dot = tree_to_dot(net, t);
  CHECK(dot.rfind("digraph explanation {", 0) == 0);
  CHECK(dot.back() == '\n');
  CHECK(dot.substr(dot.size() - 2) == "}\n");
  const std::regex node(R"(^\s*n\d+ \[[^\]]*\];$)", std::regex::multiline);
  const std::regex edge(R"(^\s*n\d+ -> n\d+ \[label="[^"]+: -?\d+\.\d{4}"\];$)", std::regex::multiline);
  CHECK(count(dot, node) == t.node_count());
  CHECK(count(dot, edge) == branch_count(t));
  CHECK(dot.find("m: 0.6374") == std::string::npos);
  CHECK(dot.find("no: 0.6374") != std::string::npos);
}

TEST_CASE("ascii rendering") {
  const Network& net = drug();
  const std::string text = tree_to_ascii(net, drug_cet());
  CHECK(text ==
        "Sex  [score 0.1120]\n"
        "  Sex=m  0.4739\n"
        "    Drug  [score 0.0034]\n"
        "      Drug=yes  0.4150\n"
        "      Drug=no  0.6374\n"
        "  Sex=f  -0.7105\n"
        "    Drug  [score 0.0192]\n"
        "      Drug=yes  -1.1699\n"
        "      Drug=no  -0.5850\n");
  CHECK(tree_to_ascii(net, ExplanationTree{}) == "(empty tree)\n");
}

TEST_CASE("ranked rendering") {
  const Network& net = drug();
  const VarId hyp[] = {0, 1};
  const auto r = bayes_factor_search(net, hyp, {{2, 0}}, {});
  const std::string text = ranked_to_ascii(net, r);
  CHECK(text.rfind("1. Sex=m  BF 2.2727\n", 0) == 0);
  CHECK(ranked_to_json(net, r).find("\"Sex\": \"m\"") != std::string::npos);
}
