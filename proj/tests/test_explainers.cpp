#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "support.hpp"
#include "whybn/causal.hpp"
#include "whybn/errors.hpp"
#include "whybn/explainers.hpp"
#include "whybn/oracle.hpp"

using namespace whybn;
using namespace whybn::testing;

namespace {

const Branch& branch(const ExplanationTree& t, StateId s) {
  for (const auto& b : t.branches)
    if (b.state == s) return b;
  FAIL("no such branch");
  return t.branches.front();
}

// Visits every branch with the path that leads to it (path excludes the branch itself).
void walk(const ExplanationTree& t, Assignment& path,
          const std::function<void(const ExplanationTree&, const Branch&, const Assignment&)>& fn) {
  for (const auto& b : t.branches) {
    fn(t, b, path);
    path.set(*t.variable, b.state);
    walk(b.subtree, path, fn);
    path.erase(*t.variable);
  }
}

}  // namespace

TEST_CASE("causal tree on the drug network") {
  const Network& net = drug();
  const VarId hyp[] = {0, 1};
  ExplainerConfig cfg;
  const ExplanationTree t = causal_explanation_tree(net, hyp, {}, {{2, 0}}, cfg);
  REQUIRE(t.variable == VarId{0});
  CHECK(t.score == doctest::Approx(0.1120236804848653).epsilon(1e-9));
  const auto& m = branch(t, 0);
  const auto& f = branch(t, 1);
  REQUIRE(m.subtree.variable == VarId{1});
  REQUIRE(f.subtree.variable == VarId{1});
  CHECK(branch(m.subtree, 1).label == doctest::Approx(0.6374299206152916).epsilon(1e-9));
  CHECK(branch(m.subtree, 0).label == doctest::Approx(0.41503749927884376).epsilon(1e-9));
  CHECK(branch(f.subtree, 1).label == doctest::Approx(-0.5849625007211563).epsilon(1e-9));
  CHECK(branch(f.subtree, 0).label == doctest::Approx(-1.1699250014423124).epsilon(1e-9));

  const auto [best, score] = best_explanation(t, TreeMethod::causal);
  CHECK(best == Assignment{{0, 0}, {1, 1}});
  CHECK(score == doctest::Approx(0.6374299206152916).epsilon(1e-9));

  cfg.alpha = 0.5;
  const ExplanationTree empty = causal_explanation_tree(net, hyp, {}, {{2, 0}}, cfg);
  CHECK(empty.is_leaf());
  CHECK(best_explanation(empty, TreeMethod::causal) == std::pair<Assignment, double>{{}, 0.0});
}

TEST_CASE("causal tree on asia explains an abnormal x-ray") {
  const Network& a = asia();
  std::vector<VarId> hyp;
  for (VarId v = 0; v < a.size(); ++v)
    if (v != a.id("X-ray") && v != a.id("TbOrCa")) hyp.push_back(v);
  ExplainerConfig cfg;
  cfg.alpha = 0.01;
  const ExplanationTree t = causal_explanation_tree(a, hyp, {}, parse_bindings(a, "X-ray=abnormal"), cfg);
  REQUIRE(t.variable == a.id("LungCancer"));
  CHECK(t.score == doctest::Approx(1.0871).epsilon(1e-4));
  CHECK(branch(t, 1).subtree.variable == a.id("Tuberculosis"));
}

TEST_CASE("causal tree argument errors") {
  const Network& net = drug();
  const VarId hyp[] = {0, 2};
  CHECK_THROWS_AS(causal_explanation_tree(net, hyp, {}, {{2, 0}}, {}), BindingError);
  const VarId ok[] = {0};
  CHECK_THROWS_AS(causal_explanation_tree(net, ok, {}, {}, {}), BindingError);
  const Network& a = asia();
  const VarId h[] = {a.id("Smoker")};
  CHECK_THROWS_AS(causal_explanation_tree(a, h, parse_bindings(a, "Tuberculosis=yes,TbOrCa=no"),
                                          parse_bindings(a, "Dyspnea=yes"), {}),
                  ImpossibleConditioning);
}

TEST_CASE("interventions that contradict the observations give pruned branches") {
  // Y copies X; E depends on X. Observing Y=1 rules out do(X=0).
  std::vector<Variable> vars{{"X", {"0", "1"}}, {"Y", {"0", "1"}}, {"E", {"0", "1"}}};
  std::vector<Cpt> cpts{{0, {}, {0.5, 0.5}}, {1, {0}, {1, 0, 0, 1}}, {2, {0}, {0.8, 0.2, 0.3, 0.7}}};
  const Network net("copy", vars, cpts);
  const VarId hyp[] = {0};
  const ExplanationTree t = causal_explanation_tree(net, hyp, {{1, 1}}, {{2, 0}}, {});
  REQUIRE(t.variable == VarId{0});
  CHECK(branch(t, 0).kind == BranchKind::pruned);
  CHECK(branch(t, 1).kind == BranchKind::expanded);
  CHECK(branch(t, 1).label == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("observed variables get a single branch scored by pointwise flow") {
  const Network& a = asia();
  const VarId hyp[] = {a.id("Smoker"), a.id("Bronchitis")};
  const Assignment obs = parse_bindings(a, "Smoker=yes");
  const Assignment e = parse_bindings(a, "Dyspnea=yes");
  const ExplanationTree t = causal_explanation_tree(a, hyp, obs, e, {});
  REQUIRE(t.variable == a.id("Smoker"));
  CHECK(t.score == doctest::Approx(pointwise_flow(a, a.id("Smoker"), 0, e, {}, {})).epsilon(1e-12));
  REQUIRE(t.branches.size() == 1);
  CHECK(t.branches[0].kind == BranchKind::observed);
  CHECK(t.branches[0].subtree.variable == a.id("Bronchitis"));
}

TEST_CASE("causal tree invariants on random networks") {
  std::mt19937 rng(53);
  for (int round = 0; round < 25; ++round) {
    const Network net = random_network(rng, {.min_vars = 4, .max_vars = 8});
    const VarId target = net.topological_order().back();
    const Assignment e{{target, 0}};
    std::vector<VarId> hyp;
    for (VarId v = 0; v < net.size(); ++v)
      if (v != target) hyp.push_back(v);
    const Assignment obs = random_assignment(rng, net, hyp, 0.2);
    ExplainerConfig cfg;
    cfg.alpha = 1e-3;
    ExplanationTree t;
    try {
      t = causal_explanation_tree(net, hyp, obs, e, cfg);
    } catch (const ImpossibleConditioning&) {
      continue;
    }
    CHECK(t == causal_explanation_tree(net, hyp, obs, e, cfg));

    const double prior = event_probability(net, e, obs);
    Assignment path;
    walk(t, path, [&](const ExplanationTree& node, const Branch& b, const Assignment& p) {
      CHECK_FALSE(p.contains(*node.variable));
      if (b.kind == BranchKind::pruned) return;
      Assignment forced = p;
      forced.set(*node.variable, b.state);
      const double want = std::log2(interventional_probability(net, e, obs.without(forced), forced) / prior);
      if (std::isfinite(want)) CHECK(std::abs(b.label - want) < 1e-9);
      // Selected variables keep an open directed path to the explanandum.
      std::vector<VarId> blocked = obs.without(p).variables();
      for (const auto& [v, s] : p) blocked.push_back(v);
      std::erase(blocked, *node.variable);
      const VarId targets[] = {target};
      CHECK(reachable_any(net, *node.variable, targets, blocked));
    });

    // Without observations, unpruned search never selects a non-ancestor.
    cfg.prune_unreachable = false;
    const ExplanationTree plain = causal_explanation_tree(net, hyp, {}, e, cfg);
    walk(plain, path, [&](const ExplanationTree& node, const Branch&, const Assignment& p) {
      const auto blocked = p.variables();
      CHECK(reachable(net, *node.variable, target, blocked));
    });
  }
}

TEST_CASE("noncausal tree on the drug network") {
  const Network& net = drug();
  const VarId hyp[] = {0, 1};
  ExplainerConfig cfg;
  cfg.alpha = 0.02;
  const ExplanationTree t = explanation_tree(net, hyp, {{2, 0}}, cfg);
  REQUIRE(t.variable == VarId{0});  // tie with Drug broken by declaration order
  CHECK(t.score == doctest::Approx(0.188001252726202).epsilon(1e-9));
  const auto& m = branch(t, 0);
  CHECK(m.label == doctest::Approx(0.3125 / 0.45).epsilon(1e-12));
  REQUIRE(m.subtree.variable == VarId{1});
  CHECK(branch(m.subtree, 0).label == doctest::Approx(0.5).epsilon(1e-12));

  const auto [best, score] = best_explanation(t, TreeMethod::noncausal);
  CHECK(best == Assignment{{0, 0}, {1, 0}});
  CHECK(score == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("single candidate is expanded with posterior labels") {
    const VarId one[] = {1};
    const ExplanationTree s = explanation_tree(net, one, {{2, 0}}, cfg);
    REQUIRE(s.variable == VarId{1});
    CHECK(branch(s, 0).label == doctest::Approx(0.25 / 0.45).epsilon(1e-12));
    CHECK(s.depth() == 1);
  }
  SUBCASE("beta = 1 stops right below the root") {
    cfg.beta = 1.0;
    CHECK(explanation_tree(net, hyp, {{2, 0}}, cfg).depth() == 1);
  }
  SUBCASE("large alpha gives an empty tree") {
    cfg.alpha = 0.5;
    const ExplanationTree e = explanation_tree(net, hyp, {{2, 0}}, cfg);
    CHECK(e.is_leaf());
    CHECK(best_explanation(e, TreeMethod::noncausal).second == 1.0);
  }
}

TEST_CASE("noncausal tree labels are path posteriors") {
  std::mt19937 rng(59);
  for (int round = 0; round < 20; ++round) {
    const Network net = random_network(rng, {.min_vars = 4, .max_vars = 7, .max_states = 3});
    const VarId target = net.topological_order().back();
    const Assignment e{{target, 1}};
    std::vector<VarId> hyp;
    for (VarId v = 0; v < net.size(); ++v)
      if (v != target) hyp.push_back(v);
    ExplainerConfig cfg;
    cfg.alpha = 0.01;
    const ExplanationTree t = explanation_tree(net, hyp, e, cfg);
    CHECK(t == explanation_tree(net, hyp, e, cfg));

    std::function<void(const ExplanationTree&, const Assignment&, double)> check =
        [&](const ExplanationTree& node, const Assignment& path, double parent_label) {
          if (node.is_leaf()) return;
          double sum = 0.0;
          for (const auto& b : node.branches) {
            Assignment p = path;
            p.set(*node.variable, b.state);
            CHECK(std::abs(b.label - event_probability(net, p, e)) < 1e-9);
            sum += b.label;
            check(b.subtree, p, b.label);
          }
          CHECK(std::abs(sum - parent_label) < 1e-9);
        };
    check(t, {}, 1.0);
  }
}

TEST_CASE("mpe explanation") {
  const Network& net = drug();
  const auto r = mpe_explanation(net, {{2, 0}});
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0].hypothesis == Assignment{{0, 0}, {1, 0}});
  CHECK(r.entries[0].score == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.entries[0].kind == ScoreKind::posterior_probability);
  // Runner-up (f, no): 0.1125 / 0.45.
  CHECK(joint_probability(net, {{0, 1}, {1, 1}, {2, 0}}) / 0.45 == doctest::Approx(0.25));
  const auto all = mpe_explanation(net, {{0, 0}, {1, 0}, {2, 0}});
  CHECK(all.entries[0].hypothesis.empty());
  CHECK(all.entries[0].score == doctest::Approx(1.0));
}

TEST_CASE("bayes factor search") {
  const Network& net = drug();
  const VarId hyp[] = {0, 1};
  ExplainerConfig cfg;
  cfg.max_subset_size = 2;
  cfg.top_k = 8;
  const auto r = bayes_factor_search(net, hyp, {{2, 0}}, cfg);
  REQUIRE(r.entries.size() == 8);
  CHECK(r.evaluated == 8);
  CHECK(r.entries[0].hypothesis == Assignment{{0, 0}});
  CHECK(r.entries[0].score == doctest::Approx(2.2727272727).epsilon(1e-9));
  CHECK(r.entries[1].hypothesis == Assignment{{0, 0}, {1, 1}});
  CHECK(r.entries[1].score == doctest::Approx(1.6896551724).epsilon(1e-9));
  CHECK(r.entries[2].hypothesis == Assignment{{0, 0}, {1, 0}});
  CHECK(r.entries[2].score == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
  CHECK(r.entries[3].hypothesis == Assignment{{1, 0}});
  CHECK(r.entries[3].score == doctest::Approx(1.25).epsilon(1e-9));
  for (std::size_t i = 1; i < r.entries.size(); ++i) CHECK(r.entries[i - 1].score >= r.entries[i].score);

  SUBCASE("posterior-odds form") {
    cfg.bf_form = BayesFactorForm::posterior_odds;
    const auto odds = bayes_factor_search(net, hyp, {{2, 0}}, cfg);
    CHECK(odds.entries[0].score == doctest::Approx(2.2727272727).epsilon(1e-9));  // prior odds of Sex=m are 1
  }
  SUBCASE("independent hypothesis has factor 1") {
    const Network& a = asia();
    const VarId h[] = {a.id("VisitAsia")};
    cfg.max_subset_size = 1;
    const auto ind = bayes_factor_search(a, h, parse_bindings(a, "Bronchitis=yes"), cfg);
    for (const auto& entry : ind.entries) CHECK(entry.score == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("deterministic hypotheses are skipped") {
    const Network& a = asia();
    const VarId h[] = {a.id("TbOrCa"), a.id("LungCancer")};
    cfg.max_subset_size = 2;
    const auto d = bayes_factor_search(a, h, parse_bindings(a, "Tuberculosis=yes"), cfg);
    CHECK(d.degenerate > 0);  // TbOrCa=yes is certain given tuberculosis
  }
  CHECK_THROWS_AS(bayes_factor_search(net, hyp, {{2, 0}}, {.max_subset_size = 3}), BindingError);
}

TEST_CASE("trees built through the enumeration oracle are identical") {
  const Network& a = asia();
  oracle::EnumerationEngine reference(a);
  oracle::CrossCheckEngine checked(default_engine(), reference);
  std::vector<VarId> hyp;
  for (VarId v = 0; v < a.size(); ++v)
    if (v != a.id("Dyspnea") && v != a.id("TbOrCa")) hyp.push_back(v);
  ExplainerConfig cfg;
  cfg.alpha = 0.01;
  const Assignment obs = parse_bindings(a, "Smoker=yes"), e = parse_bindings(a, "Dyspnea=yes");
  const auto t1 = causal_explanation_tree(a, hyp, obs, e, cfg);
  const auto t2 = causal_explanation_tree(a, hyp, obs, e, cfg, checked);
  CHECK(t1 == t2);
  CHECK(checked.checks() > 0);
  CHECK(explanation_tree(a, hyp, e, cfg) == explanation_tree(a, hyp, e, cfg, checked));
}

TEST_CASE("per-node call counts") {
  const Network& net = drug();
  const VarId hyp[] = {0, 1};
  ExplainStats stats;
  causal_explanation_tree(net, hyp, {}, {{2, 0}}, {}, default_engine(), &stats);
  REQUIRE(stats.nodes.size() == 7);  // root, two Drug nodes, four leaves
  // Root: two candidates at (1 prior + 1 weight + 2 interventions) each, plus two labels.
  CHECK(stats.nodes[0].candidates == 2);
  CHECK(stats.nodes[0].calls == 10);
}
