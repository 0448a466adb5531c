#include "whybn/cli.hpp"

#include <cstdio>
#include <functional>
#include <memory>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "whybn/causal.hpp"
#include "whybn/errors.hpp"
#include "whybn/explainers.hpp"
#include "whybn/network_io.hpp"
#include "whybn/oracle.hpp"
#include "whybn/report.hpp"

namespace whybn::cli {

namespace {

struct Options {
  std::string network;
  std::vector<std::string> explanandum, observe, evidence, intervene, event, given;
  std::string hypothesis, exclude;
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t max_subset = 2;
  std::size_t top_k = 3;
  std::string bf_form = "prior";
  bool no_prune = false;
  std::string format = "ascii";
  bool oracle_check = false;
};

std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", p);
  return buf;
}

// Hypothesis set: --hypothesis if given, else every variable outside the
// explanandum; --exclude removes from either.
std::vector<VarId> hypothesis_set(const Network& net, const Options& opt, const Assignment& e) {
  std::vector<VarId> hyp;
  if (!opt.hypothesis.empty()) {
    hyp = parse_variable_list(net, opt.hypothesis);
  } else {
    for (VarId v = 0; v < net.size(); ++v)
      if (!e.contains(v)) hyp.push_back(v);
  }
  const auto excluded = parse_variable_list(net, opt.exclude);
  std::erase_if(hyp, [&](VarId v) { return std::find(excluded.begin(), excluded.end(), v) != excluded.end(); });
  return hyp;
}

void emit_tree(const Network& net, const ExplanationTree& tree, TreeMethod method, const std::string& format,
               std::ostream& out) {
  if (format == "json") {
    out << tree_to_json(net, tree, method);
  } else if (format == "dot") {
    out << tree_to_dot(net, tree);
  } else {
    out << tree_to_ascii(net, tree);
    if (!tree.is_leaf()) {
      const auto [path, score] = best_explanation(tree, method);
      out << "best: " << format_assignment(net, path, " & ") << "  " << format_fixed4(score) << "\n";
    }
  }
}

void emit_ranked(const Network& net, const RankedExplanations& ranked, const std::string& format, std::ostream& out) {
  if (format == "json")
    out << ranked_to_json(net, ranked);
  else
    out << ranked_to_ascii(net, ranked);
}

// Engine for this run: plain elimination, or elimination cross-checked
// against enumeration when --oracle-check is set.
struct EngineChoice {
  std::unique_ptr<oracle::EnumerationEngine> reference;
  std::unique_ptr<oracle::CrossCheckEngine> checked;
  const QueryEngine* engine = &default_engine();

  EngineChoice(const Network& net, bool check) {
    if (!check) return;
    reference = std::make_unique<oracle::EnumerationEngine>(net);
    checked = std::make_unique<oracle::CrossCheckEngine>(default_engine(), *reference);
    engine = checked.get();
  }
};

int execute(const std::string& command, const Options& opt, std::ostream& out) {
  const Network net = load_network(opt.network);
  if (command == "validate") {
    out << "ok: " << (net.name().empty() ? opt.network : net.name()) << ", " << net.size() << " variables, "
        << net.edges().size() << " edges\n";
    return kOk;
  }

  const EngineChoice choice(net, opt.oracle_check);
  const QueryEngine& engine = *choice.engine;

  if (command == "query") {
    const Assignment event = parse_bindings(net, opt.event);
    const Assignment given = parse_bindings(net, opt.given);
    const Assignment forced = parse_bindings(net, opt.intervene);
    if (event.empty()) throw BindingError("--event needs at least one Var=state binding");
    const double p = interventional_probability(net, event, given, forced, engine);
    if (opt.format == "json") {
      nlohmann::ordered_json doc;
      doc["probability"] = p;
      out << doc.dump(2) << "\n";
    } else {
      out << format_probability(p) << "\n";
    }
    return kOk;
  }

  if (command == "mpe") {
    const Assignment evidence = parse_bindings(net, opt.evidence);
    const RankedExplanations ranked = mpe_explanation(net, evidence);
    if (opt.oracle_check) {
      const MpeResult want = oracle::mpe(net, evidence);
      if (std::abs(want.probability - ranked.entries.front().score) > 1e-9)
        throw OracleDivergence("MPE probability differs from the enumeration oracle");
    }
    emit_ranked(net, ranked, opt.format, out);
    return kOk;
  }

  const Assignment e = parse_bindings(net, opt.explanandum);
  if (e.empty()) throw BindingError("--explanandum needs at least one Var=state binding");
  const auto hyp = hypothesis_set(net, opt, e);

  ExplainerConfig config;
  config.alpha = opt.alpha;
  config.beta = opt.beta;
  config.prune_unreachable = !opt.no_prune;
  config.max_subset_size = opt.max_subset;
  config.top_k = opt.top_k;
  config.bf_form = opt.bf_form == "odds" ? BayesFactorForm::posterior_odds : BayesFactorForm::prior_normalized;

  if (command == "bf") {
    emit_ranked(net, bayes_factor_search(net, hyp, e, config, engine), opt.format, out);
  } else if (command == "et") {
    emit_tree(net, explanation_tree(net, hyp, e, config, engine), TreeMethod::noncausal, opt.format, out);
  } else {
    const Assignment observed = parse_bindings(net, opt.observe);
    emit_tree(net, causal_explanation_tree(net, hyp, observed, e, config, engine), TreeMethod::causal, opt.format,
              out);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explain observed states of a discrete causal Bayesian network", "whybn"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--network,-n", opt.network, "Network file (JSON)")->required();
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"ascii", "json", "dot"}));
    sub->add_flag("--oracle-check", opt.oracle_check, "Recompute every probability by full enumeration");
  };
  auto add_hypothesis = [&](CLI::App* sub) {
    sub->add_option("--explanandum,-e", opt.explanandum, "State(s) to explain, Var=state")->required();
    sub->add_option("--hypothesis", opt.hypothesis, "Comma-separated explanatory variables");
    sub->add_option("--exclude", opt.exclude, "Comma-separated variables removed from the hypothesis set");
  };

  auto* cet = app.add_subcommand("cet", "Causal explanation tree");
  add_common(cet);
  add_hypothesis(cet);
  cet->add_option("--observe,-o", opt.observe, "Observations, Var=state");
  cet->add_option("--alpha", opt.alpha, "Minimum information flow")->check(CLI::NonNegativeNumber);
  cet->add_flag("--no-prune", opt.no_prune, "Score every candidate, even without an open directed path");

  auto* et = app.add_subcommand("et", "Noncausal explanation tree");
  add_common(et);
  add_hypothesis(et);
  et->add_option("--alpha", opt.alpha, "Minimum mutual information")->check(CLI::NonNegativeNumber);
  et->add_option("--beta", opt.beta, "Minimum path posterior")->check(CLI::Range(0.0, 1.0));

  auto* mpe = app.add_subcommand("mpe", "Most probable explanation");
  add_common(mpe);
  mpe->add_option("--evidence", opt.evidence, "Evidence, Var=state");

  auto* bf = app.add_subcommand("bf", "Bayes' factor subset search");
  add_common(bf);
  add_hypothesis(bf);
  bf->add_option("--max-subset", opt.max_subset, "Largest hypothesis subset")->check(CLI::PositiveNumber);
  bf->add_option("--top-k", opt.top_k, "Entries to report")->check(CLI::PositiveNumber);
  bf->add_option("--bf-form", opt.bf_form, "prior: posterior odds over prior odds; odds: posterior odds")
      ->check(CLI::IsMember({"prior", "odds"}));

  auto* query = app.add_subcommand("query", "p(event | given, do(...))");
  add_common(query);
  query->add_option("--event", opt.event, "Event, Var=state")->required();
  query->add_option("--given", opt.given, "Observations, Var=state");
  query->add_option("--do", opt.intervene, "Interventions, Var=state");

  auto* validate = app.add_subcommand("validate", "Check a network file");
  validate->add_option("--network,-n", opt.network, "Network file (JSON)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  std::string command;
  for (auto* sub : app.get_subcommands()) command = sub->get_name();
  if (opt.format == "dot" && command != "cet" && command != "et") {
    err << "error: dot output is only available for trees\n";
    return kUsage;
  }

  try {
    return execute(command, opt, out);
  } catch (const ParseError& e) {
    err << "invalid network: " << e.what() << "\n";
    return kInvalidNetwork;
  } catch (const ValidationError& e) {
    err << "invalid network: " << e.what() << "\n";
    return kInvalidNetwork;
  } catch (const ImpossibleConditioning& e) {
    err << "impossible conditioning: " << e.what() << "\n";
    return kImpossible;
  } catch (const OracleDivergence& e) {
    err << "oracle check failed: " << e.what() << "\n";
    return kDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace whybn::cli
