#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "whybn/network.hpp"
#include "whybn/network_io.hpp"

namespace whybn::testing {

inline std::string data_path(const std::string& file) { return std::string(WHYBN_DATA_DIR) + "/" + file; }

inline const Network& drug() {
  static const Network net = load_network(data_path("drug.json"));
  return net;
}
inline const Network& asia() {
  static const Network net = load_network(data_path("asia.json"));
  return net;
}
inline const Network& academe() {
  static const Network net = load_network(data_path("academe.json"));
  return net;
}

struct RandomNetworkOptions {
  std::size_t min_vars = 3;
  std::size_t max_vars = 10;
  std::size_t max_parents = 3;
  std::size_t max_states = 2;
  bool chain = false;
};

/// Random DAG over a shuffled declaration order. CPT rows lean strongly
/// toward one state so dependencies stay far from the faithfulness boundary.
inline Network random_network(std::mt19937& rng, const RandomNetworkOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> count(opt.min_vars, opt.max_vars);
  const std::size_t n = count(rng);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);  // order[k] = VarId of the k-th causal variable

  std::vector<Variable> vars(n);
  std::uniform_int_distribution<std::size_t> states(2, opt.max_states);
  for (std::size_t v = 0; v < n; ++v) {
    vars[v].name = "V" + std::to_string(v);
    const std::size_t card = states(rng);
    for (std::size_t s = 0; s < card; ++s) vars[v].states.push_back("s" + std::to_string(s));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Cpt> cpts;
  for (std::size_t k = 0; k < n; ++k) {
    Cpt cpt;
    cpt.child = order[k];
    if (opt.chain) {
      if (k > 0) cpt.parents.push_back(order[k - 1]);
    } else {
      std::vector<std::size_t> earlier(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
      std::shuffle(earlier.begin(), earlier.end(), rng);
      std::uniform_int_distribution<std::size_t> howmany(0, std::min(opt.max_parents, earlier.size()));
      earlier.resize(howmany(rng));
      cpt.parents = earlier;
    }
    std::size_t rows = 1;
    for (VarId p : cpt.parents) rows *= vars[p].cardinality();
    const std::size_t card = vars[cpt.child].cardinality();
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(card);
      const std::size_t peak = std::uniform_int_distribution<std::size_t>(0, card - 1)(rng);
      double sum = 0.0;
      for (std::size_t s = 0; s < card; ++s) {
        row[s] = s == peak ? 4.0 + 4.0 * unit(rng) : 0.2 + unit(rng);
        sum += row[s];
      }
      double acc = 0.0;
      for (std::size_t s = 0; s + 1 < card; ++s) {
        row[s] /= sum;
        acc += row[s];
      }
      row[card - 1] = 1.0 - acc;
      cpt.table.insert(cpt.table.end(), row.begin(), row.end());
    }
    cpts.push_back(std::move(cpt));
  }
  return Network("random", std::move(vars), std::move(cpts));
}

/// Random partial assignment over a random subset of `pool` (each variable
/// picked with probability `density`).
inline Assignment random_assignment(std::mt19937& rng, const Network& net, const std::vector<VarId>& pool,
                                    double density) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Assignment a;
  for (VarId v : pool)
    if (unit(rng) < density) a.set(v, std::uniform_int_distribution<StateId>(0, net.cardinality(v) - 1)(rng));
  return a;
}

inline std::vector<VarId> all_variables(const Network& net) {
  std::vector<VarId> out(net.size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

}  // namespace whybn::testing
