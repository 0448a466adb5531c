#include "whybn/factor.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace whybn {

namespace {

std::vector<std::size_t> strides_for(const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> strides(cards.size());
  std::size_t s = 1;
  for (std::size_t i = cards.size(); i-- > 0;) {
    strides[i] = s;
    s *= cards[i];
  }
  return strides;
}

std::size_t product(const std::vector<std::size_t>& cards) {
  return std::accumulate(cards.begin(), cards.end(), std::size_t{1}, std::multiplies<>());
}

// Advances a mixed-radix counter (last digit fastest). Returns false on wrap.
bool increment(std::vector<StateId>& states, const std::vector<std::size_t>& cards) {
  for (std::size_t i = states.size(); i-- > 0;) {
    if (++states[i] < cards[i]) return true;
    states[i] = 0;
  }
  return false;
}

}  // namespace

Factor::Factor(std::vector<VarId> scope, std::vector<std::size_t> cards, std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
  if (scope_.size() != cards_.size() || values_.size() != product(cards_))
    throw std::invalid_argument("factor shape does not match its scope");
}

Factor Factor::scalar(double value) {
  Factor f;
  f.values_[0] = value;
  return f;
}

Factor Factor::from_cpt(const Network& net, VarId child) {
  const Cpt& cpt = net.cpt(child);
  std::vector<VarId> scope = cpt.parents;
  scope.push_back(child);
  std::vector<std::size_t> cards;
  for (VarId v : scope) cards.push_back(net.cardinality(v));
  // Row-major CPT storage already matches the (parents..., child) layout.
  return Factor(std::move(scope), std::move(cards), cpt.table);
}

Factor Factor::indicator(VarId var, std::size_t card, StateId state) {
  std::vector<double> values(card, 0.0);
  values.at(state) = 1.0;
  return Factor({var}, {card}, std::move(values));
}

bool Factor::contains(VarId v) const { return std::find(scope_.begin(), scope_.end(), v) != scope_.end(); }

double Factor::at(std::span<const StateId> states) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) idx = idx * cards_[i] + states[i];
  return values_[idx];
}

double Factor::at(const Assignment& a) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) idx = idx * cards_[i] + a.at(scope_[i]);
  return values_[idx];
}

Factor Factor::reduce(const Assignment& evidence) const {
  std::vector<VarId> kept_scope;
  std::vector<std::size_t> kept_cards;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (!evidence.contains(scope_[i])) {
      kept_scope.push_back(scope_[i]);
      kept_cards.push_back(cards_[i]);
    }
  }
  if (kept_scope.size() == scope_.size()) return *this;

  const auto strides = strides_for(cards_);
  std::size_t base = 0;
  std::vector<std::size_t> kept_strides;
  for (std::size_t i = 0; i < scope_.size(); ++i) {
    if (auto s = evidence.get(scope_[i]))
      base += *s * strides[i];
    else
      kept_strides.push_back(strides[i]);
  }

  std::vector<double> out(product(kept_cards));
  std::vector<StateId> states(kept_scope.size(), 0);
  std::size_t k = 0;
  do {
    std::size_t idx = base;
    for (std::size_t i = 0; i < states.size(); ++i) idx += states[i] * kept_strides[i];
    out[k++] = values_[idx];
  } while (increment(states, kept_cards));
  return Factor(std::move(kept_scope), std::move(kept_cards), std::move(out));
}

template <typename Combine>
Factor Factor::eliminate(VarId v, double init, Combine combine) const {
  auto it = std::find(scope_.begin(), scope_.end(), v);
  if (it == scope_.end()) return *this;
  const std::size_t pos = static_cast<std::size_t>(it - scope_.begin());

  std::vector<VarId> out_scope = scope_;
  std::vector<std::size_t> out_cards = cards_;
  out_scope.erase(out_scope.begin() + pos);
  out_cards.erase(out_cards.begin() + pos);

  // Split the flat index around the eliminated axis: outer x card x inner.
  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < cards_.size(); ++i) inner *= cards_[i];
  const std::size_t card = cards_[pos];
  const std::size_t outer = values_.size() / (card * inner);

  std::vector<double> out(outer * inner, init);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < card; ++s)
      for (std::size_t i = 0; i < inner; ++i) {
        double& slot = out[o * inner + i];
        slot = combine(slot, values_[(o * card + s) * inner + i]);
      }
  return Factor(std::move(out_scope), std::move(out_cards), std::move(out));
}

Factor Factor::sum_out(VarId v) const {
  return eliminate(v, 0.0, [](double acc, double x) { return acc + x; });
}

Factor Factor::max_out(VarId v) const {
  return eliminate(v, 0.0, [](double acc, double x) { return std::max(acc, x); });
}

Factor Factor::reordered(std::span<const VarId> order) const {
  if (order.size() != scope_.size()) throw std::invalid_argument("reorder: not a permutation of the scope");
  if (std::equal(order.begin(), order.end(), scope_.begin())) return *this;

  const auto strides = strides_for(cards_);
  std::vector<std::size_t> new_cards, src_strides;
  for (VarId v : order) {
    auto it = std::find(scope_.begin(), scope_.end(), v);
    if (it == scope_.end()) throw std::invalid_argument("reorder: variable not in scope");
    const auto pos = static_cast<std::size_t>(it - scope_.begin());
    new_cards.push_back(cards_[pos]);
    src_strides.push_back(strides[pos]);
  }
  std::vector<double> out(values_.size());
  std::vector<StateId> states(order.size(), 0);
  std::size_t k = 0;
  do {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < states.size(); ++i) idx += states[i] * src_strides[i];
    out[k++] = values_[idx];
  } while (increment(states, new_cards));
  return Factor(std::vector<VarId>(order.begin(), order.end()), std::move(new_cards), std::move(out));
}

double Factor::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

Factor Factor::normalized() const {
  Factor out = *this;
  const double z = total();
  for (double& x : out.values_) x /= z;
  return out;
}

Factor operator*(const Factor& a, const Factor& b) {
  std::vector<VarId> scope = a.scope_;
  std::vector<std::size_t> cards = a.cards_;
  for (std::size_t i = 0; i < b.scope_.size(); ++i) {
    if (!a.contains(b.scope_[i])) {
      scope.push_back(b.scope_[i]);
      cards.push_back(b.cards_[i]);
    }
  }

  // Stride of each result axis inside a and b (0 when the axis is absent).
  const auto sa = strides_for(a.cards_);
  const auto sb = strides_for(b.cards_);
  std::vector<std::size_t> a_stride(scope.size(), 0), b_stride(scope.size(), 0);
  for (std::size_t i = 0; i < scope.size(); ++i) {
    for (std::size_t j = 0; j < a.scope_.size(); ++j)
      if (a.scope_[j] == scope[i]) a_stride[i] = sa[j];
    for (std::size_t j = 0; j < b.scope_.size(); ++j)
      if (b.scope_[j] == scope[i]) b_stride[i] = sb[j];
  }

  std::vector<double> out(product(cards));
  std::vector<StateId> states(scope.size(), 0);
  std::size_t k = 0;
  do {
    std::size_t ia = 0, ib = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      ia += states[i] * a_stride[i];
      ib += states[i] * b_stride[i];
    }
    out[k++] = a.values_[ia] * b.values_[ib];
  } while (increment(states, cards));
  return Factor(std::move(scope), std::move(cards), std::move(out));
}

}  // namespace whybn
