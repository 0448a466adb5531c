#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "whybn/network.hpp"

namespace whybn {

/// Nonnegative table over an ordered scope of variables. Entries are laid out
/// in mixed radix over the scope with the last variable varying fastest, the
/// same layout as a CPT row block. The empty scope holds a single scalar.
class Factor {
 public:
  Factor() : values_{1.0} {}
  Factor(std::vector<VarId> scope, std::vector<std::size_t> cards, std::vector<double> values);

  static Factor scalar(double value);
  /// p(child | parents) as a factor over (parents..., child).
  static Factor from_cpt(const Network& net, VarId child);
  /// 1 at `state`, 0 elsewhere.
  static Factor indicator(VarId var, std::size_t card, StateId state);

  const std::vector<VarId>& scope() const { return scope_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool contains(VarId v) const;

  /// Entry for states given in scope order.
  double at(std::span<const StateId> states) const;
  /// Entry for the restriction of `a` to the scope; every scope variable must be bound.
  double at(const Assignment& a) const;

  /// Fix the bound scope variables and drop them from the scope.
  Factor reduce(const Assignment& evidence) const;
  Factor sum_out(VarId v) const;
  Factor max_out(VarId v) const;
  /// Same table with the scope permuted into `order` (a permutation of scope()).
  Factor reordered(std::span<const VarId> order) const;

  double total() const;
  /// Divides by total(); the caller guarantees total() > 0.
  Factor normalized() const;

  friend Factor operator*(const Factor& a, const Factor& b);

 private:
  template <typename Combine>
  Factor eliminate(VarId v, double init, Combine combine) const;

  std::vector<VarId> scope_;
  std::vector<std::size_t> cards_;
  std::vector<double> values_;
};

}  // namespace whybn
