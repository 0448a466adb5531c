#pragma once

#include "whybn/inference.hpp"
#include "whybn/network.hpp"

namespace whybn {

/// do(X = x) bindings. Same representation as an observation set; the type
/// alias marks the intended semantics at call sites.
using InterventionSet = Assignment;

/// Network with every intervened variable cut from its parents and given a
/// point-mass CPT on its forced state. Other CPTs are copied unchanged.
Network mutilate(const Network& net, const InterventionSet& do_set);

/// p(event | observed) in the network after do(do_set): intervene first,
/// then condition.
double interventional_probability(const Network& net, const Assignment& event, const Assignment& observed,
                                  const InterventionSet& do_set, const QueryEngine& engine = default_engine());

/// Causal information flow I(X -> Y | observed, do(do_set)) in bits:
///
///   sum_x p(x|o,z^) sum_y p(y|o,x^,z^) log2( p(y|o,x^,z^) / p*(y) ),
///   p*(y) = sum_x' p(x'|o,z^) p(y|o,x'^,z^).
///
/// With no observations this is the plain interventional flow.
double information_flow(const Network& net, VarId x, VarId y, const Assignment& observed,
                        const InterventionSet& do_set, const QueryEngine& engine = default_engine());
inline double information_flow(const Network& net, VarId x, VarId y, const InterventionSet& do_set,
                               const QueryEngine& engine = default_engine()) {
  return information_flow(net, x, y, Assignment{}, do_set, engine);
}

/// Flow from X into the single explanandum state e (bits, may be negative):
///
///   sum_x [p(x|o,p^) p(e|o,x^,p^) / p(e|o,p^)] log2( p(e|o,x^,p^) / sum_x' p(x'|o,p^) p(e|o,x'^,p^) ).
///
/// Its expectation over the states of E equals information_flow(X, E | o, p^).
/// Throws ImpossibleConditioning when p(e|o,p^) = 0.
double flow_to_state(const Network& net, VarId x, const Assignment& e, const Assignment& observed,
                     const InterventionSet& do_set, const QueryEngine& engine = default_engine());

/// Pointwise flow from a known value X = x to e, with `observed_rest` the
/// observations other than X:
///
///   log2( p(e|o',p^,x^) / sum_x' p(x'|o',p^) p(e|o',x'^,p^) ).
double pointwise_flow(const Network& net, VarId x, StateId x_state, const Assignment& e,
                      const Assignment& observed_rest, const InterventionSet& do_set,
                      const QueryEngine& engine = default_engine());

}  // namespace whybn
