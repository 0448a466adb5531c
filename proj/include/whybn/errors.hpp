#pragma once

#include <stdexcept>
#include <string>

namespace whybn {

/// Malformed network text (bad syntax or missing/ill-typed fields).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed text describing an invalid network: unknown variables,
/// CPT shape or normalization problems, cycles.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A "Var=state" binding or query argument that does not fit the network.
class BindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditioning on an event of probability zero.
class ImpossibleConditioning : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Brute-force enumeration refused because the joint state space exceeds the cap.
class StateSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Engine and enumeration oracle disagree beyond tolerance.
class OracleDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace whybn
