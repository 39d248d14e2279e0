#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "nabla/derivation.hpp"
#include "nabla/kernel.hpp"

namespace nabla {

/// A derived-rule node whose premises do not fit the rule's schema.
class SchemaMismatch : public std::runtime_error {
 public:
  SchemaMismatch(NodeId node, const std::string& msg)
      : std::runtime_error("step " + std::to_string(node) + ": " + msg), node_(node) {}
  NodeId node() const { return node_; }

 private:
  NodeId node_;
};

/// Replaces every derived-rule node (andI, andE1, andE2, orIl, orIr, orE, FI,
/// FE) by primitive steps. The final step of each expansion keeps the derived
/// node's id; helper steps get new ids above the current maximum.
///
/// Schemas (premises in order):
///   andI  a:A, a:B                      => a:(A & B)
///   andE1 a:(A & B)                     => a:A
///   andE2 a:(A & B)                     => a:B
///   orIl  a:A                           => a:(A | B)
///   orIr  a:B                           => a:(A | B)
///   orE   a:(A | B), g:C, g:C           => g:C   discharging a:A in the 2nd, a:B in the 3rd
///   FI    a b1 b2:A, le(b1,b2)          => a b1:(F A)
///   FE    a b1:(F A), g:C               => g:C   discharging a b1 b2:A, le(b1,b2); b2 fresh
Derivation expand_derived(const Derivation& d);

bool has_derived_steps(const Derivation& d);

/// A label outside `used`, built from `hint` by appending a number.
Label fresh_label(const std::set<Label>& used, const std::string& hint = "c");

/// Shifts every step id (and references) by `offset`.
Derivation renumber(const Derivation& d, NodeId offset);

enum class ClosureErrorKind { ShapeMismatch, NotLocalFormula, NonParametricLabel, NotClosed };

const char* to_string(ClosureErrorKind k);

class ClosureError : public std::runtime_error {
 public:
  ClosureError(ClosureErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind) {}
  ClosureErrorKind kind() const { return kind_; }

 private:
  ClosureErrorKind kind_;
};

/// From closed proofs of b:A and b:(A -> B), a closed proof of b:B.
Derivation mp_compose(const Derivation& d1, const Derivation& d2);
/// From a closed proof of b:C with C local, a closed proof of b:(G C).
Derivation nec_g(const Derivation& d);
/// From a closed proof of b:C with C local, a closed proof of b:(X C).
Derivation nec_x(const Derivation& d);

class NotATautology : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotPropositional : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// True under every valuation of its atoms. Temporal subformulas are treated
/// as opaque atoms.
bool is_tautology(const Formula& f);

/// Closed proof of b:f using only impI, impE and botE, built by case
/// analysis on the atoms. Throws NotPropositional or NotATautology.
Derivation derive_tautology(const Formula& f, const Label& b);

/// As derive_tautology, but maximal temporal subformulas count as atoms, so
/// any instance of a tautology (e.g. `((G p) -> (q -> (G p)))`) is accepted.
Derivation derive_tautology_instance(const Formula& f, const Label& b);

}  // namespace nabla
