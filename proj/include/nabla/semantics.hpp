#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nabla/formula.hpp"
#include "nabla/judgment.hpp"

namespace nabla {

using Nat = std::uint64_t;

/// Ultimately periodic model: positions 0..stem-1 once, then the loop
/// stem..stem+period-1 forever.
class LassoModel {
 public:
  LassoModel(std::size_t stem, std::size_t period,
             std::vector<std::set<std::string>> valuation);

  std::size_t stem() const { return stem_; }
  std::size_t period() const { return period_; }
  std::size_t window() const { return stem_ + period_; }
  const std::vector<std::set<std::string>>& valuation() const { return valuation_; }

  /// Position in 0..window()-1 carrying the same valuation as n.
  std::size_t canonical(Nat n) const;
  /// Canonical successor of a canonical position.
  std::size_t successor(std::size_t i) const;
  bool holds(const std::string& atom, Nat n) const;

  /// The model whose position n looks like position n+1 here.
  LassoModel shifted() const;

  bool operator==(const LassoModel&) const = default;

 private:
  std::size_t stem_;
  std::size_t period_;
  std::vector<std::set<std::string>> valuation_;
};

/// Reads the line format `stem <s>` / `loop <p>` / `at <i>: <ident>*` / `end`.
/// Throws std::runtime_error naming the offending line.
LassoModel parse_model(std::string_view text);
std::string print_model(const LassoModel& m);

using ObservationSequence = std::vector<Nat>;
using Interpretation = std::map<Label, Nat>;

class UnboundLabel : public std::runtime_error {
 public:
  explicit UnboundLabel(const Label& l)
      : std::runtime_error("label '" + l.name + "' is not interpreted"), label_(l) {}
  const Label& label() const { return label_; }

 private:
  Label label_;
};

class HorizonTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Truth of an LTL formula at position n. Sugar is expanded first.
bool eval_ltl(const LassoModel& m, Nat n, const Formula& a);

/// Truth of a history formula at an observation sequence (nonempty).
/// The G quantifier ranges over [n_k, g_horizon(...)].
bool eval_h(const LassoModel& m, std::span<const Nat> seq, const Formula& a);

/// Last position the G clause inspects when the sequence ends in `last` and
/// the quantified subformula is `body`.
Nat g_horizon(const LassoModel& m, Nat last, const Formula& body);

/// Debug switch: doubles the G horizon everywhere, for checking that a
/// disagreement is not caused by the truncation.
void set_horizon_doubling(bool on);
bool horizon_doubling();

/// Brute-force reading of the history truth definition. Every G quantifier
/// looks `H - max(seq)` positions past its anchor.
/// Throws HorizonTooSmall unless H >= max(seq) + 2*(stem+period) + 1.
bool eval_h_oracle(const LassoModel& m, std::span<const Nat> seq, const Formula& a,
                   Nat horizon);

Nat min_oracle_horizon(const LassoModel& m, std::span<const Nat> seq);

bool eval_rwff(const Interpretation& i, const Rwff& r);
bool eval_lwff(const LassoModel& m, const Interpretation& i, const Lwff& w);
bool eval_generic(const LassoModel& m, const Interpretation& i, const Generic& g);

struct Counterexample {
  std::size_t sample = 0;
  LassoModel model;
  Interpretation interpretation;
};

struct FalsifyOptions {
  std::size_t max_stem = 4;
  std::size_t max_period = 3;
  Nat max_label_value = 12;
};

/// Searches for a model and interpretation satisfying every premise but not
/// the conclusion. Finding none is evidence, never proof, of consequence.
/// Samples run in parallel; the reported counterexample is the one with the
/// smallest sample index, so the result matches the serial search.
std::optional<Counterexample> falsify_consequence(const std::vector<Generic>& premises,
                                                  const Generic& conclusion,
                                                  std::size_t samples, std::uint64_t seed,
                                                  const FalsifyOptions& opts = {});

std::optional<Counterexample> falsify_consequence_serial(
    const std::vector<Generic>& premises, const Generic& conclusion, std::size_t samples,
    std::uint64_t seed, const FalsifyOptions& opts = {});

}  // namespace nabla
