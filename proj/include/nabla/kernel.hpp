#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "nabla/derivation.hpp"
#include "nabla/judgment.hpp"

namespace nabla {

enum class Reason {
  ShapeMismatch,
  FreshnessViolation,
  NotLocalFormula,
  BadDischarge,
  UnknownRule,
  SequenceMismatch,
};

const char* to_string(Reason r);
std::optional<Reason> reason_from_string(std::string_view s);

struct CheckReport {
  bool accepted = false;
  // Accepted
  GenericSet open_assumptions;
  std::optional<Lwff> conclusion;
  // Rejected
  NodeId node = 0;
  Reason reason = Reason::ShapeMismatch;
  std::string message;

  bool closed() const { return accepted && open_assumptions.empty(); }
};

/// Checks every step reachable from the root against its rule. The first
/// failing step in premise-first order is reported.
CheckReport check(const Derivation& d);

/// Open assumptions by id for the subderivation rooted at `id`. Does not
/// validate rules; discharged ids are removed from hypothetical premises only.
std::map<NodeId, Generic> open_assumption_ids(const Derivation& d, NodeId id);
GenericSet open_assumptions(const Derivation& d);

class NonInjectiveRenaming : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Renames labels pointwise; labels missing from `mapping` are kept.
/// Throws NonInjectiveRenaming if two labels of d end up identified.
Derivation rename_labels(const Derivation& d, const std::map<Label, Label>& mapping);

std::set<Label> labels_of(const Derivation& d);

class MissingAnnotation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SourceMap = std::map<Generic, Formula, GenericLess>;

/// Source map built from the derivation's own annotations.
SourceMap sources_of(const Derivation& d);

/// True iff the conclusion and every open assumption are lwffs `b : C` for a
/// single label b, each matching the translation of its annotated source.
/// Throws MissingAnnotation if an open lwff assumption or the conclusion has
/// no source. Precondition: check(d) accepted.
bool is_ltl_derivation(const Derivation& d, const SourceMap& sources);

/// Hypothetical premise positions and their discharge patterns, as used by
/// the checker. Exposed for the structural audit in tests.
std::vector<std::size_t> hypothetical_premises(const std::string& rule);

}  // namespace nabla
