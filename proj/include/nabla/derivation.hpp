#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nabla/formula.hpp"
#include "nabla/judgment.hpp"

namespace nabla {

using NodeId = long long;
using LabelPair = std::pair<Label, Label>;

struct Assumption {
  Generic judgment;
};

/// A rule application. Premises are referenced positionally by node id, in
/// the order the rule lists them. Discharges name assumption ids.
struct Application {
  std::string rule;
  Lwff conclusion;
  std::vector<NodeId> premises;
  std::vector<NodeId> discharges;
  std::optional<LabelPair> subst;
};

struct Step {
  NodeId id;
  std::variant<Assumption, Application> body;

  bool is_assumption() const { return std::holds_alternative<Assumption>(body); }
  const Assumption& assumption() const { return std::get<Assumption>(body); }
  const Application& application() const { return std::get<Application>(body); }
};

/// A derivation is a table of steps plus a root. Steps may be shared by
/// several parents, so the structure is a DAG read as the tree it unfolds to.
struct Derivation {
  std::map<NodeId, Step> steps;
  NodeId root = 0;
  /// LTL source formulas attached to assumption ids or to the root.
  std::map<NodeId, Formula> sources;

  const Step& at(NodeId id) const;
  bool contains(NodeId id) const { return steps.count(id) > 0; }
  NodeId max_id() const { return steps.empty() ? 0 : steps.rbegin()->first; }
  /// Judgment proved by a step: the assumption itself or the conclusion.
  Generic judgment(NodeId id) const;
};

/// The 18 primitive rule names, in the order of the rule table.
const std::vector<std::string>& primitive_rules();
/// The derived rule names accepted by the script loader.
const std::vector<std::string>& derived_rules();
bool is_primitive_rule(const std::string& name);
bool is_derived_rule(const std::string& name);

/// Incremental construction with automatic ids.
class Builder {
 public:
  explicit Builder(NodeId first_id = 1) : next_(first_id) {}
  /// Continues numbering after the largest id of `base`, whose steps are kept.
  explicit Builder(const Derivation& base);

  NodeId assume(Generic g);
  NodeId apply(std::string rule, Lwff conclusion, std::vector<NodeId> premises,
               std::vector<NodeId> discharges = {}, std::optional<LabelPair> subst = {});
  /// Inserts a step with a caller-chosen id.
  void put(Step step);

  Generic judgment(NodeId id) const { return d_.judgment(id); }
  Lwff conclusion(NodeId id) const;
  NodeId fresh_id() { return next_++; }
  const Derivation& peek() const { return d_; }
  Derivation finish(NodeId root);

 private:
  Derivation d_;
  NodeId next_;
};

}  // namespace nabla
