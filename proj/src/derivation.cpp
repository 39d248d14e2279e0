#include "nabla/derivation.hpp"

#include <algorithm>

namespace nabla {

const Step& Derivation::at(NodeId id) const {
  auto it = steps.find(id);
  if (it == steps.end()) throw std::out_of_range("no step with id " + std::to_string(id));
  return it->second;
}

Generic Derivation::judgment(NodeId id) const {
  const Step& s = at(id);
  if (s.is_assumption()) return s.assumption().judgment;
  return s.application().conclusion;
}

const std::vector<std::string>& primitive_rules() {
  static const std::vector<std::string> kRules{
      "botE", "impI", "impE",   "GI",     "GE",   "XI",      "XE",     "histI", "histE",
      "last", "serS", "linS",   "reflLe", "transLe", "eqLe", "splitLe", "baseLe", "ind"};
  return kRules;
}

const std::vector<std::string>& derived_rules() {
  static const std::vector<std::string> kRules{"andI", "andE1", "andE2", "orIl",
                                               "orIr", "orE",   "FI",    "FE"};
  return kRules;
}

bool is_primitive_rule(const std::string& name) {
  const auto& r = primitive_rules();
  return std::find(r.begin(), r.end(), name) != r.end();
}

bool is_derived_rule(const std::string& name) {
  const auto& r = derived_rules();
  return std::find(r.begin(), r.end(), name) != r.end();
}

Builder::Builder(const Derivation& base) : d_(base), next_(base.max_id() + 1) {}

NodeId Builder::assume(Generic g) {
  NodeId id = next_++;
  d_.steps.emplace(id, Step{id, Assumption{std::move(g)}});
  return id;
}

NodeId Builder::apply(std::string rule, Lwff conclusion, std::vector<NodeId> premises,
                      std::vector<NodeId> discharges, std::optional<LabelPair> subst) {
  NodeId id = next_++;
  d_.steps.emplace(id, Step{id, Application{std::move(rule), std::move(conclusion),
                                            std::move(premises), std::move(discharges),
                                            std::move(subst)}});
  return id;
}

void Builder::put(Step step) {
  next_ = std::max(next_, step.id + 1);
  d_.steps.insert_or_assign(step.id, std::move(step));
}

Lwff Builder::conclusion(NodeId id) const {
  Generic g = d_.judgment(id);
  if (const auto* w = std::get_if<Lwff>(&g)) return *w;
  throw std::logic_error("step " + std::to_string(id) + " proves a relational formula");
}

Derivation Builder::finish(NodeId root) {
  d_.root = root;
  return d_;
}

}  // namespace nabla
