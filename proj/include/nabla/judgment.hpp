#pragma once

#include <compare>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nabla/formula.hpp"

namespace nabla {

struct Label {
  std::string name;

  auto operator<=>(const Label&) const = default;
  bool operator==(const Label&) const = default;
};

/// Nonempty sequence of labels; repetitions allowed.
using LabelSeq = std::vector<Label>;

/// Labeled formula `seq : formula`. Equality compares formulas desugared.
struct Lwff {
  LabelSeq seq;
  Formula formula;

  bool operator==(const Lwff& other) const {
    return seq == other.seq && formula == other.formula;
  }
};

enum class RelKind { Le, Succ };

/// Relational formula `le(lhs,rhs)` or `succ(lhs,rhs)`.
struct Rwff {
  RelKind kind;
  Label lhs;
  Label rhs;

  bool operator==(const Rwff&) const = default;
};

using Generic = std::variant<Lwff, Rwff>;

inline Rwff le(Label a, Label b) { return {RelKind::Le, std::move(a), std::move(b)}; }
inline Rwff succ(Label a, Label b) { return {RelKind::Succ, std::move(a), std::move(b)}; }

bool operator==(const Generic& a, const Generic& b);

/// Strict weak order on generic formulas (formulas compared desugared).
struct GenericLess {
  bool operator()(const Generic& a, const Generic& b) const;
};

using GenericSet = std::set<Generic, GenericLess>;

std::string print(const Label& l);
std::string print(const LabelSeq& seq);
std::string print(const Lwff& w);
std::string print(const Rwff& r);
std::string print(const Generic& g);

/// Labels occurring in a judgment, in rwff endpoints or sequence positions.
void collect_labels(const Generic& g, std::set<Label>& out);
bool mentions(const Generic& g, const Label& l);

/// Replaces every occurrence of `from` by `to`; formulas are untouched.
Generic subst_label(const Generic& g, const Label& from, const Label& to);
Lwff subst_label(const Lwff& w, const Label& from, const Label& to);
Rwff subst_label(const Rwff& r, const Label& from, const Label& to);

bool is_label_name(std::string_view s);

}  // namespace nabla
