#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nabla {

/// Node kinds shared by both object languages. `Until` only occurs in LTL
/// formulas and `Hist` only in history formulas; the last four are sugar.
enum class Op {
  Atom,
  Bottom,
  Implies,
  Always,
  Next,
  Until,
  Hist,
  Not,
  Or,
  And,
  Sometime,
};

enum class Language { Ltl, Hist };

/// Immutable formula tree with shared subterms.
///
/// operator== is structural equality after desugaring: `(~ p)` and
/// `(p -> bot)` compare equal. Use `identical` for raw tree equality.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula bottom();
  static Formula implies(Formula lhs, Formula rhs);
  static Formula always(Formula f);
  static Formula next(Formula f);
  static Formula until(Formula lhs, Formula rhs);
  static Formula hist(Formula f);
  static Formula negation(Formula f);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula sometime(Formula f);

  Op op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  /// Only child of unary nodes, left child of binary ones.
  const Formula& lhs() const { return *node_->lhs; }
  const Formula& rhs() const { return *node_->rhs; }
  const Formula& arg() const { return *node_->lhs; }

  bool is_binary() const;
  bool is_unary() const;
  bool is_sugar() const;
  /// True if no sugar node occurs anywhere in the tree.
  bool is_core() const { return node_->core; }
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  bool identical(const Formula& other) const;
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node {
    Op op;
    std::string name;
    std::shared_ptr<const Formula> lhs;
    std::shared_ptr<const Formula> rhs;
    std::size_t size = 1;
    std::size_t hash = 0;
    bool core = true;
  };

  static Formula make(Op op, std::string name, const Formula* lhs,
                      const Formula* rhs);

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Total order on raw trees; used for deterministic containers.
struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const;
};

/// Orders by the desugared tree, so sugared and core spellings of one formula
/// are the same key.
struct CoreLess {
  bool operator()(const Formula& a, const Formula& b) const;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string& detail);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Parses one LTL formula (sugar allowed, `H` rejected).
Formula parse_ltl(std::string_view text);
/// Parses one history formula (sugar allowed, `U` rejected).
Formula parse_h(std::string_view text);

/// Parses a formula starting at `pos` and advances `pos` past it. Trailing
/// input is left alone.
Formula parse_formula_prefix(std::string_view text, std::size_t& pos,
                             Language lang);

/// Fully parenthesized concrete syntax; parse(print(f)) reproduces f.
std::string print(const Formula& f);

/// Rewrites the four abbreviations into core connectives:
/// ~A = A -> bot, A | B = ~A -> B, A & B = ~(~A | ~B), F A = ~G~A.
Formula desugar(const Formula& f);

/// Number of ->, G, X, U and H nodes of the desugared formula.
std::size_t complexity(const Formula& f);

/// Nesting depth of G and X nodes (after desugaring).
std::size_t temporal_depth(const Formula& f);
/// Nesting depth of history nodes.
std::size_t hist_depth(const Formula& f);

bool contains_op(const Formula& f, Op op);
bool is_ltl(const Formula& f);
bool is_hist_formula(const Formula& f);
/// Atoms, bottom and the propositional connectives (sugar included).
bool is_propositional(const Formula& f);

std::set<std::string> atoms(const Formula& f);

enum class LocalClass { Local, HistOnly, Neither };

/// Places a history formula in the `last`-rule grammar:
///   Al  ::= p | bot | Al -> Al | G Ah | X Ah
///   Ah  ::= Al | Ah -> Ah | H Ah
/// Local means derivable from Al; HistOnly means Ah but not Al.
LocalClass classify_local(const Formula& f);

bool in_local_grammar(const Formula& f);
bool in_hist_grammar(const Formula& f);

const char* to_string(LocalClass c);

}  // namespace nabla
