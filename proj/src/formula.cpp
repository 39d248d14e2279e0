#include "nabla/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace nabla {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool sugar_op(Op op) {
  return op == Op::Not || op == Op::Or || op == Op::And || op == Op::Sometime;
}

}  // namespace

Formula Formula::make(Op op, std::string name, const Formula* lhs,
                      const Formula* rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->name = std::move(name);
  std::size_t h = mix(std::hash<int>{}(static_cast<int>(op)),
                      std::hash<std::string>{}(node->name));
  node->core = !sugar_op(op);
  if (lhs) {
    node->lhs = std::make_shared<const Formula>(*lhs);
    node->size += lhs->size();
    node->core = node->core && lhs->is_core();
    h = mix(h, lhs->hash());
  }
  if (rhs) {
    node->rhs = std::make_shared<const Formula>(*rhs);
    node->size += rhs->size();
    node->core = node->core && rhs->is_core();
    h = mix(h, rhs->hash());
  }
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::atom(std::string name) {
  return make(Op::Atom, std::move(name), nullptr, nullptr);
}
Formula Formula::bottom() { return make(Op::Bottom, "", nullptr, nullptr); }
Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(Op::Implies, "", &lhs, &rhs);
}
Formula Formula::always(Formula f) { return make(Op::Always, "", &f, nullptr); }
Formula Formula::next(Formula f) { return make(Op::Next, "", &f, nullptr); }
Formula Formula::until(Formula lhs, Formula rhs) {
  return make(Op::Until, "", &lhs, &rhs);
}
Formula Formula::hist(Formula f) { return make(Op::Hist, "", &f, nullptr); }
Formula Formula::negation(Formula f) { return make(Op::Not, "", &f, nullptr); }
Formula Formula::disj(Formula lhs, Formula rhs) {
  return make(Op::Or, "", &lhs, &rhs);
}
Formula Formula::conj(Formula lhs, Formula rhs) {
  return make(Op::And, "", &lhs, &rhs);
}
Formula Formula::sometime(Formula f) {
  return make(Op::Sometime, "", &f, nullptr);
}

bool Formula::is_binary() const {
  switch (op()) {
    case Op::Implies:
    case Op::Until:
    case Op::Or:
    case Op::And:
      return true;
    default:
      return false;
  }
}

bool Formula::is_unary() const {
  switch (op()) {
    case Op::Always:
    case Op::Next:
    case Op::Hist:
    case Op::Not:
    case Op::Sometime:
      return true;
    default:
      return false;
  }
}

bool Formula::is_sugar() const { return sugar_op(op()); }

bool Formula::identical(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (op() != other.op() || hash() != other.hash() || size() != other.size())
    return false;
  if (op() == Op::Atom) return name() == other.name();
  if (is_binary()) return lhs().identical(other.lhs()) && rhs().identical(other.rhs());
  if (is_unary()) return arg().identical(other.arg());
  return true;
}

bool Formula::operator==(const Formula& other) const {
  if (is_core() && other.is_core()) return identical(other);
  return desugar(*this).identical(desugar(other));
}

bool FormulaLess::operator()(const Formula& a, const Formula& b) const {
  if (a.op() != b.op()) return a.op() < b.op();
  if (a.op() == Op::Atom) return a.name() < b.name();
  if (a.is_binary()) {
    if (!a.lhs().identical(b.lhs())) return (*this)(a.lhs(), b.lhs());
    return (*this)(a.rhs(), b.rhs());
  }
  if (a.is_unary()) return (*this)(a.arg(), b.arg());
  return false;
}

bool CoreLess::operator()(const Formula& a, const Formula& b) const {
  return FormulaLess{}(desugar(a), desugar(b));
}

std::size_t FormulaHash::operator()(const Formula& f) const {
  return f.is_core() ? f.hash() : desugar(f).hash();
}

// --- parsing ---------------------------------------------------------------

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected,
                       const std::string& detail)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "parse error at offset " << offset << ": " << detail;
        if (!expected.empty()) {
          os << " (expected ";
          for (std::size_t i = 0; i < expected.size(); ++i)
            os << (i ? ", " : "") << expected[i];
          os << ")";
        }
        return os.str();
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool reserved(std::string_view w) {
  return w == "bot" || w == "G" || w == "X" || w == "F" || w == "H" || w == "U";
}

class Parser {
 public:
  Parser(std::string_view text, std::size_t pos, Language lang)
      : text_(text), pos_(pos), lang_(lang) {}

  Formula formula() {
    skip_ws();
    if (at_end()) fail({"identifier", "bot", "("}, "unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      return parenthesized();
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      std::string word = read_word();
      if (word == "bot") return Formula::bottom();
      if (reserved(word))
        fail(start, {"identifier", "bot", "("},
             "operator '" + word + "' outside parentheses");
      return Formula::atom(std::move(word));
    }
    fail({"identifier", "bot", "("}, std::string("unexpected character '") + c + "'");
  }

  std::size_t pos() const { return pos_; }

 private:
  Formula parenthesized() {
    skip_ws();
    if (!at_end()) {
      std::size_t start = pos_;
      char c = text_[pos_];
      if (c == '~') {
        ++pos_;
        Formula f = formula();
        close();
        return Formula::negation(std::move(f));
      }
      if (ident_start(c)) {
        std::size_t save = pos_;
        std::string word = read_word();
        Op op = Op::Atom;
        if (word == "G") op = Op::Always;
        else if (word == "X") op = Op::Next;
        else if (word == "F") op = Op::Sometime;
        else if (word == "H") op = Op::Hist;
        if (op == Op::Hist && lang_ == Language::Ltl)
          fail(start, {"G", "X", "F", "~", "formula"},
               "history operator 'H' is not part of LTL");
        if (op != Op::Atom) {
          Formula f = formula();
          close();
          switch (op) {
            case Op::Always: return Formula::always(std::move(f));
            case Op::Next: return Formula::next(std::move(f));
            case Op::Sometime: return Formula::sometime(std::move(f));
            default: return Formula::hist(std::move(f));
          }
        }
        pos_ = save;
      }
    }
    Formula lhs = formula();
    skip_ws();
    std::size_t op_pos = pos_;
    Op op;
    if (text_.substr(pos_, 2) == "->") {
      op = Op::Implies;
      pos_ += 2;
    } else if (!at_end() && text_[pos_] == '|') {
      op = Op::Or;
      ++pos_;
    } else if (!at_end() && text_[pos_] == '&') {
      op = Op::And;
      ++pos_;
    } else if (!at_end() && text_[pos_] == 'U' &&
               (pos_ + 1 == text_.size() || !ident_char(text_[pos_ + 1]))) {
      if (lang_ == Language::Hist)
        fail(op_pos, {"->", "|", "&"}, "until operator 'U' is not part of the history language");
      op = Op::Until;
      ++pos_;
    } else {
      std::vector<std::string> exp{"->", "|", "&"};
      if (lang_ == Language::Ltl) exp.push_back("U");
      fail(exp, "expected binary operator");
    }
    Formula rhs = formula();
    close();
    switch (op) {
      case Op::Implies: return Formula::implies(std::move(lhs), std::move(rhs));
      case Op::Or: return Formula::disj(std::move(lhs), std::move(rhs));
      case Op::And: return Formula::conj(std::move(lhs), std::move(rhs));
      default: return Formula::until(std::move(lhs), std::move(rhs));
    }
  }

  void close() {
    skip_ws();
    if (at_end() || text_[pos_] != ')') fail({")"}, "missing closing parenthesis");
    ++pos_;
  }

  std::string read_word() {
    std::size_t start = pos_;
    while (!at_end() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) {
    fail(pos_, std::move(expected), msg);
  }
  [[noreturn]] void fail(std::size_t at, std::vector<std::string> expected,
                         const std::string& msg) {
    throw ParseError(at, std::move(expected), msg);
  }

  std::string_view text_;
  std::size_t pos_;
  Language lang_;
};

Formula parse_whole(std::string_view text, Language lang) {
  std::size_t pos = 0;
  Formula f = parse_formula_prefix(text, pos, lang);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw ParseError(pos, {"end of input"}, "trailing input");
  return f;
}

}  // namespace

Formula parse_formula_prefix(std::string_view text, std::size_t& pos, Language lang) {
  Parser p(text, pos, lang);
  Formula f = p.formula();
  pos = p.pos();
  return f;
}

Formula parse_ltl(std::string_view text) { return parse_whole(text, Language::Ltl); }
Formula parse_h(std::string_view text) { return parse_whole(text, Language::Hist); }

// --- printing and structural functions --------------------------------------

namespace {

void print_to(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Atom: out += f.name(); return;
    case Op::Bottom: out += "bot"; return;
    default: break;
  }
  out += '(';
  if (f.is_unary()) {
    switch (f.op()) {
      case Op::Always: out += "G "; break;
      case Op::Next: out += "X "; break;
      case Op::Hist: out += "H "; break;
      case Op::Sometime: out += "F "; break;
      default: out += "~ "; break;
    }
    print_to(f.arg(), out);
  } else {
    print_to(f.lhs(), out);
    switch (f.op()) {
      case Op::Implies: out += " -> "; break;
      case Op::Or: out += " | "; break;
      case Op::And: out += " & "; break;
      default: out += " U "; break;
    }
    print_to(f.rhs(), out);
  }
  out += ')';
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_to(f, out);
  return out;
}

Formula desugar(const Formula& f) {
  if (f.is_core()) return f;
  auto neg = [](Formula a) { return Formula::implies(std::move(a), Formula::bottom()); };
  switch (f.op()) {
    case Op::Implies: return Formula::implies(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Until: return Formula::until(desugar(f.lhs()), desugar(f.rhs()));
    case Op::Always: return Formula::always(desugar(f.arg()));
    case Op::Next: return Formula::next(desugar(f.arg()));
    case Op::Hist: return Formula::hist(desugar(f.arg()));
    case Op::Not: return neg(desugar(f.arg()));
    case Op::Or: return Formula::implies(neg(desugar(f.lhs())), desugar(f.rhs()));
    case Op::And: {
      Formula a = desugar(f.lhs());
      Formula b = desugar(f.rhs());
      return neg(Formula::implies(neg(neg(a)), neg(b)));
    }
    case Op::Sometime: return neg(Formula::always(neg(desugar(f.arg()))));
    default: return f;
  }
}

namespace {

std::size_t count_ops(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Bottom: return 0;
    case Op::Implies:
    case Op::Until: return 1 + count_ops(f.lhs()) + count_ops(f.rhs());
    default: return 1 + count_ops(f.arg());
  }
}

template <typename Pred>
std::size_t depth_of(const Formula& f, Pred counts) {
  std::size_t self = counts(f.op()) ? 1 : 0;
  if (f.is_binary()) return self + std::max(depth_of(f.lhs(), counts), depth_of(f.rhs(), counts));
  if (f.is_unary()) return self + depth_of(f.arg(), counts);
  return 0;
}

}  // namespace

std::size_t complexity(const Formula& f) { return count_ops(desugar(f)); }

std::size_t temporal_depth(const Formula& f) {
  return depth_of(desugar(f), [](Op op) { return op == Op::Always || op == Op::Next; });
}

std::size_t hist_depth(const Formula& f) {
  return depth_of(f, [](Op op) { return op == Op::Hist; });
}

bool contains_op(const Formula& f, Op op) {
  if (f.op() == op) return true;
  if (f.is_binary()) return contains_op(f.lhs(), op) || contains_op(f.rhs(), op);
  if (f.is_unary()) return contains_op(f.arg(), op);
  return false;
}

bool is_ltl(const Formula& f) { return !contains_op(f, Op::Hist); }
bool is_hist_formula(const Formula& f) { return !contains_op(f, Op::Until); }

bool is_propositional(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Bottom: return true;
    case Op::Implies:
    case Op::Or:
    case Op::And: return is_propositional(f.lhs()) && is_propositional(f.rhs());
    case Op::Not: return is_propositional(f.arg());
    default: return false;
  }
}

namespace {
void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Atom) out.insert(f.name());
  if (f.is_binary()) {
    collect_atoms(f.lhs(), out);
    collect_atoms(f.rhs(), out);
  } else if (f.is_unary()) {
    collect_atoms(f.arg(), out);
  }
}
}  // namespace

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

// Both grammars are read off the desugared tree; Until never belongs to them.
bool in_local_grammar(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Bottom: return true;
    case Op::Implies: return in_local_grammar(f.lhs()) && in_local_grammar(f.rhs());
    case Op::Always:
    case Op::Next: return in_hist_grammar(f.arg());
    default: return false;
  }
}

bool in_hist_grammar(const Formula& f) {
  if (in_local_grammar(f)) return true;
  switch (f.op()) {
    case Op::Implies: return in_hist_grammar(f.lhs()) && in_hist_grammar(f.rhs());
    case Op::Hist: return in_hist_grammar(f.arg());
    default: return false;
  }
}

LocalClass classify_local(const Formula& f) {
  Formula core = desugar(f);
  if (in_local_grammar(core)) return LocalClass::Local;
  if (in_hist_grammar(core)) return LocalClass::HistOnly;
  return LocalClass::Neither;
}

const char* to_string(LocalClass c) {
  switch (c) {
    case LocalClass::Local: return "Local";
    case LocalClass::HistOnly: return "HistOnly";
    default: return "Neither";
  }
}

}  // namespace nabla
