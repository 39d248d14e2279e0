#include "nabla/translate.hpp"

#include <stdexcept>

namespace nabla {

Formula translate(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Bottom:
      return f;
    case Op::Implies: return Formula::implies(translate(f.lhs()), translate(f.rhs()));
    case Op::Always: return Formula::always(translate(f.arg()));
    case Op::Next: return Formula::next(translate(f.arg()));
    case Op::Not: return Formula::negation(translate(f.arg()));
    case Op::Or: return Formula::disj(translate(f.lhs()), translate(f.rhs()));
    case Op::And: return Formula::conj(translate(f.lhs()), translate(f.rhs()));
    case Op::Sometime: return Formula::sometime(translate(f.arg()));
    case Op::Until: {
      Formula a = translate(f.lhs());
      Formula b = translate(f.rhs());
      return Formula::disj(
          b, Formula::sometime(Formula::conj(Formula::next(b), Formula::hist(a))));
    }
    case Op::Hist: break;
  }
  throw std::invalid_argument("translate: history operator in LTL input: " + print(f));
}

std::set<Formula, CoreLess> translate_set(const std::vector<Formula>& ltl) {
  std::set<Formula, CoreLess> out;
  for (const Formula& f : ltl) out.insert(translate(f));
  return out;
}

bool matches_translation(const Formula& source, const Formula& candidate) {
  if (!is_ltl(source)) return false;
  return desugar(translate(source)).identical(desugar(candidate));
}

}  // namespace nabla
