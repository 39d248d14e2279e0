#include "nabla/random.hpp"

namespace nabla {

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo + 1;
  return lo + engine_() % span;
}

const std::vector<std::string>& default_alphabet() {
  static const std::vector<std::string> kAlphabet{"p", "q", "r"};
  return kAlphabet;
}

LassoModel random_model(Rng& rng, std::size_t max_stem, std::size_t max_period,
                        const std::vector<std::string>& alphabet) {
  std::size_t stem = rng.uniform(0, max_stem);
  std::size_t period = rng.uniform(1, std::max<std::size_t>(1, max_period));
  std::vector<std::set<std::string>> val(stem + period);
  for (auto& cell : val)
    for (const auto& a : alphabet)
      if (rng.coin()) cell.insert(a);
  return LassoModel(stem, period, std::move(val));
}

namespace {

enum class Shape { Ltl, Hist, Local, HistGrammar };

Formula leaf(Rng& rng, const std::vector<std::string>& alphabet) {
  // Bottom takes one share next to the atoms.
  std::uint64_t k = rng.uniform(0, alphabet.size());
  if (k == alphabet.size()) return Formula::bottom();
  return Formula::atom(alphabet[k]);
}

// `budget` bounds the number of operator nodes still to be placed.
Formula grow(Rng& rng, std::size_t budget, Shape shape,
             const std::vector<std::string>& alphabet) {
  if (budget == 0) return leaf(rng, alphabet);
  std::vector<Op> ops{Op::Implies, Op::Always, Op::Next};
  if (shape == Shape::Ltl) ops.push_back(Op::Until);
  if (shape == Shape::Hist || shape == Shape::HistGrammar) ops.push_back(Op::Hist);
  // The draw includes stopping early at a leaf.
  std::uint64_t k = rng.uniform(0, ops.size());
  if (k == ops.size()) return leaf(rng, alphabet);
  Op op = ops[k];
  std::size_t rest = budget - 1;
  // Under G and X the local grammar admits history formulas.
  Shape inner = shape;
  if (shape == Shape::Local && (op == Op::Always || op == Op::Next)) inner = Shape::HistGrammar;
  switch (op) {
    case Op::Implies:
    case Op::Until: {
      std::size_t left = rng.uniform(0, rest);
      Formula a = grow(rng, left, shape, alphabet);
      Formula b = grow(rng, rest - left, shape, alphabet);
      return op == Op::Implies ? Formula::implies(a, b) : Formula::until(a, b);
    }
    case Op::Always: return Formula::always(grow(rng, rest, inner, alphabet));
    case Op::Next: return Formula::next(grow(rng, rest, inner, alphabet));
    default: return Formula::hist(grow(rng, rest, inner, alphabet));
  }
}

}  // namespace

Formula random_ltl(Rng& rng, std::size_t max_complexity,
                   const std::vector<std::string>& alphabet) {
  return grow(rng, rng.uniform(0, max_complexity), Shape::Ltl, alphabet);
}

Formula random_hist(Rng& rng, std::size_t max_complexity,
                    const std::vector<std::string>& alphabet) {
  return grow(rng, rng.uniform(0, max_complexity), Shape::Hist, alphabet);
}

Formula random_local(Rng& rng, std::size_t max_complexity,
                     const std::vector<std::string>& alphabet) {
  return grow(rng, rng.uniform(0, max_complexity), Shape::Local, alphabet);
}

ObservationSequence random_sequence(Rng& rng, std::size_t min_len, std::size_t max_len,
                                    Nat max_value) {
  std::size_t len = rng.uniform(std::max<std::size_t>(1, min_len), max_len);
  ObservationSequence seq(len);
  for (auto& n : seq) n = rng.uniform(0, max_value);
  return seq;
}

}  // namespace nabla
