#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nabla/formula.hpp"
#include "nabla/semantics.hpp"

namespace nabla {

/// Independent stream seed for sample `index` of a run seeded with `seed`.
std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index);

/// Seeded generator with platform-independent bounded draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);
  bool coin() { return (engine_() >> 11) & 1U; }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[uniform(0, xs.size() - 1)];
  }

 private:
  std::mt19937_64 engine_;
};

const std::vector<std::string>& default_alphabet();

/// Each valuation cell is an independent fair coin per symbol.
LassoModel random_model(Rng& rng, std::size_t max_stem, std::size_t max_period,
                        const std::vector<std::string>& alphabet = default_alphabet());

/// Random LTL formula (core syntax) with complexity at most `max_complexity`.
/// Constructors are drawn with equal weight while budget remains.
Formula random_ltl(Rng& rng, std::size_t max_complexity,
                   const std::vector<std::string>& alphabet = default_alphabet());
/// Random history formula (core syntax, any placement of H).
Formula random_hist(Rng& rng, std::size_t max_complexity,
                    const std::vector<std::string>& alphabet = default_alphabet());
/// Random formula from the local grammar (H only under G or X).
Formula random_local(Rng& rng, std::size_t max_complexity,
                     const std::vector<std::string>& alphabet = default_alphabet());

ObservationSequence random_sequence(Rng& rng, std::size_t min_len, std::size_t max_len,
                                    Nat max_value);

}  // namespace nabla
