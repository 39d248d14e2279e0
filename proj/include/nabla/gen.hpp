#pragma once

#include <string>
#include <vector>

#include "nabla/derivation.hpp"
#include "nabla/random.hpp"

namespace nabla {

struct DerivationGenOptions {
  std::size_t moves = 60;
  /// Rule applications required under the root.
  std::size_t min_rules = 4;
  std::size_t max_formula = 2;
  std::vector<std::string> alphabet{"p", "q"};
};

/// Random derivation accepted by the kernel. Built forward: each move
/// proposes one rule application over earlier steps (adding the assumptions
/// it needs) and is kept only if the kernel accepts the new step.
/// Covers every primitive rule except splitLe and ind.
Derivation random_derivation(Rng& rng, const DerivationGenOptions& opts = {});

/// Steps reachable from the root.
Derivation prune(const Derivation& d);

}  // namespace nabla
