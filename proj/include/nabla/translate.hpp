#pragma once

#include <set>

#include "nabla/formula.hpp"

namespace nabla {

/// Maps an LTL formula to its history-language image. Atoms, bot, ->, G and X
/// are kept; `(A U B)` becomes `(B' | (F ((X B') & (H A'))))` where A', B' are
/// the images of A and B. Sugar nodes in the input are kept homomorphically,
/// which commutes with desugaring.
Formula translate(const Formula& ltl);

/// Element-wise image; images that agree after desugaring are merged.
std::set<Formula, CoreLess> translate_set(const std::vector<Formula>& ltl);

/// True iff desugar(translate(source)) is structurally equal to
/// desugar(candidate).
bool matches_translation(const Formula& source, const Formula& candidate);

}  // namespace nabla
