#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nabla/formula.hpp"
#include "nabla/semantics.hpp"

namespace nabla {

enum class Lemma { Last, Corollary, Translation, LastLocal, Soundness, QuantifierBound };

const char* to_string(Lemma l);
std::optional<Lemma> lemma_from_string(std::string_view s);
const std::vector<Lemma>& all_lemmas();

struct FuzzOptions {
  Lemma lemma = Lemma::Translation;
  std::size_t samples = 1000;
  std::uint64_t seed = 7;
  /// Formula complexity cap.
  std::size_t max_size = 6;
  std::size_t max_stem = 4;
  std::size_t max_period = 3;
  /// Largest position or sequence entry.
  Nat max_position = 10;
  std::size_t max_prefix = 3;
  /// Falsifier samples per derivation (soundness).
  std::size_t falsify_samples = 200;
  bool parallel = true;
  /// Test-only: evaluate one side on the model shifted by one position.
  bool inject_bug = false;
};

/// One evaluated instance. `seq` is evaluated on the left, `other` on the
/// right; what the two sides are depends on the lemma.
struct FuzzCase {
  LassoModel model{0, 1, {{}}};
  std::optional<Formula> formula;
  ObservationSequence seq;
  ObservationSequence other;
  /// last-local: 1 for local formulas (last element), 2 for any (last two).
  int clause = 0;
  bool left = false;
  bool right = false;
  // soundness
  std::string derivation;
  std::vector<std::string> premises;
  std::string conclusion;
  Interpretation interpretation;
};

struct FuzzReport {
  FuzzOptions options;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::optional<std::size_t> first_failure;
  /// Minimized failing instance of the first failing sample.
  std::optional<FuzzCase> counterexample;
  std::size_t shrink_steps = 0;

  bool ok() const { return failures == 0; }
};

FuzzReport run_fuzz(const FuzzOptions& opts);

nlohmann::json to_json(const FuzzReport& r);
std::string format_fuzz(const FuzzReport& r);

}  // namespace nabla
