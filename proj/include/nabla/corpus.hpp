#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nabla/derivation.hpp"
#include "nabla/kernel.hpp"

namespace nabla {

/// Result of parsing a script, expanding derived rules and checking it.
struct ScriptVerdict {
  enum class Stage { Parse, Schema, Kernel };
  Stage stage = Stage::Parse;
  std::string error;  // parse or schema message
  NodeId schema_node = 0;
  CheckReport report;
  Derivation derivation;  // primitive steps only, when stage is Kernel
  bool ltl = false;
  std::string ltl_error;

  bool accepted() const { return stage == Stage::Kernel && report.accepted; }
  /// "Accepted", a kernel reason code, "SchemaMismatch" or "ParseError".
  std::string verdict() const;
};

ScriptVerdict check_script_text(std::string_view text);
ScriptVerdict check_script_file(const std::string& path);

/// A2 A3 A4 A5 A6 A7L A7R A8, each stored as `<name>.ndp`.
const std::vector<std::string>& corpus_entry_names();

/// The three tautology instances standing in for A1.
struct TautologyInstance {
  std::string name;
  std::string formula;
};
const std::vector<TautologyInstance>& a1_instances();

struct MutationEdit {
  enum class Kind { Rename, Replace, Append, Root };
  Kind kind;
  std::string from, to;       // Rename
  std::vector<NodeId> only;   // Rename: restrict to these step ids
  NodeId id = 0;              // Replace, Root
  std::string line;           // Replace, Append
};

struct MutationFixture {
  std::string name;
  std::string base;
  std::string expected;
  std::string description;
  std::vector<MutationEdit> edits;
};

/// Reads the fixture manifest. Throws std::runtime_error with a line number.
std::vector<MutationFixture> parse_mutations(std::string_view text);
std::string apply_mutation(const MutationFixture& m, const std::string& script);

struct EntryResult {
  std::string name;
  bool present = false;
  std::string verdict;
  bool closed = false;
  bool ltl = false;
  std::size_t steps = 0;
  std::string detail;
  bool ok() const { return present && verdict == "Accepted" && closed && ltl; }
};

struct MutationResult {
  std::string name;
  std::string base;
  std::string description;
  std::string expected;
  std::string actual;
  std::string detail;
  bool ok() const { return actual == expected; }
};

struct CorpusReport {
  std::vector<EntryResult> entries;
  std::vector<EntryResult> tautologies;
  std::vector<MutationResult> mutations;
  std::string manifest_error;
  double seconds = 0;

  bool ok() const;
};

CorpusReport run_corpus(const std::string& dir);

/// Accepted, closed corpus entries (expanded) and A1 tautology proofs, each
/// carrying its LTL source on the root.
std::vector<std::pair<std::string, Derivation>> corpus_proofs(const std::string& dir);

struct ClosureTrialReport {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::vector<std::string> failures;
  bool ok() const { return passed == trials; }
};

/// Each trial starts from a corpus or tautology proof and applies one to
/// three of mp_compose (against a tautology instance with that proof's
/// formula as antecedent), nec_g and nec_x. A trial passes if the result is
/// accepted, closed and an LTL-derivation.
ClosureTrialReport run_closure_trials(const std::string& dir, std::size_t trials,
                                      std::uint64_t seed);

std::string format_corpus(const CorpusReport& r);
nlohmann::json to_json(const CorpusReport& r);

}  // namespace nabla
