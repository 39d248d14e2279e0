// nabla: proof checker, translator and semantic fuzzer for the labeled
// natural deduction calculus with the history operator H.
//
// Exit codes: 0 ok, 1 rejected / failed, 2 usage or parse error,
// 3 counterexample found by `fuzz`.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nabla/corpus.hpp"
#include "nabla/derived.hpp"
#include "nabla/fuzz.hpp"
#include "nabla/kernel.hpp"
#include "nabla/script.hpp"
#include "nabla/semantics.hpp"
#include "nabla/translate.hpp"

#ifndef NABLA_CORPUS_DIR
#define NABLA_CORPUS_DIR "corpus"
#endif

using namespace nabla;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::uint64_t default_seed() {
  if (const char* s = std::getenv("NABLA_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring NABLA_SEED='" << s << "'\n";
    }
  }
  return kDefaultSeed;
}

json report_json(const ScriptVerdict& v) {
  json j{{"verdict", v.verdict()}};
  if (v.stage != ScriptVerdict::Stage::Kernel) {
    j["error"] = v.error;
    if (v.stage == ScriptVerdict::Stage::Schema) j["step"] = v.schema_node;
    return j;
  }
  const CheckReport& r = v.report;
  if (!r.accepted) {
    j["step"] = r.node;
    j["message"] = r.message;
    return j;
  }
  j["conclusion"] = print(*r.conclusion);
  j["closed"] = r.closed();
  json open = json::array();
  for (const auto& g : r.open_assumptions) open.push_back(print(g));
  j["open_assumptions"] = open;
  j["ltl_derivation"] = v.ltl;
  if (!v.ltl_error.empty()) j["ltl_error"] = v.ltl_error;
  return j;
}

int cmd_check(const std::string& path, bool emit_primitive, bool as_json) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  ScriptVerdict v = check_script_text(text);
  if (as_json) {
    json j = report_json(v);
    j["file"] = path;
    std::cout << j.dump(2) << "\n";
  } else if (v.stage == ScriptVerdict::Stage::Parse) {
    std::cerr << path << ": " << v.error << "\n";
  } else if (v.stage == ScriptVerdict::Stage::Schema) {
    std::cout << "Rejected: SchemaMismatch: " << v.error << "\n";
  } else if (!v.report.accepted) {
    std::cout << "Rejected: " << to_string(v.report.reason) << " at step " << v.report.node
              << ": " << v.report.message << "\n";
  } else {
    const CheckReport& r = v.report;
    if (r.closed()) {
      std::cout << "Accepted, closed\n";
    } else {
      std::cout << "Accepted, " << r.open_assumptions.size() << " open assumption"
                << (r.open_assumptions.size() == 1 ? "" : "s") << "\n";
      for (const auto& g : r.open_assumptions) std::cout << "  " << print(g) << "\n";
    }
    std::cout << "conclusion: " << print(*r.conclusion) << "\n";
    std::cout << "LTL-derivation: " << (v.ltl ? "yes" : "no");
    if (!v.ltl_error.empty()) std::cout << " (" << v.ltl_error << ")";
    std::cout << "\n";
  }
  if (emit_primitive && v.stage == ScriptVerdict::Stage::Kernel)
    std::cout << print_script(v.derivation);
  switch (v.stage) {
    case ScriptVerdict::Stage::Parse: return 2;
    case ScriptVerdict::Stage::Schema: return 1;
    case ScriptVerdict::Stage::Kernel: return v.report.accepted ? 0 : 1;
  }
  return 1;
}

int cmd_corpus(const std::string& dir, bool as_json) {
  CorpusReport r = run_corpus(dir);
  if (as_json) std::cout << to_json(r).dump(2) << "\n";
  else std::cout << format_corpus(r);
  return r.ok() ? 0 : 1;
}

int cmd_translate(const std::string& text, bool as_json) {
  Formula f = parse_ltl(text);
  Formula t = translate(f);
  if (as_json)
    std::cout << json{{"input", print(f)}, {"translation", print(t)}, {"core", print(desugar(t))}}
                     .dump(2)
              << "\n";
  else std::cout << print(t) << "\n";
  return 0;
}

int cmd_taut(const std::string& text, const std::string& label, bool instance, bool as_json) {
  if (!is_label_name(label)) {
    std::cerr << "not a label: " << label << "\n";
    return 2;
  }
  Formula f = parse_h(text);
  Derivation d;
  try {
    d = instance ? derive_tautology_instance(f, Label{label}) : derive_tautology(f, Label{label});
  } catch (const NotATautology& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const NotPropositional& e) {
    std::cerr << e.what() << " (use --instance to treat temporal subformulas as atoms)\n";
    return 2;
  }
  if (is_ltl(f)) d.sources.insert_or_assign(d.root, f);
  CheckReport r = check(d);
  if (as_json) {
    std::cout << json{{"verdict", r.accepted ? "Accepted" : to_string(r.reason)},
                      {"closed", r.closed()},
                      {"steps", d.steps.size()},
                      {"script", print_script(d)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "# " << (r.closed() ? "Accepted, closed" : "Rejected") << ", "
              << d.steps.size() << " steps\n"
              << print_script(d);
  }
  return r.closed() ? 0 : 1;
}

ObservationSequence parse_seq(const std::string& s) {
  ObservationSequence out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || tok[0] == '-')
      throw CLI::ValidationError("--seq", "expected comma-separated naturals, got '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--seq", "sequence must be nonempty");
  return out;
}

int cmd_eval(const std::string& model_path, std::optional<Nat> pos,
             const std::optional<std::string>& seq, const std::string& text, bool as_json) {
  LassoModel m = parse_model(read_file(model_path));
  bool value;
  json j;
  if (pos) {
    Formula f = parse_ltl(text);
    value = eval_ltl(m, *pos, f);
    j = {{"formula", print(f)}, {"position", *pos}};
  } else {
    ObservationSequence s = parse_seq(*seq);
    Formula f = parse_h(text);
    value = eval_h(m, s, desugar(f));
    j = {{"formula", print(f)}, {"sequence", s}};
  }
  if (as_json) {
    j["value"] = value;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (value ? "true" : "false") << "\n";
  }
  return 0;
}

int cmd_fuzz(const FuzzOptions& o, bool as_json) {
  FuzzReport r = run_fuzz(o);
  if (as_json) std::cout << to_json(r).dump(2) << "\n";
  else std::cout << format_fuzz(r);
  return r.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof checker and semantic tools for labeled temporal natural deduction"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  std::string path;
  bool emit_primitive = false;
  auto* check_cmd = app.add_subcommand("check", "Check a derivation script");
  check_cmd->add_option("file", path, "Script file")->required();
  check_cmd->add_flag("--emit-primitive", emit_primitive,
                      "Print the script with derived rules expanded");

  std::string corpus_dir = NABLA_CORPUS_DIR;
  auto* corpus_cmd = app.add_subcommand("corpus", "Check the bundled corpus and mutation fixtures");
  corpus_cmd->add_option("--corpus-dir", corpus_dir, "Corpus directory")->capture_default_str();

  std::string formula;
  auto* tr_cmd = app.add_subcommand("translate", "Translate an LTL formula (U becomes F and H)");
  tr_cmd->add_option("formula", formula)->required();

  std::string label = "b";
  bool instance = false;
  auto* taut_cmd = app.add_subcommand("taut", "Emit a closed proof of a propositional tautology");
  taut_cmd->add_option("formula", formula)->required();
  taut_cmd->add_option("--label", label, "Label of the conclusion")->capture_default_str();
  taut_cmd->add_flag("--instance", instance, "Treat maximal temporal subformulas as atoms");

  std::string model_path;
  std::optional<Nat> pos;
  std::optional<std::string> seq;
  bool double_horizon = false;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula on a lasso model");
  eval_cmd->add_option("--model", model_path, "Model file")->required();
  auto* pos_opt = eval_cmd->add_option("--pos", pos, "Position, for LTL formulas");
  auto* seq_opt = eval_cmd->add_option("--seq", seq, "Observation sequence n0,n1,...");
  pos_opt->excludes(seq_opt);
  eval_cmd->add_flag("--double-horizon", double_horizon, "Debug: double the G horizon");
  eval_cmd->add_option("formula", formula)->required();

  FuzzOptions fo;
  fo.seed = default_seed();
  std::string lemma = "translation";
  bool serial = false;
  std::vector<std::string> lemma_names;
  for (Lemma l : all_lemmas()) lemma_names.push_back(to_string(l));
  auto* fuzz_cmd = app.add_subcommand(
      "fuzz",
      "Search for counterexamples to a semantic property. A clean run is evidence, not proof: "
      "only lasso models are sampled.");
  fuzz_cmd->add_option("--lemma", lemma)->check(CLI::IsMember(lemma_names))->capture_default_str();
  fuzz_cmd->add_option("--samples", fo.samples)->capture_default_str();
  fuzz_cmd->add_option("--seed", fo.seed, "Defaults to $NABLA_SEED or 1");
  fuzz_cmd->add_option("--max-size", fo.max_size, "Formula complexity cap")->capture_default_str();
  fuzz_cmd->add_flag("--serial", serial, "Run samples on one thread");
  fuzz_cmd->add_flag("--double-horizon", double_horizon, "Debug: double the G horizon");
  // Canary for the fuzzer itself; not documented.
  fuzz_cmd->add_flag("--inject-bug", fo.inject_bug)->group("");

  for (auto* sub : app.get_subcommands({})) sub->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (double_horizon) set_horizon_doubling(true);
    if (*check_cmd) return cmd_check(path, emit_primitive, as_json);
    if (*corpus_cmd) return cmd_corpus(corpus_dir, as_json);
    if (*tr_cmd) return cmd_translate(formula, as_json);
    if (*taut_cmd) return cmd_taut(formula, label, instance, as_json);
    if (*eval_cmd) {
      if (!pos && !seq) {
        std::cerr << "eval: one of --pos or --seq is required\n";
        return 2;
      }
      return cmd_eval(model_path, pos, seq, formula, as_json);
    }
    if (*fuzz_cmd) {
      fo.lemma = *lemma_from_string(lemma);
      fo.parallel = !serial;
      return cmd_fuzz(fo, as_json);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error at offset " << e.offset() << ": " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
