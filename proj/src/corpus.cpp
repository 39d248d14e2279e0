#include "nabla/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "nabla/derived.hpp"
#include "nabla/random.hpp"
#include "nabla/script.hpp"
#include "nabla/translate.hpp"

namespace nabla {

std::string ScriptVerdict::verdict() const {
  switch (stage) {
    case Stage::Parse: return "ParseError";
    case Stage::Schema: return "SchemaMismatch";
    case Stage::Kernel: break;
  }
  return report.accepted ? "Accepted" : to_string(report.reason);
}

namespace {

ScriptVerdict check_parsed(const Derivation& parsed) {
  ScriptVerdict v;
  try {
    v.derivation = expand_derived(parsed);
  } catch (const SchemaMismatch& e) {
    v.stage = ScriptVerdict::Stage::Schema;
    v.schema_node = e.node();
    v.error = e.what();
    return v;
  }
  v.stage = ScriptVerdict::Stage::Kernel;
  v.report = check(v.derivation);
  if (v.report.accepted) {
    try {
      v.ltl = is_ltl_derivation(v.derivation, sources_of(v.derivation));
    } catch (const MissingAnnotation& e) {
      v.ltl_error = e.what();
    }
  }
  return v;
}

}  // namespace

ScriptVerdict check_script_text(std::string_view text) {
  Derivation d;
  try {
    d = parse_script(text);
  } catch (const ScriptError& e) {
    ScriptVerdict v;
    v.error = e.what();
    return v;
  }
  return check_parsed(d);
}

ScriptVerdict check_script_file(const std::string& path) {
  return check_script_text(read_file(path));
}

const std::vector<std::string>& corpus_entry_names() {
  static const std::vector<std::string> names{"A2", "A3", "A4", "A5", "A6", "A7L", "A7R", "A8"};
  return names;
}

const std::vector<TautologyInstance>& a1_instances() {
  static const std::vector<TautologyInstance> xs{
      {"A1-peirce", "(((p -> q) -> p) -> p)"},
      {"A1-excluded-middle", "(p | (~ p))"},
      {"A1-double-negation", "((~ (~ p)) -> p)"},
  };
  return xs;
}

// --- mutation manifest -------------------------------------------------------

namespace {

[[noreturn]] void manifest_error(std::size_t line, const std::string& msg) {
  throw std::runtime_error("mutations line " + std::to_string(line) + ": " + msg);
}

std::vector<NodeId> parse_ids(const std::string& s, std::size_t line) {
  std::vector<NodeId> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      manifest_error(line, "bad step id '" + tok + "'");
    }
  }
  return out;
}

NodeId parse_id(const std::string& s, std::size_t line) {
  auto ids = parse_ids(s, line);
  if (ids.size() != 1) manifest_error(line, "expected one step id");
  return ids[0];
}

std::string rest_of(std::istringstream& in) {
  std::string r;
  std::getline(in, r);
  auto b = r.find_first_not_of(" \t");
  return b == std::string::npos ? "" : r.substr(b);
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string rename_words(const std::string& text, const std::string& from, const std::string& to) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (word_char(text[i])) {
      std::size_t j = i;
      while (j < text.size() && word_char(text[j])) ++j;
      std::string w = text.substr(i, j - i);
      out += w == from ? to : w;
      i = j;
    } else {
      out += text[i++];
    }
  }
  return out;
}

// Returns the id of an `assume`/`node` line, if it is one.
std::optional<NodeId> step_id(const std::string& line) {
  std::istringstream in(line);
  std::string cmd, id;
  in >> cmd >> id;
  if (cmd != "assume" && cmd != "node") return std::nullopt;
  try {
    return std::stoll(id);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<MutationFixture> parse_mutations(std::string_view text) {
  std::vector<MutationFixture> out;
  std::optional<MutationFixture> cur;
  std::istringstream all{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(all, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream in(raw);
    std::string cmd;
    if (!(in >> cmd)) continue;
    if (cmd == "mutation") {
      if (cur) manifest_error(lineno, "missing 'end' before new mutation");
      MutationFixture m;
      if (!(in >> m.name >> m.base >> m.expected)) manifest_error(lineno, "expected name, base and reason");
      if (m.expected != "SchemaMismatch" && !reason_from_string(m.expected))
        manifest_error(lineno, "unknown reason '" + m.expected + "'");
      for (const auto& f : out)
        if (f.name == m.name) manifest_error(lineno, "duplicate mutation '" + m.name + "'");
      cur = std::move(m);
      continue;
    }
    if (!cur) manifest_error(lineno, "'" + cmd + "' outside a mutation block");
    MutationEdit e{};
    if (cmd == "describe") {
      cur->description = rest_of(in);
      continue;
    } else if (cmd == "rename") {
      e.kind = MutationEdit::Kind::Rename;
      if (!(in >> e.from >> e.to)) manifest_error(lineno, "rename needs two labels");
      std::string kw, ids;
      if (in >> kw) {
        if (kw != "in" || !(in >> ids)) manifest_error(lineno, "expected 'in <ids>'");
        e.only = parse_ids(ids, lineno);
      }
    } else if (cmd == "replace") {
      e.kind = MutationEdit::Kind::Replace;
      std::string id;
      in >> id;
      e.id = parse_id(id, lineno);
      e.line = rest_of(in);
      if (step_id(e.line) != e.id) manifest_error(lineno, "replacement must define the same step id");
    } else if (cmd == "append") {
      e.kind = MutationEdit::Kind::Append;
      e.line = rest_of(in);
    } else if (cmd == "root") {
      e.kind = MutationEdit::Kind::Root;
      std::string id;
      in >> id;
      e.id = parse_id(id, lineno);
    } else if (cmd == "end") {
      if (cur->edits.empty()) manifest_error(lineno, "mutation without edits");
      out.push_back(std::move(*cur));
      cur.reset();
      continue;
    } else {
      manifest_error(lineno, "unknown directive '" + cmd + "'");
    }
    cur->edits.push_back(std::move(e));
  }
  if (cur) manifest_error(lineno, "missing 'end'");
  return out;
}

std::string apply_mutation(const MutationFixture& m, const std::string& script) {
  std::vector<std::string> lines;
  {
    std::istringstream in(script);
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
  }
  for (const MutationEdit& e : m.edits) {
    switch (e.kind) {
      case MutationEdit::Kind::Rename:
        for (auto& l : lines) {
          auto id = step_id(l);
          if (!id) continue;
          if (!e.only.empty() && std::find(e.only.begin(), e.only.end(), *id) == e.only.end())
            continue;
          // Keep comments untouched.
          auto h = l.find('#');
          std::string code = l.substr(0, h), tail = h == std::string::npos ? "" : l.substr(h);
          l = rename_words(code, e.from, e.to) + tail;
        }
        break;
      case MutationEdit::Kind::Replace: {
        bool found = false;
        for (auto& l : lines)
          if (step_id(l) == e.id) {
            l = e.line;
            found = true;
          }
        if (!found)
          throw std::runtime_error("mutation " + m.name + ": no step " + std::to_string(e.id));
        break;
      }
      case MutationEdit::Kind::Append: {
        // Before the root line so the step is defined when referenced.
        auto it = std::find_if(lines.begin(), lines.end(), [](const std::string& l) {
          std::istringstream in(l);
          std::string w;
          in >> w;
          return w == "root";
        });
        lines.insert(it, e.line);
        break;
      }
      case MutationEdit::Kind::Root:
        for (auto& l : lines) {
          std::istringstream in(l);
          std::string w;
          in >> w;
          if (w == "root") l = "root " + std::to_string(e.id);
        }
        break;
    }
  }
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

// --- corpus run --------------------------------------------------------------

bool CorpusReport::ok() const {
  if (!manifest_error.empty()) return false;
  for (const auto& e : entries)
    if (!e.ok()) return false;
  for (const auto& e : tautologies)
    if (!e.ok()) return false;
  for (const auto& m : mutations)
    if (!m.ok()) return false;
  return true;
}

namespace {

EntryResult summarize(const std::string& name, const ScriptVerdict& v) {
  EntryResult r;
  r.name = name;
  r.present = true;
  r.verdict = v.verdict();
  r.closed = v.report.closed();
  r.ltl = v.ltl;
  r.steps = v.derivation.steps.size();
  if (v.stage != ScriptVerdict::Stage::Kernel) r.detail = v.error;
  else if (!v.report.accepted) r.detail = v.report.message;
  else if (!v.ltl_error.empty()) r.detail = v.ltl_error;
  return r;
}

}  // namespace

CorpusReport run_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  CorpusReport rep;
  std::map<std::string, std::string> texts;
  for (const auto& name : corpus_entry_names()) {
    fs::path p = fs::path(dir) / (name + ".ndp");
    if (!fs::exists(p)) {
      EntryResult r;
      r.name = name;
      r.verdict = "Missing";
      r.detail = p.string() + " not found";
      rep.entries.push_back(r);
      continue;
    }
    texts[name] = read_file(p.string());
    rep.entries.push_back(summarize(name, check_script_text(texts[name])));
  }

  for (const auto& t : a1_instances()) {
    EntryResult r;
    r.name = t.name;
    r.present = true;
    try {
      Derivation d = derive_tautology(parse_h(t.formula), Label{"b"});
      d.sources.insert_or_assign(d.root, parse_ltl(t.formula));
      ScriptVerdict v;
      v.stage = ScriptVerdict::Stage::Kernel;
      v.derivation = d;
      v.report = check(d);
      if (v.report.accepted) v.ltl = is_ltl_derivation(d, sources_of(d));
      r = summarize(t.name, v);
    } catch (const std::exception& e) {
      r.verdict = "Error";
      r.detail = e.what();
    }
    rep.tautologies.push_back(r);
  }

  fs::path manifest = fs::path(dir) / "mutations.txt";
  try {
    for (const auto& m : parse_mutations(read_file(manifest.string()))) {
      MutationResult r{m.name, m.base, m.description, m.expected, "", ""};
      auto it = texts.find(m.base);
      if (it == texts.end()) {
        r.actual = "Missing";
        r.detail = "base entry " + m.base + " is missing";
      } else {
        try {
          ScriptVerdict v = check_script_text(apply_mutation(m, it->second));
          r.actual = v.verdict();
          r.detail = v.stage == ScriptVerdict::Stage::Kernel ? v.report.message : v.error;
          if (v.stage == ScriptVerdict::Stage::Kernel && !v.report.accepted)
            r.detail = "step " + std::to_string(v.report.node) + ": " + r.detail;
        } catch (const std::exception& e) {
          r.actual = "Error";
          r.detail = e.what();
        }
      }
      rep.mutations.push_back(r);
    }
  } catch (const std::exception& e) {
    rep.manifest_error = e.what();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<std::pair<std::string, Derivation>> corpus_proofs(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::pair<std::string, Derivation>> out;
  for (const auto& name : corpus_entry_names()) {
    fs::path p = fs::path(dir) / (name + ".ndp");
    if (!fs::exists(p)) continue;
    ScriptVerdict v = check_script_file(p.string());
    if (v.report.closed() && v.ltl) out.emplace_back(name, std::move(v.derivation));
  }
  for (const auto& t : a1_instances()) {
    Derivation d = derive_tautology(parse_h(t.formula), Label{"b"});
    d.sources.insert_or_assign(d.root, parse_ltl(t.formula));
    out.emplace_back(t.name, std::move(d));
  }
  return out;
}

namespace {

std::optional<Formula> root_source(const Derivation& d) {
  auto it = d.sources.find(d.root);
  if (it == d.sources.end()) return std::nullopt;
  return it->second;
}

// Tautologies with `a` as antecedent; the consequent mentions `c`.
Formula weakening(Rng& rng, const Formula& a, const Formula& c) {
  switch (rng.uniform(0, 3)) {
    case 0: return Formula::implies(a, Formula::implies(c, a));
    case 1: return Formula::implies(a, Formula::negation(Formula::negation(a)));
    case 2: return Formula::implies(a, Formula::disj(a, c));
    default: return Formula::implies(a, Formula::disj(c, a));
  }
}

}  // namespace

ClosureTrialReport run_closure_trials(const std::string& dir, std::size_t trials,
                                      std::uint64_t seed) {
  ClosureTrialReport rep;
  const auto pool = corpus_proofs(dir);
  if (pool.empty()) {
    rep.trials = trials;
    rep.failures.push_back("no base proofs in " + dir);
    return rep;
  }
  for (std::size_t t = 0; t < trials; ++t) {
    ++rep.trials;
    Rng rng(sample_seed(seed, t));
    const auto& [name, base] = pool[rng.uniform(0, pool.size() - 1)];
    std::string trace = name;
    try {
      Derivation d = base;
      for (std::size_t k = rng.uniform(1, 3); k > 0; --k) {
        switch (rng.uniform(0, 2)) {
          case 0: {
            Formula src = *root_source(d);
            Formula s = weakening(rng, src, random_ltl(rng, 2, {"p", "q"}));
            Derivation taut = derive_tautology_instance(translate(s), Label{"b"});
            taut.sources.insert_or_assign(taut.root, s);
            d = mp_compose(d, taut);
            trace += " mp[" + print(s) + "]";
            break;
          }
          case 1:
            d = nec_g(d);
            trace += " nec_g";
            break;
          default:
            d = nec_x(d);
            trace += " nec_x";
            break;
        }
      }
      CheckReport r = check(d);
      if (!r.accepted) {
        rep.failures.push_back(trace + ": rejected at step " + std::to_string(r.node) + ": " +
                               r.message);
      } else if (!r.closed()) {
        rep.failures.push_back(trace + ": open assumptions remain");
      } else if (!is_ltl_derivation(d, sources_of(d))) {
        rep.failures.push_back(trace + ": not an LTL-derivation");
      } else {
        ++rep.passed;
      }
    } catch (const std::exception& e) {
      rep.failures.push_back(trace + ": " + e.what());
    }
  }
  return rep;
}

std::string format_corpus(const CorpusReport& r) {
  std::ostringstream os;
  auto entry_line = [&](const EntryResult& e) {
    os << "  " << std::left << std::setw(20) << e.name << std::setw(16) << e.verdict;
    if (e.present && e.verdict == "Accepted")
      os << (e.closed ? "closed  " : "open    ") << (e.ltl ? "ltl  " : "not-ltl  ") << e.steps
         << " steps";
    if (!e.detail.empty()) os << "  " << e.detail;
    os << (e.ok() ? "" : "  <-- unexpected") << "\n";
  };
  std::size_t ok_entries = 0, ok_taut = 0, ok_mut = 0;
  os << "entries\n";
  for (const auto& e : r.entries) {
    entry_line(e);
    ok_entries += e.ok();
  }
  os << "tautologies (A1)\n";
  for (const auto& e : r.tautologies) {
    entry_line(e);
    ok_taut += e.ok();
  }
  os << "mutations\n";
  for (const auto& m : r.mutations) {
    os << "  " << std::left << std::setw(20) << m.name << std::setw(6) << m.base << std::setw(20)
       << m.actual;
    if (!m.ok()) os << "expected " << m.expected << "  " << m.detail << "  <-- unexpected";
    os << "\n";
    ok_mut += m.ok();
  }
  if (!r.manifest_error.empty()) os << "manifest error: " << r.manifest_error << "\n";
  os << ok_entries << "/" << r.entries.size() << " entries accepted, " << ok_taut << "/"
     << r.tautologies.size() << " tautologies, " << ok_mut << "/" << r.mutations.size()
     << " mutations rejected as expected\n";
  return os.str();
}

nlohmann::json to_json(const CorpusReport& r) {
  using nlohmann::json;
  auto entry = [](const EntryResult& e) {
    return json{{"name", e.name}, {"present", e.present}, {"verdict", e.verdict},
                {"closed", e.closed}, {"ltl", e.ltl}, {"steps", e.steps},
                {"detail", e.detail}, {"ok", e.ok()}};
  };
  json j;
  j["entries"] = json::array();
  for (const auto& e : r.entries) j["entries"].push_back(entry(e));
  j["tautologies"] = json::array();
  for (const auto& e : r.tautologies) j["tautologies"].push_back(entry(e));
  j["mutations"] = json::array();
  for (const auto& m : r.mutations)
    j["mutations"].push_back(json{{"name", m.name}, {"base", m.base},
                                  {"description", m.description}, {"expected", m.expected},
                                  {"actual", m.actual}, {"detail", m.detail}, {"ok", m.ok()}});
  if (!r.manifest_error.empty()) j["manifest_error"] = r.manifest_error;
  j["ok"] = r.ok();
  return j;
}

}  // namespace nabla
