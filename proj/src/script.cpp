#include "nabla/script.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace nabla {

ScriptError::ScriptError(std::size_t line, const std::string& msg)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  [[noreturn]] void error(const std::string& msg) const { throw ScriptError(line_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }

  // Word of identifier characters, primes included.
  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
            s_[pos_] == '\''))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string peek_word() {
    std::size_t save = pos_;
    std::string w = word();
    pos_ = save;
    return w;
  }

  void keyword(const char* kw) {
    std::string w = word();
    if (w != kw) error(std::string("expected '") + kw + "'" + (w.empty() ? "" : ", got '" + w + "'"));
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_char(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  NodeId id() {
    std::string w = word();
    if (w.empty() || !std::all_of(w.begin(), w.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      error("expected a step id" + (w.empty() ? std::string() : ", got '" + w + "'"));
    try {
      return std::stoll(w);
    } catch (const std::exception&) {
      error("step id out of range: " + w);
    }
  }

  std::vector<NodeId> id_list() {
    std::vector<NodeId> out{id()};
    while (accept(',')) out.push_back(id());
    return out;
  }

  Label label() {
    std::string w = word();
    if (!is_label_name(w)) error("expected a label" + (w.empty() ? std::string() : ", got '" + w + "'"));
    return Label{w};
  }

  LabelSeq label_seq() {
    LabelSeq seq;
    while (!accept(':')) {
      if (at_end()) error("expected ':' after the label sequence");
      seq.push_back(label());
    }
    if (seq.empty()) error("label sequence must be nonempty");
    return seq;
  }

  Formula formula(Language lang) {
    skip_ws();
    try {
      return parse_formula_prefix(s_, pos_, lang);
    } catch (const ParseError& e) {
      error("formula at column " + std::to_string(e.offset() + 1) + ": " + e.what());
    }
  }

  Rwff rwff() {
    std::string kind = word();
    RelKind k;
    if (kind == "le") k = RelKind::Le;
    else if (kind == "succ") k = RelKind::Succ;
    else error("expected le(...) or succ(...)");
    expect_char('(');
    Label a = label();
    expect_char(',');
    Label b = label();
    expect_char(')');
    return Rwff{k, a, b};
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace

Derivation parse_script(std::string_view text) {
  Derivation d;
  std::optional<NodeId> root;
  std::size_t root_line = 0;
  std::vector<std::pair<NodeId, std::size_t>> pending_sources;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    LineParser p(raw, lineno);
    if (p.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    std::string cmd = p.word();
    auto fresh_id = [&](NodeId id) {
      if (d.contains(id)) p.error("step id " + std::to_string(id) + " defined twice");
    };
    auto known = [&](NodeId id, const char* what) {
      if (!d.contains(id))
        p.error(std::string(what) + " " + std::to_string(id) + " is not defined above");
    };
    if (cmd == "assume") {
      NodeId id = p.id();
      fresh_id(id);
      std::string kind = p.word();
      if (kind == "lwff") {
        LabelSeq seq = p.label_seq();
        Formula f = p.formula(Language::Hist);
        d.steps.emplace(id, Step{id, Assumption{Lwff{std::move(seq), f}}});
      } else if (kind == "rwff") {
        d.steps.emplace(id, Step{id, Assumption{p.rwff()}});
      } else {
        p.error("expected 'lwff' or 'rwff'");
      }
    } else if (cmd == "node") {
      NodeId id = p.id();
      fresh_id(id);
      std::string rule = p.word();
      if (rule.empty()) p.error("expected a rule name");
      p.keyword("concl");
      LabelSeq seq = p.label_seq();
      Formula f = p.formula(Language::Hist);
      Application app{rule, Lwff{std::move(seq), f}, {}, {}, std::nullopt};
      p.keyword("prem");
      app.premises = p.id_list();
      for (NodeId x : app.premises) known(x, "premise");
      while (!p.at_end()) {
        std::string kw = p.word();
        if (kw == "disch") {
          app.discharges = p.id_list();
          for (NodeId x : app.discharges) known(x, "discharged id");
        } else if (kw == "subst") {
          Label a = p.label();
          Label b = p.label();
          app.subst = LabelPair{a, b};
        } else {
          p.error("unexpected '" + kw + "'");
        }
      }
      d.steps.emplace(id, Step{id, std::move(app)});
    } else if (cmd == "ltl") {
      NodeId id = p.id();
      Formula f = p.formula(Language::Ltl);
      d.sources.insert_or_assign(id, f);
      pending_sources.emplace_back(id, lineno);
    } else if (cmd == "root") {
      if (root) p.error("root given twice");
      root = p.id();
      root_line = lineno;
    } else {
      p.error("unknown directive '" + cmd + "'");
    }
    if (!p.at_end()) p.error("trailing input");
    if (end == text.size()) break;
  }
  if (!root) throw ScriptError(0, "missing 'root' line");
  if (!d.contains(*root)) throw ScriptError(root_line, "root step is not defined");
  for (const auto& [id, line] : pending_sources)
    if (!d.contains(id)) throw ScriptError(line, "ltl annotation names an undefined step");
  d.root = *root;
  return d;
}

Derivation load_script(const std::string& path) { return parse_script(read_file(path)); }

namespace {

std::string id_list(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

std::string print_script(const Derivation& d) {
  std::ostringstream os;
  std::set<NodeId> done;
  std::function<void(NodeId)> emit = [&](NodeId id) {
    if (!done.insert(id).second || !d.contains(id)) return;
    const Step& s = d.at(id);
    if (s.is_assumption()) {
      const Generic& g = s.assumption().judgment;
      os << "assume " << id << (std::holds_alternative<Lwff>(g) ? " lwff " : " rwff ") << print(g)
         << "\n";
      return;
    }
    const Application& a = s.application();
    for (NodeId p : a.premises) emit(p);
    for (NodeId x : a.discharges) emit(x);
    os << "node " << id << ' ' << a.rule << " concl " << print(a.conclusion) << " prem "
       << id_list(a.premises);
    if (!a.discharges.empty()) os << " disch " << id_list(a.discharges);
    if (a.subst) os << " subst " << a.subst->first.name << ' ' << a.subst->second.name;
    os << "\n";
  };
  for (const auto& [id, s] : d.steps) emit(id);
  for (const auto& [id, f] : d.sources) os << "ltl " << id << ' ' << print(f) << "\n";
  os << "root " << d.root << "\n";
  return os.str();
}

}  // namespace nabla
