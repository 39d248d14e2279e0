#include "nabla/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "nabla/random.hpp"

namespace nabla {

LassoModel::LassoModel(std::size_t stem, std::size_t period,
                       std::vector<std::set<std::string>> valuation)
    : stem_(stem), period_(period), valuation_(std::move(valuation)) {
  if (period_ == 0) throw std::invalid_argument("lasso period must be at least 1");
  if (valuation_.size() != stem_ + period_)
    throw std::invalid_argument("lasso valuation must have stem+period entries");
}

std::size_t LassoModel::canonical(Nat n) const {
  if (n < stem_) return static_cast<std::size_t>(n);
  return stem_ + static_cast<std::size_t>((n - stem_) % period_);
}

std::size_t LassoModel::successor(std::size_t i) const {
  return i + 1 < window() ? i + 1 : stem_;
}

bool LassoModel::holds(const std::string& atom, Nat n) const {
  return valuation_[canonical(n)].count(atom) > 0;
}

LassoModel LassoModel::shifted() const {
  std::vector<std::set<std::string>> val;
  if (stem_ > 0) {
    for (std::size_t i = 1; i < window(); ++i) val.push_back(valuation_[i]);
    return LassoModel(stem_ - 1, period_, std::move(val));
  }
  for (std::size_t i = 0; i < period_; ++i) val.push_back(valuation_[(i + 1) % period_]);
  return LassoModel(0, period_, std::move(val));
}

// --- model files -------------------------------------------------------------

namespace {

[[noreturn]] void model_error(std::size_t line, const std::string& msg) {
  throw std::runtime_error("model line " + std::to_string(line) + ": " + msg);
}

std::size_t read_count(std::istringstream& in, std::size_t line, const char* what) {
  long long v = -1;
  if (!(in >> v) || v < 0) model_error(line, std::string("expected a count after '") + what + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

LassoModel parse_model(std::string_view text) {
  std::istringstream all{std::string(text)};
  std::string raw;
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::size_t lineno = 0;
  while (std::getline(all, raw)) {
    ++lineno;
    auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    lines.emplace_back(lineno, raw);
  }
  std::size_t k = 0;
  auto expect_keyword = [&](const char* kw) -> std::istringstream {
    if (k >= lines.size()) model_error(lineno, std::string("missing '") + kw + "' line");
    std::istringstream in(lines[k].second);
    std::string word;
    in >> word;
    if (word != kw) model_error(lines[k].first, std::string("expected '") + kw + "'");
    return in;
  };
  auto stem_in = expect_keyword("stem");
  std::size_t stem = read_count(stem_in, lines[k].first, "stem");
  ++k;
  auto loop_in = expect_keyword("loop");
  std::size_t period = read_count(loop_in, lines[k].first, "loop");
  if (period == 0) model_error(lines[k].first, "loop length must be at least 1");
  ++k;
  std::vector<std::set<std::string>> val(stem + period);
  for (std::size_t pos = 0; pos < stem + period; ++pos, ++k) {
    if (k >= lines.size()) model_error(lineno, "missing 'at " + std::to_string(pos) + ":' line");
    std::string line = lines[k].second;
    auto colon = line.find(':');
    if (colon == std::string::npos) model_error(lines[k].first, "expected 'at <i>:'");
    std::istringstream head(line.substr(0, colon));
    std::string word;
    long long idx = -1;
    head >> word >> idx;
    if (word != "at" || idx != static_cast<long long>(pos))
      model_error(lines[k].first, "expected 'at " + std::to_string(pos) + ":'");
    std::istringstream rest(line.substr(colon + 1));
    std::string sym;
    while (rest >> sym) {
      if (!std::isalpha(static_cast<unsigned char>(sym[0])) ||
          !std::all_of(sym.begin(), sym.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; }))
        model_error(lines[k].first, "bad symbol '" + sym + "'");
      val[pos].insert(sym);
    }
  }
  auto end_in = expect_keyword("end");
  ++k;
  if (k != lines.size()) model_error(lines[k].first, "trailing content after 'end'");
  return LassoModel(stem, period, std::move(val));
}

std::string print_model(const LassoModel& m) {
  std::ostringstream os;
  os << "stem " << m.stem() << "\nloop " << m.period() << "\n";
  for (std::size_t i = 0; i < m.window(); ++i) {
    os << "at " << i << ":";
    for (const auto& s : m.valuation()[i]) os << ' ' << s;
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

// --- LTL truth ---------------------------------------------------------------

namespace {

using Table = std::vector<char>;

Table ltl_table(const LassoModel& m, const Formula& f) {
  const std::size_t n = m.window();
  Table t(n, 0);
  switch (f.op()) {
    case Op::Atom:
      for (std::size_t i = 0; i < n; ++i) t[i] = m.valuation()[i].count(f.name()) > 0;
      break;
    case Op::Bottom:
      break;
    case Op::Implies: {
      Table a = ltl_table(m, f.lhs());
      Table b = ltl_table(m, f.rhs());
      for (std::size_t i = 0; i < n; ++i) t[i] = !a[i] || b[i];
      break;
    }
    case Op::Next: {
      Table a = ltl_table(m, f.arg());
      for (std::size_t i = 0; i < n; ++i) t[i] = a[m.successor(i)];
      break;
    }
    case Op::Always: {
      // Positions reachable from i are [min(i, stem), window).
      Table a = ltl_table(m, f.arg());
      for (std::size_t i = 0; i < n; ++i) {
        bool all = true;
        for (std::size_t j = std::min(i, m.stem()); j < n && all; ++j) all = a[j];
        t[i] = all;
      }
      break;
    }
    case Op::Until: {
      Table a = ltl_table(m, f.lhs());
      Table b = ltl_table(m, f.rhs());
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i;
        bool found = false;
        // n steps visit every position reachable from i.
        for (std::size_t step = 0; step <= n; ++step) {
          if (b[j]) {
            found = true;
            break;
          }
          if (!a[j]) break;
          j = m.successor(j);
        }
        t[i] = found;
      }
      break;
    }
    default:
      throw std::invalid_argument("eval_ltl: not an LTL formula: " + print(f));
  }
  return t;
}

}  // namespace

bool eval_ltl(const LassoModel& m, Nat n, const Formula& a) {
  return ltl_table(m, desugar(a))[m.canonical(n)];
}

// --- history truth -----------------------------------------------------------

namespace {
std::atomic<unsigned> g_horizon_scale{1};
}

void set_horizon_doubling(bool on) { g_horizon_scale.store(on ? 2 : 1); }
bool horizon_doubling() { return g_horizon_scale.load() == 2; }

Nat g_horizon(const LassoModel& m, Nat last, const Formula& body) {
  // Each nested H can delay the first failure of the body by one period.
  const Nat periods = std::max<Nat>(2, hist_depth(body) + 1) * g_horizon_scale.load();
  return std::max<Nat>(last, m.stem()) + periods * m.period();
}

namespace {

struct HistEval {
  const LassoModel& m;
  std::vector<Nat> seq;

  bool run(const Formula& f) {
    const Nat last = seq.back();
    switch (f.op()) {
      case Op::Atom: return m.holds(f.name(), last);
      case Op::Bottom: return false;
      case Op::Implies: return !run(f.lhs()) || run(f.rhs());
      case Op::Next: {
        seq.push_back(last + 1);
        bool r = run(f.arg());
        seq.pop_back();
        return r;
      }
      case Op::Always: {
        const Nat bound = g_horizon(m, last, f.arg());
        bool all = true;
        for (Nat x = last; x <= bound && all; ++x) {
          seq.push_back(x);
          all = run(f.arg());
          seq.pop_back();
        }
        return all;
      }
      case Op::Hist: {
        if (seq.size() == 1) return run(f.arg());
        const Nat from = seq[seq.size() - 2];
        bool all = true;
        for (Nat x = from; x <= last && all; ++x) {
          seq.back() = x;
          all = run(f.arg());
        }
        seq.back() = last;
        return all;
      }
      default:
        throw std::invalid_argument("eval_h: not a history formula: " + print(f));
    }
  }
};

struct OracleEval {
  const LassoModel& m;
  Nat slack;
  std::vector<Nat> seq;

  bool valuation(const std::string& atom, Nat n) const {
    // Literal unrolling of the lasso.
    Nat pos = n;
    while (pos >= m.window()) pos -= m.period();
    return m.valuation()[pos].count(atom) > 0;
  }

  bool run(const Formula& f) {
    const Nat last = seq.back();
    switch (f.op()) {
      case Op::Atom: return valuation(f.name(), last);
      case Op::Bottom: return false;
      case Op::Implies: {
        bool a = run(f.lhs());
        bool b = run(f.rhs());
        return !a || b;
      }
      case Op::Next: {
        seq.push_back(last + 1);
        bool r = run(f.arg());
        seq.pop_back();
        return r;
      }
      case Op::Always: {
        bool all = true;
        for (Nat x = last; x <= last + slack; ++x) {
          seq.push_back(x);
          all = run(f.arg()) && all;
          seq.pop_back();
        }
        return all;
      }
      case Op::Hist: {
        if (seq.size() == 1) return run(f.arg());
        const Nat from = seq[seq.size() - 2];
        if (from > last) return true;
        bool all = true;
        std::vector<Nat> saved = seq;
        for (Nat x = from; x <= last; ++x) {
          seq = saved;
          seq.back() = x;
          all = run(f.arg()) && all;
        }
        seq = saved;
        return all;
      }
      default:
        throw std::invalid_argument("eval_h_oracle: not a history formula: " + print(f));
    }
  }
};

}  // namespace

bool eval_h(const LassoModel& m, std::span<const Nat> seq, const Formula& a) {
  if (seq.empty()) throw std::invalid_argument("observation sequence must be nonempty");
  HistEval ev{m, std::vector<Nat>(seq.begin(), seq.end())};
  return ev.run(desugar(a));
}

Nat min_oracle_horizon(const LassoModel& m, std::span<const Nat> seq) {
  Nat top = *std::max_element(seq.begin(), seq.end());
  return top + 2 * m.window() + 1;
}

bool eval_h_oracle(const LassoModel& m, std::span<const Nat> seq, const Formula& a,
                   Nat horizon) {
  if (seq.empty()) throw std::invalid_argument("observation sequence must be nonempty");
  if (horizon < min_oracle_horizon(m, seq))
    throw HorizonTooSmall("oracle horizon " + std::to_string(horizon) + " below " +
                          std::to_string(min_oracle_horizon(m, seq)));
  Nat top = *std::max_element(seq.begin(), seq.end());
  OracleEval ev{m, horizon - top, std::vector<Nat>(seq.begin(), seq.end())};
  return ev.run(desugar(a));
}

// --- structures --------------------------------------------------------------

namespace {
Nat lookup(const Interpretation& i, const Label& l) {
  auto it = i.find(l);
  if (it == i.end()) throw UnboundLabel(l);
  return it->second;
}
}  // namespace

bool eval_rwff(const Interpretation& i, const Rwff& r) {
  Nat a = lookup(i, r.lhs);
  Nat b = lookup(i, r.rhs);
  return r.kind == RelKind::Le ? a <= b : b == a + 1;
}

bool eval_lwff(const LassoModel& m, const Interpretation& i, const Lwff& w) {
  ObservationSequence seq;
  seq.reserve(w.seq.size());
  for (const Label& l : w.seq) seq.push_back(lookup(i, l));
  return eval_h(m, seq, w.formula);
}

bool eval_generic(const LassoModel& m, const Interpretation& i, const Generic& g) {
  if (const auto* r = std::get_if<Rwff>(&g)) return eval_rwff(i, *r);
  return eval_lwff(m, i, std::get<Lwff>(g));
}

// --- falsification -----------------------------------------------------------

namespace {

struct Query {
  std::vector<Generic> premises;
  Generic conclusion;
  std::vector<std::string> alphabet;
  std::vector<Label> labels;
  std::vector<Rwff> relations;
};

Query make_query(const std::vector<Generic>& premises, const Generic& conclusion) {
  Query q{premises, conclusion, {}, {}, {}};
  std::set<std::string> atom_set;
  std::set<Label> label_set;
  auto visit = [&](const Generic& g) {
    collect_labels(g, label_set);
    if (const auto* w = std::get_if<Lwff>(&g)) {
      auto a = atoms(w->formula);
      atom_set.insert(a.begin(), a.end());
    }
  };
  for (const auto& g : premises) {
    visit(g);
    if (const auto* r = std::get_if<Rwff>(&g)) q.relations.push_back(*r);
  }
  visit(conclusion);
  q.alphabet.assign(atom_set.begin(), atom_set.end());
  if (q.alphabet.empty()) q.alphabet.push_back("p");
  q.labels.assign(label_set.begin(), label_set.end());
  return q;
}

// Uniform label values rarely satisfy relational premises, so every other
// sample nudges values along the premises' le/succ constraints.
Interpretation draw_interpretation(Rng& rng, const Query& q, const FalsifyOptions& opts) {
  Interpretation i;
  for (const Label& l : q.labels) i[l] = rng.uniform(0, opts.max_label_value);
  if (!q.relations.empty() && rng.coin()) {
    for (int pass = 0; pass < 3; ++pass) {
      for (const Rwff& r : q.relations) {
        Nat a = i[r.lhs];
        Nat& b = i[r.rhs];
        if (r.kind == RelKind::Succ) b = a + 1;
        else if (b < a) b = a + rng.uniform(0, 3);
      }
    }
  }
  return i;
}

std::optional<Counterexample> try_sample(const Query& q, std::size_t index, std::uint64_t seed,
                                         const FalsifyOptions& opts) {
  Rng rng(sample_seed(seed, index));
  LassoModel model = random_model(rng, opts.max_stem, opts.max_period, q.alphabet);
  Interpretation interp = draw_interpretation(rng, q, opts);
  for (const auto& g : q.premises)
    if (!eval_generic(model, interp, g)) return std::nullopt;
  if (eval_generic(model, interp, q.conclusion)) return std::nullopt;
  return Counterexample{index, std::move(model), std::move(interp)};
}

}  // namespace

std::optional<Counterexample> falsify_consequence_serial(const std::vector<Generic>& premises,
                                                         const Generic& conclusion,
                                                         std::size_t samples, std::uint64_t seed,
                                                         const FalsifyOptions& opts) {
  Query q = make_query(premises, conclusion);
  for (std::size_t i = 0; i < samples; ++i)
    if (auto cx = try_sample(q, i, seed, opts)) return cx;
  return std::nullopt;
}

std::optional<Counterexample> falsify_consequence(const std::vector<Generic>& premises,
                                                  const Generic& conclusion, std::size_t samples,
                                                  std::uint64_t seed, const FalsifyOptions& opts) {
  Query q = make_query(premises, conclusion);
  const long long n = static_cast<long long>(samples);
  long long first = n;
#pragma omp parallel for schedule(dynamic, 8) reduction(min : first)
  for (long long i = 0; i < n; ++i) {
    if (i < first && try_sample(q, static_cast<std::size_t>(i), seed, opts)) first = i;
  }
  if (first == n) return std::nullopt;
  return try_sample(q, static_cast<std::size_t>(first), seed, opts);
}

}  // namespace nabla
