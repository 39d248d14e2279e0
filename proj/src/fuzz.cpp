#include "nabla/fuzz.hpp"

#include <algorithm>
#include <sstream>

#include "nabla/gen.hpp"
#include "nabla/kernel.hpp"
#include "nabla/random.hpp"
#include "nabla/script.hpp"
#include "nabla/translate.hpp"

namespace nabla {

namespace {

struct LemmaName {
  Lemma lemma;
  const char* name;
};

constexpr LemmaName kLemmas[] = {
    {Lemma::Last, "last"},
    {Lemma::Corollary, "corollary"},
    {Lemma::Translation, "translation"},
    {Lemma::LastLocal, "last-local"},
    {Lemma::Soundness, "soundness"},
    {Lemma::QuantifierBound, "quantifier-bound"},
};

}  // namespace

const char* to_string(Lemma l) {
  for (const auto& x : kLemmas)
    if (x.lemma == l) return x.name;
  return "?";
}

std::optional<Lemma> lemma_from_string(std::string_view s) {
  for (const auto& x : kLemmas)
    if (s == x.name) return x.lemma;
  return std::nullopt;
}

const std::vector<Lemma>& all_lemmas() {
  static const std::vector<Lemma> xs = [] {
    std::vector<Lemma> v;
    for (const auto& x : kLemmas) v.push_back(x.lemma);
    return v;
  }();
  return xs;
}

namespace {

ObservationSequence random_prefix(Rng& rng, const FuzzOptions& o) {
  ObservationSequence p(rng.uniform(0, o.max_prefix));
  for (auto& n : p) n = rng.uniform(0, o.max_position);
  return p;
}

// The sequence the right-hand side is evaluated at.
ObservationSequence other_side(Lemma lemma, const FuzzCase& c, const ObservationSequence& prefix) {
  ObservationSequence out = prefix;
  switch (lemma) {
    case Lemma::Corollary:
      return {c.seq.back()};
    case Lemma::LastLocal:
      if (c.clause == 2) out.push_back(c.seq[c.seq.size() - 2]);
      out.push_back(c.seq.back());
      return out;
    case Lemma::Last:
      out.push_back(c.seq.back());
      return out;
    default:
      return c.seq;
  }
}

// Evaluates both sides of a formula lemma and records them in c.
bool evaluate(const FuzzOptions& o, FuzzCase& c, const ObservationSequence& prefix) {
  const LassoModel& m = c.model;
  const LassoModel right_model = o.inject_bug ? m.shifted() : m;
  const Formula& f = *c.formula;
  c.other = other_side(o.lemma, c, prefix);
  switch (o.lemma) {
    case Lemma::Translation: {
      Formula tr = desugar(translate(f));
      c.left = eval_ltl(m, c.seq[0], f);
      c.right = eval_h(right_model, c.seq, tr);
      break;
    }
    case Lemma::Last:
    case Lemma::Corollary: {
      Formula tr = desugar(translate(f));
      c.left = eval_h(m, c.seq, tr);
      c.right = eval_h(right_model, c.other, tr);
      break;
    }
    case Lemma::LastLocal:
      c.left = eval_h(m, c.seq, f);
      c.right = eval_h(right_model, c.other, f);
      break;
    case Lemma::QuantifierBound: {
      const Nat top = *std::max_element(c.seq.begin(), c.seq.end());
      c.left = eval_h(m, c.seq, f);
      c.right = eval_h_oracle(right_model, c.seq, f, top + 4 * m.window());
      break;
    }
    case Lemma::Soundness:
      break;
  }
  return c.left == c.right;
}

struct Instance {
  FuzzCase c;
  ObservationSequence prefix;
};

struct Outcome {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::optional<Instance> first;
};

Outcome soundness_sample(const FuzzOptions& o, Rng& rng, std::size_t index) {
  Outcome out;
  out.checks = 1;
  Derivation d = random_derivation(rng);
  CheckReport r = check(d);
  FuzzCase c;
  c.derivation = print_script(d);
  if (!r.accepted) {
    // The generator only keeps accepted steps; reaching this is a bug.
    c.conclusion = std::string("kernel rejected generated derivation: ") + r.message;
    out.failures = 1;
    out.first = Instance{c, {}};
    return out;
  }
  std::vector<Generic> premises(r.open_assumptions.begin(), r.open_assumptions.end());
  for (const auto& g : premises) c.premises.push_back(print(g));
  c.conclusion = print(*r.conclusion);
  auto cx = falsify_consequence_serial(premises, *r.conclusion, o.falsify_samples,
                                       sample_seed(o.seed ^ 0x5eedULL, index));
  if (cx) {
    c.model = cx->model;
    c.interpretation = cx->interpretation;
    out.failures = 1;
    out.first = Instance{c, {}};
  }
  return out;
}

Outcome run_sample(const FuzzOptions& o, std::size_t index) {
  Rng rng(sample_seed(o.seed, index));
  if (o.lemma == Lemma::Soundness) return soundness_sample(o, rng, index);

  std::vector<Instance> todo;
  auto model = [&] { return random_model(rng, o.max_stem, o.max_period); };
  auto seq = [&](std::size_t lo, std::size_t hi) {
    return random_sequence(rng, lo, hi, o.max_position);
  };
  Instance in;
  switch (o.lemma) {
    case Lemma::Translation:
      in.c.model = model();
      in.c.formula = random_ltl(rng, o.max_size);
      in.c.seq = {rng.uniform(0, o.max_position)};
      todo.push_back(in);
      break;
    case Lemma::Last:
    case Lemma::Corollary:
      in.c.model = model();
      in.c.formula = random_ltl(rng, o.max_size);
      in.c.seq = seq(1, 4);
      if (o.lemma == Lemma::Last) in.prefix = random_prefix(rng, o);
      todo.push_back(in);
      break;
    case Lemma::LastLocal: {
      in.c.model = model();
      in.c.formula = random_local(rng, o.max_size);
      in.c.seq = seq(1, 4);
      in.c.clause = 1;
      in.prefix = random_prefix(rng, o);
      todo.push_back(in);
      Instance two;
      two.c.model = model();
      two.c.formula = random_hist(rng, o.max_size);
      two.c.seq = seq(2, 4);
      two.c.clause = 2;
      two.prefix = random_prefix(rng, o);
      todo.push_back(two);
      break;
    }
    case Lemma::QuantifierBound:
      in.c.model = model();
      in.c.formula = random_hist(rng, o.max_size);
      in.c.seq = seq(1, 3);
      todo.push_back(in);
      break;
    case Lemma::Soundness:
      break;
  }
  Outcome out;
  for (auto& t : todo) {
    ++out.checks;
    if (!evaluate(o, t.c, t.prefix)) {
      ++out.failures;
      if (!out.first) out.first = t;
    }
  }
  return out;
}

// --- shrinking ---------------------------------------------------------------

Formula rebuild(const Formula& f, const Formula& a, const std::optional<Formula>& b) {
  switch (f.op()) {
    case Op::Implies: return Formula::implies(a, *b);
    case Op::Until: return Formula::until(a, *b);
    case Op::Or: return Formula::disj(a, *b);
    case Op::And: return Formula::conj(a, *b);
    case Op::Always: return Formula::always(a);
    case Op::Next: return Formula::next(a);
    case Op::Hist: return Formula::hist(a);
    case Op::Not: return Formula::negation(a);
    case Op::Sometime: return Formula::sometime(a);
    default: return f;
  }
}

// Smaller formulas: a child, or the formula with one child shrunk.
std::vector<Formula> smaller(const Formula& f) {
  std::vector<Formula> out;
  if (f.op() == Op::Atom || f.op() == Op::Bottom) {
    if (f.op() == Op::Atom) out.push_back(Formula::bottom());
    return out;
  }
  out.push_back(f.lhs());
  if (f.is_binary()) out.push_back(f.rhs());
  for (const Formula& l : smaller(f.lhs()))
    out.push_back(rebuild(f, l, f.is_binary() ? std::optional<Formula>(f.rhs()) : std::nullopt));
  if (f.is_binary())
    for (const Formula& r : smaller(f.rhs())) out.push_back(rebuild(f, f.lhs(), r));
  return out;
}

std::vector<LassoModel> smaller(const LassoModel& m) {
  std::vector<LassoModel> out;
  const auto& v = m.valuation();
  for (std::size_t i = 0; i < m.window(); ++i) {
    const bool in_stem = i < m.stem();
    if (!in_stem && m.period() == 1) continue;
    auto w = v;
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
    out.emplace_back(m.stem() - in_stem, m.period() - !in_stem, std::move(w));
  }
  for (std::size_t i = 0; i < m.window(); ++i)
    for (const auto& a : v[i]) {
      auto w = v;
      w[i].erase(a);
      out.emplace_back(m.stem(), m.period(), std::move(w));
    }
  return out;
}

std::vector<ObservationSequence> smaller(const ObservationSequence& s, std::size_t min_len) {
  std::vector<ObservationSequence> out;
  if (s.size() > min_len)
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto t = s;
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(t);
    }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0) continue;
    for (Nat v : {Nat{0}, s[i] / 2, s[i] - 1}) {
      if (v >= s[i]) continue;
      auto t = s;
      t[i] = v;
      out.push_back(t);
    }
  }
  return out;
}

bool formula_allowed(const FuzzOptions& o, const FuzzCase& c, const Formula& f) {
  switch (o.lemma) {
    case Lemma::Translation:
    case Lemma::Last:
    case Lemma::Corollary: return is_ltl(f);
    case Lemma::LastLocal: return c.clause == 1 ? in_local_grammar(f) : is_hist_formula(f);
    default: return is_hist_formula(f);
  }
}

std::size_t min_seq_len(const FuzzOptions& o, const FuzzCase& c) {
  return o.lemma == Lemma::LastLocal && c.clause == 2 ? 2 : 1;
}

std::size_t shrink(const FuzzOptions& o, Instance& inst) {
  constexpr std::size_t kMaxSteps = 200;
  std::size_t steps = 0;
  auto fails = [&](Instance& cand) { return !evaluate(o, cand.c, cand.prefix); };
  bool progress = true;
  while (progress && steps < kMaxSteps) {
    progress = false;
    std::vector<Instance> cands;
    for (const Formula& f : smaller(*inst.c.formula))
      if (formula_allowed(o, inst.c, f)) {
        Instance t = inst;
        t.c.formula = f;
        cands.push_back(t);
      }
    if (o.lemma != Lemma::Translation)
      for (auto& s : smaller(inst.c.seq, min_seq_len(o, inst.c))) {
        Instance t = inst;
        t.c.seq = s;
        cands.push_back(t);
      }
    else if (inst.c.seq[0] > 0)
      for (Nat v : {Nat{0}, inst.c.seq[0] - 1}) {
        Instance t = inst;
        t.c.seq = {v};
        cands.push_back(t);
      }
    for (auto& p : smaller(inst.prefix, 0)) {
      Instance t = inst;
      t.prefix = p;
      cands.push_back(t);
    }
    for (auto& m : smaller(inst.c.model)) {
      Instance t = inst;
      t.c.model = m;
      cands.push_back(t);
    }
    for (auto& t : cands)
      if (fails(t)) {
        inst = std::move(t);
        ++steps;
        progress = true;
        break;
      }
  }
  evaluate(o, inst.c, inst.prefix);
  return steps;
}

}  // namespace

FuzzReport run_fuzz(const FuzzOptions& opts) {
  const auto n = static_cast<long long>(opts.samples);
  std::vector<Outcome> outs(opts.samples);
  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < n; ++i) outs[i] = run_sample(opts, static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < n; ++i) outs[i] = run_sample(opts, static_cast<std::size_t>(i));
  }
  FuzzReport rep;
  rep.options = opts;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    rep.checks += outs[i].checks;
    rep.failures += outs[i].failures;
    if (outs[i].first && !rep.first_failure) {
      rep.first_failure = i;
      Instance inst = *outs[i].first;
      if (opts.lemma != Lemma::Soundness) rep.shrink_steps = shrink(opts, inst);
      rep.counterexample = inst.c;
    }
  }
  return rep;
}

namespace {

nlohmann::json seq_json(const ObservationSequence& s) {
  nlohmann::json a = nlohmann::json::array();
  for (Nat n : s) a.push_back(n);
  return a;
}

std::string seq_text(const ObservationSequence& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

// Valuation as a list of symbol lists, one per position of the window.
nlohmann::json model_json(const LassoModel& m) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : m.valuation()) cells.push_back(nlohmann::json(cell));
  return {{"stem", m.stem()}, {"loop", m.period()}, {"valuation", cells}};
}

}  // namespace

nlohmann::json to_json(const FuzzReport& r) {
  using nlohmann::json;
  const FuzzOptions& o = r.options;
  json j{{"lemma", to_string(o.lemma)},
         {"seed", o.seed},
         {"samples", o.samples},
         {"max_size", o.max_size},
         {"checks", r.checks},
         {"failures", r.failures},
         {"ok", r.ok()}};
  if (o.inject_bug) j["injected_bug"] = true;
  if (r.first_failure) j["first_failure"] = *r.first_failure;
  if (r.counterexample) {
    const FuzzCase& c = *r.counterexample;
    json cx{{"model", model_json(c.model)}};
    if (o.lemma == Lemma::Soundness) {
      cx["derivation"] = c.derivation;
      cx["premises"] = c.premises;
      cx["conclusion"] = c.conclusion;
      json interp = json::object();
      for (const auto& [l, v] : c.interpretation) interp[l.name] = v;
      cx["interpretation"] = interp;
    } else {
      cx["formula"] = print(*c.formula);
      cx["sequence"] = seq_json(c.seq);
      cx["other_sequence"] = seq_json(c.other);
      if (c.clause) cx["clause"] = c.clause;
      cx["left"] = c.left;
      cx["right"] = c.right;
      cx["shrink_steps"] = r.shrink_steps;
    }
    j["counterexample"] = cx;
  }
  return j;
}

namespace {

// What the left and right values mean, per lemma.
std::pair<std::string, std::string> sides(const FuzzOptions& o, const FuzzCase& c) {
  switch (o.lemma) {
    case Lemma::Translation:
      return {"eval_ltl at " + std::to_string(c.seq[0]), "eval_h of translation at " + seq_text(c.seq)};
    case Lemma::Last:
    case Lemma::Corollary:
      return {"eval_h of translation at " + seq_text(c.seq),
              "eval_h of translation at " + seq_text(c.other)};
    case Lemma::QuantifierBound:
      return {"eval_h at " + seq_text(c.seq), "oracle at " + seq_text(c.seq)};
    default:
      return {"eval_h at " + seq_text(c.seq), "eval_h at " + seq_text(c.other)};
  }
}

}  // namespace

std::string format_fuzz(const FuzzReport& r) {
  std::ostringstream os;
  const FuzzOptions& o = r.options;
  os << "lemma " << to_string(o.lemma) << ", seed " << o.seed << ", " << o.samples << " samples, "
     << r.checks << " checks: ";
  if (r.ok()) {
    os << "no counterexample\n";
    return os.str();
  }
  os << r.failures << " failing\n";
  os << "first failure at sample " << *r.first_failure;
  if (o.lemma != Lemma::Soundness) os << " (shrunk in " << r.shrink_steps << " steps)";
  os << "\n";
  const FuzzCase& c = *r.counterexample;
  if (o.lemma == Lemma::Soundness) {
    os << "premises:";
    for (const auto& p : c.premises) os << "\n  " << p;
    os << "\nconclusion: " << c.conclusion << "\ninterpretation:";
    for (const auto& [l, v] : c.interpretation) os << ' ' << l.name << "=" << v;
    os << "\nmodel:\n" << print_model(c.model) << "derivation:\n" << c.derivation;
    return os.str();
  }
  auto [l, rt] = sides(o, c);
  os << "formula: " << print(*c.formula) << "\n";
  os << l << ": " << (c.left ? "true" : "false") << "\n";
  os << rt << ": " << (c.right ? "true" : "false") << "\n";
  os << "model:\n" << print_model(c.model);
  return os.str();
}

}  // namespace nabla
