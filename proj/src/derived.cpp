#include "nabla/derived.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "nabla/kernel.hpp"

namespace nabla {

namespace {

Formula neg(const Formula& f) { return Formula::negation(f); }
const Formula& bot() {
  static const Formula kBot = Formula::bottom();
  return kBot;
}

bool is_neg(const Formula& core) { return core.op() == Op::Implies && core.rhs().op() == Op::Bottom; }

std::optional<std::pair<Formula, Formula>> match_or(const Formula& f) {
  if (f.op() == Op::Or) return std::pair{f.lhs(), f.rhs()};
  Formula c = desugar(f);
  if (c.op() == Op::Implies && is_neg(c.lhs())) return std::pair{c.lhs().lhs(), c.rhs()};
  return std::nullopt;
}

std::optional<std::pair<Formula, Formula>> match_and(const Formula& f) {
  if (f.op() == Op::And) return std::pair{f.lhs(), f.rhs()};
  Formula c = desugar(f);
  if (!is_neg(c)) return std::nullopt;
  const Formula& d = c.lhs();
  if (d.op() != Op::Implies || !is_neg(d.lhs()) || !is_neg(d.lhs().lhs()) || !is_neg(d.rhs()))
    return std::nullopt;
  return std::pair{d.lhs().lhs().lhs(), d.rhs().lhs()};
}

std::optional<Formula> match_sometime(const Formula& f) {
  if (f.op() == Op::Sometime) return f.arg();
  Formula c = desugar(f);
  if (is_neg(c) && c.lhs().op() == Op::Always && is_neg(c.lhs().arg()))
    return c.lhs().arg().lhs();
  return std::nullopt;
}

LabelSeq extend(LabelSeq s, const Label& l) {
  s.push_back(l);
  return s;
}

class Expander {
 public:
  explicit Expander(const Derivation& d) : src_(d), b_(d), used_(labels_of(d)) {}

  Derivation run() {
    for (const auto& [id, s] : src_.steps) visit(id);
    return b_.finish(src_.root);
  }

 private:
  void visit(NodeId id) {
    if (!done_.insert(id).second || !src_.contains(id)) return;
    const Step& s = src_.at(id);
    if (s.is_assumption()) return;
    const Application& a = s.application();
    for (NodeId p : a.premises) visit(p);
    if (!is_derived_rule(a.rule)) return;
    id_ = id;
    const std::string& r = a.rule;
    if (r == "andI") and_i(a);
    else if (r == "andE1") and_e(a, true);
    else if (r == "andE2") and_e(a, false);
    else if (r == "orIl") or_i(a, true);
    else if (r == "orIr") or_i(a, false);
    else if (r == "orE") or_e(a);
    else if (r == "FI") f_i(a);
    else f_e(a);
  }

  [[noreturn]] void mismatch(const std::string& msg) const { throw SchemaMismatch(id_, msg); }

  void arity(const Application& a, std::size_t n) const {
    if (a.premises.size() != n)
      mismatch(a.rule + " takes " + std::to_string(n) + " premises");
  }

  Lwff lw(NodeId p) const {
    if (!b_.peek().contains(p)) mismatch("premise " + std::to_string(p) + " does not exist");
    Generic g = b_.judgment(p);
    if (const auto* w = std::get_if<Lwff>(&g)) return *w;
    mismatch("premise " + std::to_string(p) + " must be a labeled formula");
  }

  void same(const Formula& x, const Formula& y, const std::string& what) const {
    if (x != y) mismatch(what + ": " + print(x) + " vs " + print(y));
  }

  NodeId apply(const std::string& rule, const LabelSeq& seq, const Formula& f,
               std::vector<NodeId> prem, std::vector<NodeId> disch = {}) {
    return b_.apply(rule, Lwff{seq, f}, std::move(prem), std::move(disch));
  }

  void finish(const std::string& rule, const Lwff& concl, std::vector<NodeId> prem,
              std::vector<NodeId> disch = {}) {
    b_.put(Step{id_, Application{rule, concl, std::move(prem), std::move(disch), std::nullopt}});
  }

  void and_i(const Application& a) {
    arity(a, 2);
    Lwff pa = lw(a.premises[0]);
    Lwff pb = lw(a.premises[1]);
    if (pa.seq != pb.seq || pa.seq != a.conclusion.seq) mismatch("andI labels must agree");
    auto ab = match_and(a.conclusion.formula);
    if (!ab) mismatch("andI concludes a conjunction");
    same(pa.formula, ab->first, "andI left premise");
    same(pb.formula, ab->second, "andI right premise");
    const LabelSeq& s = pa.seq;
    const Formula A = pa.formula;
    const Formula B = pb.formula;
    NodeId u = b_.assume(Lwff{s, Formula::disj(neg(A), neg(B))});
    NodeId w = b_.assume(Lwff{s, neg(A)});
    NodeId n1 = apply("impE", s, bot(), {w, a.premises[0]});
    NodeId n2 = apply("impI", s, neg(neg(A)), {n1}, {w});
    NodeId n3 = apply("impE", s, neg(B), {u, n2});
    NodeId n4 = apply("impE", s, bot(), {n3, a.premises[1]});
    finish("impI", a.conclusion, {n4}, {u});
  }

  void and_e(const Application& a, bool left) {
    arity(a, 1);
    Lwff p = lw(a.premises[0]);
    auto ab = match_and(p.formula);
    if (!ab) mismatch("premise must be a conjunction");
    if (p.seq != a.conclusion.seq) mismatch("labels must agree");
    const auto& [A, B] = *ab;
    same(a.conclusion.formula, left ? A : B, a.rule + " conclusion");
    const LabelSeq& s = p.seq;
    const Formula nnA_to_nB = Formula::implies(neg(neg(A)), neg(B));
    if (left) {
      NodeId z = b_.assume(Lwff{s, neg(A)});
      NodeId y = b_.assume(Lwff{s, neg(neg(A))});
      NodeId m1 = apply("impE", s, bot(), {y, z});
      NodeId m2 = apply("impI", s, neg(B), {m1});
      NodeId m3 = apply("impI", s, nnA_to_nB, {m2}, {y});
      NodeId m4 = apply("impE", s, bot(), {a.premises[0], m3});
      finish("botE", a.conclusion, {m4}, {z});
    } else {
      NodeId z = b_.assume(Lwff{s, neg(B)});
      NodeId m1 = apply("impI", s, nnA_to_nB, {z});
      NodeId m2 = apply("impE", s, bot(), {a.premises[0], m1});
      finish("botE", a.conclusion, {m2}, {z});
    }
  }

  void or_i(const Application& a, bool left) {
    arity(a, 1);
    Lwff p = lw(a.premises[0]);
    auto ab = match_or(a.conclusion.formula);
    if (!ab) mismatch(a.rule + " concludes a disjunction");
    if (p.seq != a.conclusion.seq) mismatch("labels must agree");
    const auto& [A, B] = *ab;
    same(p.formula, left ? A : B, a.rule + " premise");
    const LabelSeq& s = p.seq;
    if (left) {
      NodeId u = b_.assume(Lwff{s, neg(A)});
      NodeId m1 = apply("impE", s, bot(), {u, a.premises[0]});
      NodeId m2 = apply("botE", s, B, {m1});
      finish("impI", a.conclusion, {m2}, {u});
    } else {
      finish("impI", a.conclusion, {a.premises[0]});
    }
  }

  void or_e(const Application& a) {
    arity(a, 3);
    Lwff p = lw(a.premises[0]);
    auto ab = match_or(p.formula);
    if (!ab) mismatch("first orE premise must be a disjunction");
    const auto& [A, B] = *ab;
    const Lwff& c = a.conclusion;
    for (int i : {1, 2}) {
      Lwff h = lw(a.premises[i]);
      if (!(h == c)) mismatch("orE case " + std::to_string(i) + " must prove " + print(c));
    }
    auto open1 = open_assumption_ids(b_.peek(), a.premises[1]);
    auto open2 = open_assumption_ids(b_.peek(), a.premises[2]);
    const Generic left = Lwff{p.seq, A};
    const Generic right = Lwff{p.seq, B};
    std::vector<NodeId> d1, d2;
    for (NodeId x : a.discharges) {
      bool used = false;
      if (auto it = open1.find(x); it != open1.end() && it->second == left) {
        d1.push_back(x);
        used = true;
      }
      if (auto it = open2.find(x); it != open2.end() && it->second == right) {
        d2.push_back(x);
        used = true;
      }
      if (!used) mismatch("orE cannot discharge " + std::to_string(x));
    }
    const LabelSeq& s = p.seq;
    NodeId z = b_.assume(Lwff{c.seq, neg(c.formula)});
    NodeId a1 = apply("impE", c.seq, bot(), {z, a.premises[1]});
    NodeId a2 = apply("botE", s, bot(), {a1});
    NodeId a3 = apply("impI", s, neg(A), {a2}, d1);
    NodeId a4 = apply("impE", s, B, {a.premises[0], a3});
    NodeId b1 = apply("impE", c.seq, bot(), {z, a.premises[2]});
    NodeId b2 = apply("botE", s, bot(), {b1});
    NodeId b3 = apply("impI", s, neg(B), {b2}, d2);
    NodeId c1 = apply("impE", s, bot(), {b3, a4});
    finish("botE", c, {c1}, {z});
  }

  void f_i(const Application& a) {
    arity(a, 2);
    Lwff p = lw(a.premises[0]);
    Generic r = b_.judgment(a.premises[1]);
    const auto* rel = std::get_if<Rwff>(&r);
    if (!rel || rel->kind != RelKind::Le) mismatch("second FI premise must be le(.,.)");
    auto A = match_sometime(a.conclusion.formula);
    if (!A) mismatch("FI concludes an F formula");
    same(p.formula, *A, "FI premise");
    if (p.seq.size() < 2 || LabelSeq(p.seq.begin(), p.seq.end() - 1) != a.conclusion.seq ||
        rel->lhs != a.conclusion.seq.back() || rel->rhs != p.seq.back())
      mismatch("FI labels do not fit a b1 b2 / le(b1,b2) / a b1");
    const LabelSeq& s = a.conclusion.seq;
    NodeId u = b_.assume(Lwff{s, Formula::always(neg(*A))});
    NodeId m1 = apply("GE", p.seq, neg(*A), {u, a.premises[1]});
    NodeId m2 = apply("impE", p.seq, bot(), {m1, a.premises[0]});
    NodeId m3 = apply("botE", s, bot(), {m2});
    finish("impI", a.conclusion, {m3}, {u});
  }

  void f_e(const Application& a) {
    arity(a, 2);
    Lwff p = lw(a.premises[0]);
    auto A = match_sometime(p.formula);
    if (!A) mismatch("first FE premise must be an F formula");
    Lwff h = lw(a.premises[1]);
    const Lwff& c = a.conclusion;
    if (!(h == c)) mismatch("FE case must prove " + print(c));
    const Label b1 = p.seq.back();
    auto open = open_assumption_ids(b_.peek(), a.premises[1]);
    std::optional<Label> b2;
    std::vector<NodeId> dl, dr;
    auto agree = [&](const Label& l) {
      if (b2 && *b2 != l) mismatch("FE discharges disagree on the fresh label");
      b2 = l;
    };
    for (NodeId x : a.discharges) {
      auto it = open.find(x);
      if (it == open.end()) mismatch("FE cannot discharge " + std::to_string(x));
      if (const auto* r = std::get_if<Rwff>(&it->second)) {
        if (r->kind != RelKind::Le || r->lhs != b1) mismatch("FE discharges le(" + b1.name + ",.)");
        agree(r->rhs);
        dr.push_back(x);
      } else {
        const Lwff& w = std::get<Lwff>(it->second);
        if (w.formula != *A || w.seq.size() != p.seq.size() + 1 ||
            LabelSeq(w.seq.begin(), w.seq.end() - 1) != p.seq)
          mismatch("FE discharges " + print(p.seq) + " b2 : " + print(*A));
        agree(w.seq.back());
        dl.push_back(x);
      }
    }
    if (!b2) {
      b2 = fresh_label(used_, "e");
      used_.insert(*b2);
    }
    const LabelSeq s2 = extend(p.seq, *b2);
    NodeId v = b_.assume(Lwff{c.seq, neg(c.formula)});
    NodeId m1 = apply("impE", c.seq, bot(), {v, a.premises[1]});
    NodeId m2 = apply("botE", s2, bot(), {m1});
    NodeId m3 = apply("impI", s2, neg(*A), {m2}, dl);
    NodeId m4 = apply("GI", p.seq, Formula::always(neg(*A)), {m3}, dr);
    NodeId m5 = apply("impE", p.seq, bot(), {a.premises[0], m4});
    finish("botE", c, {m5}, {v});
  }

  const Derivation& src_;
  Builder b_;
  std::set<Label> used_;
  std::set<NodeId> done_;
  NodeId id_ = 0;
};

}  // namespace

Derivation expand_derived(const Derivation& d) { return Expander(d).run(); }

bool has_derived_steps(const Derivation& d) {
  for (const auto& [id, s] : d.steps)
    if (!s.is_assumption() && is_derived_rule(s.application().rule)) return true;
  return false;
}

Label fresh_label(const std::set<Label>& used, const std::string& hint) {
  if (!used.count(Label{hint})) return Label{hint};
  for (std::size_t i = 1;; ++i) {
    Label l{hint + std::to_string(i)};
    if (!used.count(l)) return l;
  }
}

Derivation renumber(const Derivation& d, NodeId offset) {
  auto shift = [&](std::vector<NodeId> ids) {
    for (NodeId& x : ids) x += offset;
    return ids;
  };
  Derivation out;
  for (const auto& [id, s] : d.steps) {
    Step t = s;
    t.id += offset;
    if (auto* a = std::get_if<Application>(&t.body)) {
      a->premises = shift(a->premises);
      a->discharges = shift(a->discharges);
    }
    out.steps.emplace(t.id, std::move(t));
  }
  for (const auto& [id, f] : d.sources) out.sources.emplace(id + offset, f);
  out.root = d.root + offset;
  return out;
}

// --- closure -----------------------------------------------------------------

const char* to_string(ClosureErrorKind k) {
  switch (k) {
    case ClosureErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ClosureErrorKind::NotLocalFormula: return "NotLocalFormula";
    case ClosureErrorKind::NonParametricLabel: return "NonParametricLabel";
    case ClosureErrorKind::NotClosed: return "NotClosed";
  }
  return "?";
}

namespace {

Lwff closed_conclusion(const Derivation& d, const char* who) {
  CheckReport r = check(d);
  if (!r.accepted)
    throw ClosureError(ClosureErrorKind::ShapeMismatch,
                       std::string(who) + " input is rejected: " + r.message);
  if (!r.open_assumptions.empty())
    throw ClosureError(ClosureErrorKind::NotClosed, std::string(who) + " input has open assumptions");
  return *r.conclusion;
}

std::optional<Formula> root_source(const Derivation& d) {
  auto it = d.sources.find(d.root);
  if (it == d.sources.end()) return std::nullopt;
  return it->second;
}

Derivation necessitate(const Derivation& d, bool always) {
  const char* who = always ? "nec_g" : "nec_x";
  Lwff c = closed_conclusion(d, who);
  if (c.seq.size() != 1)
    throw ClosureError(ClosureErrorKind::NonParametricLabel,
                       std::string(who) + " needs a conclusion with a single label, got " + print(c.seq));
  if (classify_local(desugar(c.formula)) != LocalClass::Local)
    throw ClosureError(ClosureErrorKind::NotLocalFormula, print(c.formula) + " is not local");
  const Label b = c.seq.front();
  const Label fresh = fresh_label(labels_of(d), b.name);
  Derivation renamed = rename_labels(d, {{b, fresh}});
  Builder bld(renamed);
  NodeId lifted = bld.apply("last", Lwff{{b, fresh}, c.formula}, {renamed.root});
  Formula target = always ? Formula::always(c.formula) : Formula::next(c.formula);
  NodeId top = bld.apply(always ? "GI" : "XI", Lwff{{b}, target}, {lifted});
  Derivation out = bld.finish(top);
  out.sources.clear();
  if (auto src = root_source(d))
    out.sources.emplace(top, always ? Formula::always(*src) : Formula::next(*src));
  return out;
}

}  // namespace

Derivation mp_compose(const Derivation& d1, const Derivation& d2) {
  Lwff c1 = closed_conclusion(d1, "mp_compose");
  Lwff c2 = closed_conclusion(d2, "mp_compose");
  if (c1.seq != c2.seq)
    throw ClosureError(ClosureErrorKind::ShapeMismatch,
                       "labels differ: " + print(c1.seq) + " vs " + print(c2.seq));
  Formula imp = desugar(c2.formula);
  if (imp.op() != Op::Implies)
    throw ClosureError(ClosureErrorKind::ShapeMismatch, print(c2.formula) + " is not an implication");
  if (imp.lhs() != c1.formula)
    throw ClosureError(ClosureErrorKind::ShapeMismatch,
                       "antecedent " + print(imp.lhs()) + " does not match " + print(c1.formula));
  Formula consequent = c2.formula.op() == Op::Implies ? c2.formula.rhs() : imp.rhs();
  Derivation shifted = renumber(d2, d1.max_id());
  Builder bld(d1);
  for (const auto& [id, s] : shifted.steps) bld.put(s);
  NodeId top = bld.apply("impE", Lwff{c1.seq, consequent}, {shifted.root, d1.root});
  Derivation out = bld.finish(top);
  out.sources.clear();
  if (auto src = root_source(d2); src && src->op() == Op::Implies) out.sources.emplace(top, src->rhs());
  return out;
}

Derivation nec_g(const Derivation& d) { return necessitate(d, true); }
Derivation nec_x(const Derivation& d) { return necessitate(d, false); }

// --- tautologies -------------------------------------------------------------

namespace {

// Atoms of a core formula; in opaque mode every non-propositional node is one.
void collect_atoms(const Formula& f, bool opaque, std::set<Formula, FormulaLess>& out) {
  switch (f.op()) {
    case Op::Bottom: return;
    case Op::Implies:
      collect_atoms(f.lhs(), opaque, out);
      collect_atoms(f.rhs(), opaque, out);
      return;
    case Op::Atom: out.insert(f); return;
    default:
      if (!opaque) throw NotPropositional(print(f) + " is not propositional");
      out.insert(f);
  }
}

using Valuation = std::map<Formula, bool, FormulaLess>;

bool truth(const Formula& f, const Valuation& v) {
  switch (f.op()) {
    case Op::Bottom: return false;
    case Op::Implies: return !truth(f.lhs(), v) || truth(f.rhs(), v);
    default: return v.at(f);
  }
}

bool all_valuations(const std::vector<Formula>& atoms, Valuation& v, std::size_t k,
                    const std::function<bool(const Valuation&)>& pred) {
  if (k == atoms.size()) return pred(v);
  for (bool b : {true, false}) {
    v[atoms[k]] = b;
    if (!all_valuations(atoms, v, k + 1, pred)) return false;
  }
  v.erase(atoms[k]);
  return true;
}

struct LiteralLess {
  bool operator()(const std::pair<Formula, bool>& a, const std::pair<Formula, bool>& b) const {
    if (FormulaLess{}(a.first, b.first)) return true;
    if (FormulaLess{}(b.first, a.first)) return false;
    return a.second < b.second;
  }
};

class Kalmar {
 public:
  Kalmar(Formula f, const Label& b, bool opaque)
      : shown_(std::move(f)), core_(desugar(shown_)), seq_{b} {
    std::set<Formula, FormulaLess> found;
    collect_atoms(core_, opaque, found);
    atoms_.assign(found.begin(), found.end());
    Valuation v;
    bool ok = all_valuations(atoms_, v, 0, [&](const Valuation& val) { return truth(core_, val); });
    if (!ok) throw NotATautology(print(shown_) + " is not a tautology");
  }

  Derivation build() {
    Valuation v;
    NodeId root = eliminate(v, 0);
    Derivation d = bld_.finish(root);
    auto& app = std::get<Application>(d.steps.at(root).body);
    app.conclusion.formula = shown_;
    return d;
  }

 private:
  NodeId literal_leaf(const Formula& atom, bool value) {
    auto key = std::make_pair(atom, value);
    auto it = leaves_.find(key);
    if (it != leaves_.end()) return it->second;
    NodeId id = bld_.assume(Lwff{seq_, value ? atom : neg(atom)});
    leaves_.emplace(key, id);
    return id;
  }

  // Proof of g (if true under v) or of ~g (if false) from the literal leaves.
  NodeId lit(const Formula& g, const Valuation& v) {
    if (g.op() == Op::Bottom) {
      NodeId w = bld_.assume(Lwff{seq_, bot()});
      return bld_.apply("impI", Lwff{seq_, neg(bot())}, {w}, {w});
    }
    if (g.op() != Op::Implies) return literal_leaf(g, v.at(g));
    const Formula& x = g.lhs();
    const Formula& y = g.rhs();
    if (truth(y, v)) {
      NodeId py = lit(y, v);
      return bld_.apply("impI", Lwff{seq_, g}, {py});
    }
    if (!truth(x, v)) {
      NodeId nx = lit(x, v);
      NodeId w = bld_.assume(Lwff{seq_, x});
      NodeId m1 = bld_.apply("impE", Lwff{seq_, bot()}, {nx, w});
      NodeId m2 = bld_.apply("botE", Lwff{seq_, y}, {m1});
      return bld_.apply("impI", Lwff{seq_, g}, {m2}, {w});
    }
    NodeId px = lit(x, v);
    NodeId ny = lit(y, v);
    NodeId w = bld_.assume(Lwff{seq_, g});
    NodeId m1 = bld_.apply("impE", Lwff{seq_, y}, {w, px});
    NodeId m2 = bld_.apply("impE", Lwff{seq_, bot()}, {ny, m1});
    return bld_.apply("impI", Lwff{seq_, neg(g)}, {m2}, {w});
  }

  // Proof of f from the literals of atoms_[0..k) fixed by v.
  NodeId eliminate(Valuation& v, std::size_t k) {
    if (k == atoms_.size()) return lit(core_, v);
    const Formula& p = atoms_[k];
    v[p] = true;
    NodeId dt = eliminate(v, k + 1);
    v[p] = false;
    NodeId df = eliminate(v, k + 1);
    v.erase(p);
    NodeId pos = literal_leaf(p, true);
    NodeId negl = literal_leaf(p, false);
    NodeId z = bld_.assume(Lwff{seq_, neg(core_)});
    NodeId m = bld_.apply("impE", Lwff{seq_, bot()}, {z, dt});
    // A branch whose value does not depend on p never opens its literal.
    auto if_open = [&](NodeId under, NodeId leaf) {
      return open_assumption_ids(bld_.peek(), under).count(leaf) ? std::vector<NodeId>{leaf}
                                                                 : std::vector<NodeId>{};
    };
    NodeId n1 = bld_.apply("impI", Lwff{seq_, neg(p)}, {m}, if_open(m, pos));
    NodeId n2 =
        bld_.apply("impI", Lwff{seq_, Formula::implies(neg(p), core_)}, {df}, if_open(df, negl));
    NodeId n3 = bld_.apply("impE", Lwff{seq_, core_}, {n2, n1});
    NodeId n4 = bld_.apply("impE", Lwff{seq_, bot()}, {z, n3});
    return bld_.apply("botE", Lwff{seq_, core_}, {n4}, {z});
  }

  Formula shown_;
  Formula core_;
  LabelSeq seq_;
  std::vector<Formula> atoms_;
  std::map<std::pair<Formula, bool>, NodeId, LiteralLess> leaves_;
  Builder bld_;
};

Derivation tautology(const Formula& f, const Label& b, bool opaque) {
  if (!is_label_name(b.name)) throw std::invalid_argument("bad label '" + b.name + "'");
  if (!opaque && !is_propositional(f)) throw NotPropositional(print(f) + " is not propositional");
  return Kalmar(f, b, opaque).build();
}

}  // namespace

bool is_tautology(const Formula& f) {
  Formula c = desugar(f);
  std::set<Formula, FormulaLess> found;
  collect_atoms(c, true, found);
  std::vector<Formula> atoms(found.begin(), found.end());
  Valuation v;
  return all_valuations(atoms, v, 0, [&](const Valuation& val) { return truth(c, val); });
}

Derivation derive_tautology(const Formula& f, const Label& b) { return tautology(f, b, false); }

Derivation derive_tautology_instance(const Formula& f, const Label& b) {
  return tautology(f, b, true);
}

}  // namespace nabla
