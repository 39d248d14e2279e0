#include "nabla/kernel.hpp"

#include <algorithm>
#include <functional>

#include "nabla/translate.hpp"

namespace nabla {

const char* to_string(Reason r) {
  switch (r) {
    case Reason::ShapeMismatch: return "ShapeMismatch";
    case Reason::FreshnessViolation: return "FreshnessViolation";
    case Reason::NotLocalFormula: return "NotLocalFormula";
    case Reason::BadDischarge: return "BadDischarge";
    case Reason::UnknownRule: return "UnknownRule";
    case Reason::SequenceMismatch: return "SequenceMismatch";
  }
  return "?";
}

std::optional<Reason> reason_from_string(std::string_view s) {
  for (Reason r : {Reason::ShapeMismatch, Reason::FreshnessViolation, Reason::NotLocalFormula,
                   Reason::BadDischarge, Reason::UnknownRule, Reason::SequenceMismatch})
    if (s == to_string(r)) return r;
  return std::nullopt;
}

std::vector<std::size_t> hypothetical_premises(const std::string& rule) {
  static const std::map<std::string, std::vector<std::size_t>> kHyp{
      {"botE", {0}}, {"impI", {0}}, {"GI", {0}},      {"XI", {0}},      {"histI", {0}},
      {"serS", {0}}, {"linS", {3}}, {"reflLe", {0}},  {"transLe", {2}}, {"splitLe", {2, 3}},
      {"baseLe", {1}}, {"ind", {2}}};
  auto it = kHyp.find(rule);
  return it == kHyp.end() ? std::vector<std::size_t>{} : it->second;
}

namespace {

using OpenSet = std::map<NodeId, Generic>;

struct Failure {
  NodeId node;
  Reason reason;
  std::string message;
};

struct RuleError {
  Reason reason;
  std::string message;
};

[[noreturn]] void fail(Reason r, std::string msg) { throw RuleError{r, std::move(msg)}; }

void expect(bool ok, Reason r, const std::string& msg) {
  if (!ok) fail(r, msg);
}

LabelSeq init(const LabelSeq& s, std::size_t k) {
  return LabelSeq(s.begin(), s.end() - static_cast<std::ptrdiff_t>(k));
}

LabelSeq append(LabelSeq s, std::initializer_list<Label> tail) {
  s.insert(s.end(), tail.begin(), tail.end());
  return s;
}

bool is_rel(const Generic& g, RelKind k) {
  const auto* r = std::get_if<Rwff>(&g);
  return r && r->kind == k;
}

// Validates one application given its premises' judgments and open sets.
class RuleCheck {
 public:
  RuleCheck(const Derivation& d, const Application& app, std::vector<Generic> prem,
            std::vector<const OpenSet*> open)
      : d_(d), app_(app), c_(app.conclusion), prem_(std::move(prem)), open_(std::move(open)) {}

  OpenSet run() {
    const std::string& r = app_.rule;
    expect(!c_.seq.empty(), Reason::SequenceMismatch, "empty label sequence in conclusion");
    for (const auto& g : prem_)
      if (const auto* w = std::get_if<Lwff>(&g))
        expect(!w->seq.empty(), Reason::SequenceMismatch, "empty label sequence in a premise");
    if (r == "botE") bot_e();
    else if (r == "impI") imp_i();
    else if (r == "impE") imp_e();
    else if (r == "GI") intro_unary(Op::Always, RelKind::Le);
    else if (r == "XI") intro_unary(Op::Next, RelKind::Succ);
    else if (r == "GE") elim_unary(Op::Always, RelKind::Le);
    else if (r == "XE") elim_unary(Op::Next, RelKind::Succ);
    else if (r == "histI") hist_i();
    else if (r == "histE") hist_e();
    else if (r == "last") last();
    else if (r == "serS") ser_s();
    else if (r == "linS") lin_s();
    else if (r == "reflLe") refl_le();
    else if (r == "transLe") trans_le();
    else if (r == "eqLe") eq_le();
    else if (r == "splitLe") split_le();
    else if (r == "baseLe") base_le();
    else if (r == "ind") ind();
    else fail(Reason::UnknownRule, "unknown rule '" + r + "'");
    return combine();
  }

 private:
  using Pattern = std::function<bool(const Generic&)>;

  void arity(std::size_t n) {
    expect(prem_.size() == n, Reason::ShapeMismatch,
           app_.rule + " takes " + std::to_string(n) + " premises, got " +
               std::to_string(prem_.size()));
  }

  const Lwff& lw(std::size_t i) {
    const auto* w = std::get_if<Lwff>(&prem_[i]);
    expect(w != nullptr, Reason::ShapeMismatch,
           "premise " + std::to_string(i + 1) + " must be a labeled formula");
    return *w;
  }

  const Rwff& rw(std::size_t i, RelKind k) {
    expect(is_rel(prem_[i], k), Reason::ShapeMismatch,
           "premise " + std::to_string(i + 1) + " must be " +
               (k == RelKind::Le ? "a le(.,.)" : "a succ(.,.)") + " formula");
    return std::get<Rwff>(prem_[i]);
  }

  static Formula core(const Formula& f) { return desugar(f); }

  void same_formula(const Formula& a, const Formula& b, const std::string& what) {
    expect(a == b, Reason::ShapeMismatch, what + ": " + print(a) + " vs " + print(b));
  }

  void same_seq(const LabelSeq& a, const LabelSeq& b, const std::string& what) {
    expect(a == b, Reason::SequenceMismatch, what + ": " + print(a) + " vs " + print(b));
  }

  void min_len(const LabelSeq& s, std::size_t n, const std::string& what) {
    expect(s.size() >= n, Reason::SequenceMismatch,
           what + " needs at least " + std::to_string(n) + " labels");
  }

  // Premise conclusion identical to the rule's conclusion.
  void same_as_conclusion(std::size_t i) {
    const Lwff& w = lw(i);
    same_formula(w.formula, c_.formula, "premise " + std::to_string(i + 1) + " formula");
    same_seq(w.seq, c_.seq, "premise " + std::to_string(i + 1) + " labels");
  }

  // Assigns each listed discharge to the hypothetical premises where it is
  // open; it must match that premise's pattern.
  void discharge(std::map<std::size_t, Pattern> patterns) {
    for (NodeId x : app_.discharges) {
      expect(d_.contains(x) && d_.at(x).is_assumption(), Reason::BadDischarge,
             "discharged id " + std::to_string(x) + " is not an assumption");
      bool found = false;
      for (auto& [pos, pat] : patterns) {
        if (!open_[pos]->count(x)) continue;
        found = true;
        const Generic& g = open_[pos]->at(x);
        expect(pat(g), Reason::BadDischarge,
               "assumption " + std::to_string(x) + " (" + print(g) +
                   ") does not match the discharge pattern of premise " +
                   std::to_string(pos + 1));
        discharged_[pos].insert(x);
      }
      expect(found, Reason::BadDischarge,
             "assumption " + std::to_string(x) + " is not open in a hypothetical premise");
    }
  }

  void no_discharge() {
    expect(app_.discharges.empty(), Reason::BadDischarge, app_.rule + " discharges nothing");
  }

  std::vector<Generic> discharged_judgments(std::size_t pos) const {
    std::vector<Generic> out;
    auto it = discharged_.find(pos);
    if (it == discharged_.end()) return out;
    for (NodeId x : it->second) out.push_back(open_[pos]->at(x));
    return out;
  }

  // `l` must differ from `named`, stay out of the conclusion and out of the
  // open assumptions of premise `pos` that are not discharged here.
  void fresh(const Label& l, std::size_t pos, std::initializer_list<Label> named) {
    for (const Label& n : named)
      expect(l != n, Reason::FreshnessViolation,
             "label " + l.name + " must differ from " + n.name);
    for (const Label& n : c_.seq)
      expect(l != n, Reason::FreshnessViolation,
             "label " + l.name + " occurs in the conclusion");
    const auto& gone = discharged_[pos];
    for (const auto& [id, g] : *open_[pos]) {
      if (gone.count(id)) continue;
      expect(!mentions(g, l), Reason::FreshnessViolation,
             "label " + l.name + " occurs in open assumption " + std::to_string(id) + " (" +
                 print(g) + ")");
    }
  }

  void check_subst(const Label& from, const Label& to) {
    if (!app_.subst) return;
    expect(app_.subst->first == from && app_.subst->second == to, Reason::SequenceMismatch,
           "substitution must be " + from.name + " -> " + to.name);
  }

  OpenSet combine() {
    OpenSet out;
    for (std::size_t i = 0; i < prem_.size(); ++i) {
      const auto& gone = discharged_[i];
      for (const auto& [id, g] : *open_[i])
        if (!gone.count(id)) out.emplace(id, g);
    }
    return out;
  }

  // --- rules ---------------------------------------------------------------

  void bot_e() {
    arity(1);
    expect(core(lw(0).formula).op() == Op::Bottom, Reason::ShapeMismatch,
           "premise of botE must be bot");
    const Lwff target{c_.seq, Formula::implies(c_.formula, Formula::bottom())};
    discharge({{0, [&](const Generic& g) { return g == Generic{target}; }}});
  }

  void imp_i() {
    arity(1);
    Formula cf = core(c_.formula);
    expect(cf.op() == Op::Implies, Reason::ShapeMismatch, "impI concludes an implication");
    same_formula(lw(0).formula, cf.rhs(), "impI premise");
    same_seq(lw(0).seq, c_.seq, "impI premise labels");
    const Lwff target{c_.seq, cf.lhs()};
    discharge({{0, [&](const Generic& g) { return g == Generic{target}; }}});
  }

  void imp_e() {
    arity(2);
    no_discharge();
    Formula major = core(lw(0).formula);
    expect(major.op() == Op::Implies, Reason::ShapeMismatch,
           "first premise of impE must be an implication");
    same_formula(lw(1).formula, major.lhs(), "impE minor premise");
    same_formula(c_.formula, major.rhs(), "impE conclusion");
    same_seq(lw(0).seq, c_.seq, "impE major premise labels");
    same_seq(lw(1).seq, c_.seq, "impE minor premise labels");
  }

  void intro_unary(Op op, RelKind k) {
    arity(1);
    Formula cf = core(c_.formula);
    expect(cf.op() == op, Reason::ShapeMismatch, app_.rule + " conclusion has the wrong operator");
    const Lwff& p = lw(0);
    same_formula(p.formula, cf.arg(), app_.rule + " premise");
    min_len(p.seq, 2, app_.rule + " premise");
    same_seq(init(p.seq, 1), c_.seq, app_.rule + " premise prefix");
    const Label b1 = c_.seq.back();
    const Label b2 = p.seq.back();
    const Rwff target{k, b1, b2};
    discharge({{0, [&](const Generic& g) { return g == Generic{target}; }}});
    fresh(b2, 0, {b1});
  }

  void elim_unary(Op op, RelKind k) {
    arity(2);
    no_discharge();
    Formula pf = core(lw(0).formula);
    expect(pf.op() == op, Reason::ShapeMismatch, app_.rule + " major premise has the wrong operator");
    const Rwff& r = rw(1, k);
    same_formula(c_.formula, pf.arg(), app_.rule + " conclusion");
    expect(r.lhs == lw(0).seq.back(), Reason::SequenceMismatch,
           "relational premise must start at " + lw(0).seq.back().name);
    same_seq(c_.seq, append(lw(0).seq, {r.rhs}), app_.rule + " conclusion labels");
  }

  void hist_i() {
    arity(1);
    Formula cf = core(c_.formula);
    expect(cf.op() == Op::Hist, Reason::ShapeMismatch, "histI concludes a history formula");
    const Lwff& p = lw(0);
    same_formula(p.formula, cf.arg(), "histI premise");
    min_len(c_.seq, 2, "histI conclusion");
    min_len(p.seq, 2, "histI premise");
    same_seq(init(p.seq, 1), init(c_.seq, 1), "histI premise prefix");
    const Label b1 = c_.seq[c_.seq.size() - 2];
    const Label b3 = c_.seq.back();
    const Label b2 = p.seq.back();
    const Generic t1 = le(b1, b2);
    const Generic t2 = le(b2, b3);
    discharge({{0, [&](const Generic& g) { return g == t1 || g == t2; }}});
    fresh(b2, 0, {b1, b3});
  }

  void hist_e() {
    arity(3);
    no_discharge();
    const Lwff& p = lw(0);
    Formula pf = core(p.formula);
    expect(pf.op() == Op::Hist, Reason::ShapeMismatch, "histE major premise must be a history formula");
    const Rwff& r1 = rw(1, RelKind::Le);
    const Rwff& r2 = rw(2, RelKind::Le);
    same_formula(c_.formula, pf.arg(), "histE conclusion");
    min_len(p.seq, 2, "histE major premise");
    const Label b1 = p.seq[p.seq.size() - 2];
    const Label b3 = p.seq.back();
    const Label b2 = r1.rhs;
    expect(r1.lhs == b1, Reason::SequenceMismatch, "second premise must be le(" + b1.name + ",.)");
    expect(r2.lhs == b2 && r2.rhs == b3, Reason::SequenceMismatch,
           "third premise must be le(" + b2.name + "," + b3.name + ")");
    same_seq(c_.seq, append(init(p.seq, 1), {b2}), "histE conclusion labels");
  }

  void last() {
    arity(1);
    no_discharge();
    const Lwff& p = lw(0);
    same_formula(p.formula, c_.formula, "last premise");
    expect(p.seq.back() == c_.seq.back(), Reason::SequenceMismatch,
           "last keeps the final label: " + p.seq.back().name + " vs " + c_.seq.back().name);
    expect(classify_local(core(c_.formula)) == LocalClass::Local, Reason::NotLocalFormula,
           print(c_.formula) + " is not a local formula");
  }

  void ser_s() {
    arity(1);
    same_as_conclusion(0);
    discharge({{0, [](const Generic& g) { return is_rel(g, RelKind::Succ); }}});
    auto ds = discharged_judgments(0);
    if (ds.empty()) return;
    const Rwff first = std::get<Rwff>(ds.front());
    for (const auto& g : ds)
      expect(g == Generic{first}, Reason::BadDischarge, "serS discharges one successor formula");
    fresh(first.rhs, 0, {first.lhs});
  }

  void lin_s() {
    arity(4);
    const Rwff& r1 = rw(0, RelKind::Succ);
    const Rwff& r2 = rw(1, RelKind::Succ);
    expect(r1.lhs == r2.lhs, Reason::SequenceMismatch, "linS premises must share their source");
    same_as_conclusion(3);
    check_subst(r1.rhs, r2.rhs);
    const Generic target = subst_label(prem_[2], r1.rhs, r2.rhs);
    discharge({{3, [&](const Generic& g) { return g == target; }}});
  }

  void refl_le() {
    arity(1);
    same_as_conclusion(0);
    discharge({{0, [](const Generic& g) {
                  return is_rel(g, RelKind::Le) && std::get<Rwff>(g).lhs == std::get<Rwff>(g).rhs;
                }}});
  }

  void trans_le() {
    arity(3);
    const Rwff& r1 = rw(0, RelKind::Le);
    const Rwff& r2 = rw(1, RelKind::Le);
    expect(r1.rhs == r2.lhs, Reason::SequenceMismatch, "transLe premises must chain");
    same_as_conclusion(2);
    const Generic target = le(r1.lhs, r2.rhs);
    discharge({{2, [&](const Generic& g) { return g == target; }}});
  }

  void eq_le() {
    arity(3);
    no_discharge();
    const Rwff& r1 = rw(0, RelKind::Le);
    const Rwff& r2 = rw(1, RelKind::Le);
    expect(r2.lhs == r1.rhs && r2.rhs == r1.lhs, Reason::SequenceMismatch,
           "eqLe premises must be converse");
    const Lwff& p = lw(2);
    same_formula(p.formula, c_.formula, "eqLe premise");
    expect(p.seq.back() == r1.lhs, Reason::SequenceMismatch,
           "eqLe premise must end in " + r1.lhs.name);
    same_seq(c_.seq, append(init(p.seq, 1), {r1.rhs}), "eqLe conclusion labels");
  }

  void split_le() {
    arity(4);
    const Rwff& r = rw(0, RelKind::Le);
    const Label b1 = r.lhs;
    const Label b2 = r.rhs;
    same_as_conclusion(2);
    same_as_conclusion(3);
    check_subst(b1, b2);
    const Generic target = subst_label(prem_[1], b1, b2);
    discharge({{2, [&](const Generic& g) { return g == target; }},
               {3, [&](const Generic& g) {
                  const auto* x = std::get_if<Rwff>(&g);
                  return x && ((x->kind == RelKind::Succ && x->lhs == b1) ||
                               (x->kind == RelKind::Le && x->rhs == b2));
                }}});
    std::optional<Label> mid;
    for (const auto& g : discharged_judgments(3)) {
      const Rwff& x = std::get<Rwff>(g);
      Label m = x.kind == RelKind::Succ ? x.rhs : x.lhs;
      expect(!mid || *mid == m, Reason::BadDischarge,
             "splitLe discharges disagree on the intermediate label");
      mid = m;
    }
    if (mid) fresh(*mid, 3, {b1, b2});
  }

  void base_le() {
    arity(2);
    const Rwff& r = rw(0, RelKind::Succ);
    same_as_conclusion(1);
    const Generic target = le(r.lhs, r.rhs);
    discharge({{1, [&](const Generic& g) { return g == target; }}});
  }

  void ind() {
    arity(3);
    const Lwff& base = lw(0);
    const Rwff& r = rw(1, RelKind::Le);
    const Lwff& step = lw(2);
    same_formula(base.formula, c_.formula, "ind base premise");
    same_formula(step.formula, c_.formula, "ind step premise");
    const LabelSeq alpha = init(c_.seq, 1);
    same_seq(init(base.seq, std::min<std::size_t>(1, base.seq.size())), alpha, "ind base prefix");
    same_seq(init(step.seq, std::min<std::size_t>(1, step.seq.size())), alpha, "ind step prefix");
    const Label b0 = base.seq.back();
    const Label b = c_.seq.back();
    const Label bj = step.seq.back();
    expect(r.lhs == b0 && r.rhs == b, Reason::SequenceMismatch,
           "ind needs le(" + b0.name + "," + b.name + ")");
    const Formula a = c_.formula;
    discharge({{2, [&](const Generic& g) {
                  if (const auto* x = std::get_if<Rwff>(&g)) {
                    if (x->kind == RelKind::Le) return x->lhs == b0;
                    return x->rhs == bj;
                  }
                  const Lwff& w = std::get<Lwff>(g);
                  return w.formula == a && w.seq.size() == c_.seq.size() && init(w.seq, 1) == alpha;
                }}});
    std::optional<Label> bi;
    for (const auto& g : discharged_judgments(2)) {
      Label m;
      if (const auto* x = std::get_if<Rwff>(&g)) m = x->kind == RelKind::Le ? x->rhs : x->lhs;
      else m = std::get<Lwff>(g).seq.back();
      expect(!bi || *bi == m, Reason::BadDischarge, "ind discharges disagree on the label b_i");
      bi = m;
    }
    fresh(bj, 2, {b0, b});
    if (bi) {
      expect(*bi != bj, Reason::FreshnessViolation, "b_i and b_j must differ");
      fresh(*bi, 2, {b0, b});
    }
  }

  const Derivation& d_;
  const Application& app_;
  const Lwff& c_;
  std::vector<Generic> prem_;
  std::vector<const OpenSet*> open_;
  std::map<std::size_t, std::set<NodeId>> discharged_;
};

class Checker {
 public:
  explicit Checker(const Derivation& d) : d_(d) {}

  const OpenSet& visit(NodeId id) {
    if (auto it = memo_.find(id); it != memo_.end()) return it->second;
    if (!active_.insert(id).second)
      throw Failure{id, Reason::ShapeMismatch, "step " + std::to_string(id) + " depends on itself"};
    const Step& s = d_.at(id);
    OpenSet open;
    if (s.is_assumption()) {
      open.emplace(id, s.assumption().judgment);
    } else {
      const Application& app = s.application();
      std::vector<Generic> prem;
      std::vector<const OpenSet*> opens;
      for (NodeId p : app.premises) {
        if (!d_.contains(p))
          throw Failure{id, Reason::ShapeMismatch, "premise " + std::to_string(p) + " does not exist"};
        opens.push_back(&visit(p));
        prem.push_back(d_.judgment(p));
      }
      if (!is_primitive_rule(app.rule))
        throw Failure{id, Reason::UnknownRule, "unknown rule '" + app.rule + "'"};
      try {
        open = RuleCheck(d_, app, std::move(prem), std::move(opens)).run();
      } catch (const RuleError& e) {
        throw Failure{id, e.reason, app.rule + ": " + e.message};
      }
    }
    active_.erase(id);
    return memo_.emplace(id, std::move(open)).first->second;
  }

 private:
  const Derivation& d_;
  std::map<NodeId, OpenSet> memo_;
  std::set<NodeId> active_;
};

}  // namespace

CheckReport check(const Derivation& d) {
  CheckReport rep;
  if (!d.contains(d.root)) {
    rep.node = d.root;
    rep.reason = Reason::ShapeMismatch;
    rep.message = "root step " + std::to_string(d.root) + " does not exist";
    return rep;
  }
  try {
    Checker c(d);
    const OpenSet& open = c.visit(d.root);
    Generic g = d.judgment(d.root);
    if (!std::holds_alternative<Lwff>(g)) {
      rep.node = d.root;
      rep.reason = Reason::ShapeMismatch;
      rep.message = "a derivation concludes a labeled formula";
      return rep;
    }
    rep.accepted = true;
    rep.conclusion = std::get<Lwff>(g);
    for (const auto& [id, j] : open) rep.open_assumptions.insert(j);
  } catch (const Failure& f) {
    rep.node = f.node;
    rep.reason = f.reason;
    rep.message = f.message;
  }
  return rep;
}

std::map<NodeId, Generic> open_assumption_ids(const Derivation& d, NodeId root) {
  std::map<NodeId, OpenSet> memo;
  std::function<const OpenSet&(NodeId)> go = [&](NodeId id) -> const OpenSet& {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    OpenSet out;
    const Step& s = d.at(id);
    if (s.is_assumption()) {
      out.emplace(id, s.assumption().judgment);
    } else {
      const Application& app = s.application();
      auto hyps = hypothetical_premises(app.rule);
      std::set<NodeId> gone(app.discharges.begin(), app.discharges.end());
      for (std::size_t i = 0; i < app.premises.size(); ++i) {
        bool hyp = std::find(hyps.begin(), hyps.end(), i) != hyps.end();
        for (const auto& [x, g] : go(app.premises[i]))
          if (!hyp || !gone.count(x)) out.emplace(x, g);
      }
    }
    return memo.emplace(id, std::move(out)).first->second;
  };
  return go(root);
}

GenericSet open_assumptions(const Derivation& d) {
  GenericSet out;
  for (const auto& [id, g] : open_assumption_ids(d, d.root)) out.insert(g);
  return out;
}

std::set<Label> labels_of(const Derivation& d) {
  std::set<Label> out;
  for (const auto& [id, s] : d.steps) {
    if (s.is_assumption()) {
      collect_labels(s.assumption().judgment, out);
    } else {
      const Application& a = s.application();
      out.insert(a.conclusion.seq.begin(), a.conclusion.seq.end());
      if (a.subst) {
        out.insert(a.subst->first);
        out.insert(a.subst->second);
      }
    }
  }
  return out;
}

Derivation rename_labels(const Derivation& d, const std::map<Label, Label>& mapping) {
  auto f = [&](const Label& l) {
    auto it = mapping.find(l);
    return it == mapping.end() ? l : it->second;
  };
  std::map<Label, Label> image;
  for (const Label& l : labels_of(d)) {
    Label to = f(l);
    for (const auto& [other, t] : image)
      if (t == to)
        throw NonInjectiveRenaming("labels " + other.name + " and " + l.name + " both map to " +
                                   to.name);
    image.emplace(l, to);
  }
  auto seq = [&](LabelSeq s) {
    for (Label& l : s) l = f(l);
    return s;
  };
  Derivation out = d;
  for (auto& [id, s] : out.steps) {
    if (auto* as = std::get_if<Assumption>(&s.body)) {
      if (auto* w = std::get_if<Lwff>(&as->judgment)) w->seq = seq(w->seq);
      else {
        auto& r = std::get<Rwff>(as->judgment);
        r.lhs = f(r.lhs);
        r.rhs = f(r.rhs);
      }
    } else {
      auto& a = std::get<Application>(s.body);
      a.conclusion.seq = seq(a.conclusion.seq);
      if (a.subst) a.subst = LabelPair{f(a.subst->first), f(a.subst->second)};
    }
  }
  return out;
}

SourceMap sources_of(const Derivation& d) {
  SourceMap out;
  for (const auto& [id, f] : d.sources)
    if (d.contains(id)) out.insert_or_assign(d.judgment(id), f);
  return out;
}

bool is_ltl_derivation(const Derivation& d, const SourceMap& sources) {
  Generic root = d.judgment(d.root);
  const auto* c = std::get_if<Lwff>(&root);
  if (!c || c->seq.size() != 1) return false;
  const Label b = c->seq.front();
  GenericSet open = open_assumptions(d);
  for (const auto& g : open) {
    const auto* w = std::get_if<Lwff>(&g);
    if (!w || w->seq != LabelSeq{b}) return false;
  }
  auto matches = [&](const Generic& g) {
    auto it = sources.find(g);
    if (it == sources.end()) throw MissingAnnotation("no LTL source for " + print(g));
    return matches_translation(it->second, std::get<Lwff>(g).formula);
  };
  if (!matches(root)) return false;
  for (const auto& g : open)
    if (!matches(g)) return false;
  return true;
}

}  // namespace nabla
