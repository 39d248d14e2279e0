#include "nabla/gen.hpp"

#include <functional>
#include <set>

#include "nabla/kernel.hpp"

namespace nabla {

Derivation prune(const Derivation& d) {
  Derivation out;
  out.root = d.root;
  std::function<void(NodeId)> walk = [&](NodeId id) {
    if (out.contains(id) || !d.contains(id)) return;
    const Step& s = d.at(id);
    out.steps.emplace(id, s);
    if (s.is_assumption()) return;
    for (NodeId p : s.application().premises) walk(p);
    for (NodeId x : s.application().discharges) walk(x);
  };
  walk(d.root);
  for (const auto& [id, f] : d.sources)
    if (out.contains(id)) out.sources.emplace(id, f);
  return out;
}

namespace {

class Generator {
 public:
  Generator(Rng& rng, const DerivationGenOptions& o) : rng_(rng), o_(o) {}

  Derivation run() {
    for (std::size_t i = 0; i < o_.moves; ++i) {
      const NodeId mark = next_;
      std::optional<NodeId> made = move();
      if (made && accepted(*made)) {
        rules_.push_back(*made);
      } else {
        d_.steps.erase(d_.steps.lower_bound(mark), d_.steps.end());
        next_ = mark;
      }
    }
    // Root at the largest subderivation.
    Derivation best;
    for (NodeId r : rules_) {
      d_.root = r;
      Derivation cand = prune(d_);
      if (cand.steps.size() >= best.steps.size()) best = std::move(cand);
    }
    return best;
  }

 private:
  Rng& rng_;
  const DerivationGenOptions& o_;
  Derivation d_;
  NodeId next_ = 1;
  std::vector<NodeId> rules_;
  int fresh_count_ = 0;

  bool accepted(NodeId id) {
    Derivation probe;
    probe.steps = d_.steps;
    probe.root = id;
    return check(probe).accepted;
  }

  NodeId add(Step s) {
    NodeId id = next_++;
    s.id = id;
    d_.steps.emplace(id, std::move(s));
    return id;
  }
  NodeId assume(Generic g) { return add(Step{0, Assumption{std::move(g)}}); }
  NodeId apply(std::string rule, Lwff concl, std::vector<NodeId> prem,
               std::vector<NodeId> disch = {}, std::optional<LabelPair> subst = {}) {
    return add(Step{0, Application{std::move(rule), std::move(concl), std::move(prem),
                                   std::move(disch), std::move(subst)}});
  }

  Label pool_label() {
    static const std::vector<std::string> pool{"b", "c", "d"};
    return Label{rng_.pick(pool)};
  }
  Label new_label() { return Label{"f" + std::to_string(++fresh_count_)}; }
  Label some_label() { return rng_.coin() ? pool_label() : new_label(); }

  LabelSeq random_seq(std::size_t max_len) {
    LabelSeq s(rng_.uniform(1, max_len));
    for (auto& l : s) l = pool_label();
    return s;
  }

  Formula random_formula() { return random_hist(rng_, o_.max_formula, o_.alphabet); }

  // Any existing step proving an lwff.
  std::optional<std::pair<NodeId, Lwff>> pick_lwff() {
    std::vector<std::pair<NodeId, Lwff>> xs;
    for (const auto& [id, s] : d_.steps) {
      Generic g = d_.judgment(id);
      if (auto* w = std::get_if<Lwff>(&g)) xs.emplace_back(id, *w);
    }
    if (xs.empty()) return std::nullopt;
    // Favour recent steps so moves build on each other.
    if (xs.size() > 4 && rng_.coin()) xs.erase(xs.begin(), xs.end() - 4);
    return rng_.pick(xs);
  }

  // Open ids in `id` equal to g.
  std::vector<NodeId> matching(NodeId id, const Generic& g) {
    std::vector<NodeId> out;
    for (auto& [k, h] : open_assumption_ids(d_, id))
      if (h == g) out.push_back(k);
    return out;
  }

  template <typename Pred>
  std::optional<std::pair<NodeId, Generic>> pick_open(NodeId id, Pred pred) {
    std::vector<std::pair<NodeId, Generic>> xs;
    for (auto& [k, g] : open_assumption_ids(d_, id))
      if (pred(g)) xs.emplace_back(k, g);
    if (xs.empty()) return std::nullopt;
    return rng_.pick(xs);
  }

  static const Rwff* as_rel(const Generic& g, RelKind k) {
    const Rwff* r = std::get_if<Rwff>(&g);
    return r && r->kind == k ? r : nullptr;
  }

  std::optional<NodeId> move() {
    switch (rng_.uniform(0, 17)) {
      case 16: return intro_chain();
      case 17: return ser_chain();
      case 0: return assume(Lwff{random_seq(2), random_formula()});
      case 1: {
        Label a = pool_label(), b = pool_label();
        return assume(rng_.coin() ? Generic{le(a, b)} : Generic{succ(a, b)});
      }
      case 2: return imp_intro();
      case 3: return imp_elim();
      case 4: return box_elim(Op::Always);
      case 5: return box_elim(Op::Next);
      case 6: return box_intro(Op::Always);
      case 7: return box_intro(Op::Next);
      case 8: return hist_elim();
      case 9: return hist_intro();
      case 10: return last();
      case 11: return bot_elim();
      case 12: return relational();
      case 13: return trans_le();
      case 14: return eq_le();
      default: return lin();
    }
  }

  std::optional<NodeId> imp_intro() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    const LabelSeq& a = n->second.seq;
    auto hyp = pick_open(n->first, [&](const Generic& g) {
      auto* w = std::get_if<Lwff>(&g);
      return w && w->seq == a;
    });
    Formula lhs = hyp ? std::get<Lwff>(hyp->second).formula : random_formula();
    std::vector<NodeId> disch = hyp ? matching(n->first, hyp->second) : std::vector<NodeId>{};
    return apply("impI", Lwff{a, Formula::implies(lhs, n->second.formula)}, {n->first}, disch);
  }

  std::optional<NodeId> imp_elim() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    Formula f = desugar(n->second.formula);
    if (f.op() != Op::Implies) return std::nullopt;
    NodeId minor = assume(Lwff{n->second.seq, f.lhs()});
    return apply("impE", Lwff{n->second.seq, f.rhs()}, {n->first, minor});
  }

  std::optional<NodeId> box_elim(Op op) {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    Formula f = desugar(n->second.formula);
    if (f.op() != op) return std::nullopt;
    Label b1 = n->second.seq.back(), b2 = some_label();
    NodeId rel = assume(op == Op::Always ? le(b1, b2) : succ(b1, b2));
    LabelSeq s = n->second.seq;
    s.push_back(b2);
    return apply(op == Op::Always ? "GE" : "XE", Lwff{s, f.arg()}, {n->first, rel});
  }

  std::optional<NodeId> box_intro(Op op) {
    auto n = pick_lwff();
    if (!n || n->second.seq.size() < 2) return std::nullopt;
    LabelSeq s = n->second.seq;
    Label b2 = s.back();
    s.pop_back();
    Label b1 = s.back();
    Rwff r = op == Op::Always ? le(b1, b2) : succ(b1, b2);
    Formula f = op == Op::Always ? Formula::always(n->second.formula)
                                 : Formula::next(n->second.formula);
    return apply(op == Op::Always ? "GI" : "XI", Lwff{s, f}, {n->first}, matching(n->first, r));
  }

  std::optional<NodeId> hist_elim() {
    auto n = pick_lwff();
    if (!n || n->second.seq.size() < 2) return std::nullopt;
    Formula f = desugar(n->second.formula);
    if (f.op() != Op::Hist) return std::nullopt;
    LabelSeq s = n->second.seq;
    Label b3 = s.back();
    s.pop_back();
    Label b1 = s.back(), b2 = some_label();
    NodeId r1 = assume(le(b1, b2)), r2 = assume(le(b2, b3));
    s.push_back(b2);
    return apply("histE", Lwff{s, f.arg()}, {n->first, r1, r2});
  }

  std::optional<NodeId> hist_intro() {
    auto n = pick_lwff();
    if (!n || n->second.seq.size() < 2) return std::nullopt;
    LabelSeq s = n->second.seq;
    Label b2 = s.back();
    s.pop_back();
    Label b1 = s.back();
    auto up = pick_open(n->first, [&](const Generic& g) {
      auto* r = as_rel(g, RelKind::Le);
      return r && r->lhs == b2;
    });
    Label b3 = up ? std::get<Rwff>(up->second).rhs : pool_label();
    std::vector<NodeId> disch = matching(n->first, le(b1, b2));
    for (NodeId x : matching(n->first, le(b2, b3))) disch.push_back(x);
    s.push_back(b3);
    return apply("histI", Lwff{s, Formula::hist(n->second.formula)}, {n->first}, disch);
  }

  std::optional<NodeId> last() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    LabelSeq s;
    for (std::size_t k = rng_.uniform(0, 2); k > 0; --k) s.push_back(pool_label());
    s.push_back(n->second.seq.back());
    return apply("last", Lwff{s, n->second.formula}, {n->first});
  }

  std::optional<NodeId> bot_elim() {
    auto n = pick_lwff();
    if (!n || desugar(n->second.formula).op() != Op::Bottom) return std::nullopt;
    auto neg = pick_open(n->first, [](const Generic& g) {
      auto* w = std::get_if<Lwff>(&g);
      if (!w) return false;
      Formula f = desugar(w->formula);
      return f.op() == Op::Implies && f.rhs().op() == Op::Bottom;
    });
    if (neg) {
      const Lwff& w = std::get<Lwff>(neg->second);
      return apply("botE", Lwff{w.seq, desugar(w.formula).lhs()}, {n->first},
                   matching(n->first, neg->second));
    }
    return apply("botE", Lwff{random_seq(2), random_formula()}, {n->first});
  }

  // reflLe, serS or baseLe, discharging a relational assumption.
  std::optional<NodeId> relational() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    switch (rng_.uniform(0, 2)) {
      case 0: {
        auto r = pick_open(n->first, [](const Generic& g) {
          auto* x = as_rel(g, RelKind::Le);
          return x && x->lhs == x->rhs;
        });
        if (!r) return std::nullopt;
        return apply("reflLe", n->second, {n->first}, matching(n->first, r->second));
      }
      case 1: {
        auto r = pick_open(n->first, [](const Generic& g) { return as_rel(g, RelKind::Succ); });
        if (!r) return std::nullopt;
        return apply("serS", n->second, {n->first}, matching(n->first, r->second));
      }
      default: {
        auto r = pick_open(n->first, [](const Generic& g) { return as_rel(g, RelKind::Le); });
        if (!r) return std::nullopt;
        const Rwff& x = std::get<Rwff>(r->second);
        NodeId s = assume(succ(x.lhs, x.rhs));
        return apply("baseLe", n->second, {s, n->first}, matching(n->first, r->second));
      }
    }
  }

  std::optional<NodeId> trans_le() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    auto r = pick_open(n->first, [](const Generic& g) { return as_rel(g, RelKind::Le); });
    if (!r) return std::nullopt;
    const Rwff& x = std::get<Rwff>(r->second);
    Label mid = pool_label();
    NodeId a = assume(le(x.lhs, mid)), b = assume(le(mid, x.rhs));
    return apply("transLe", n->second, {a, b, n->first}, matching(n->first, r->second));
  }

  std::optional<NodeId> eq_le() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    Label b1 = n->second.seq.back(), b2 = pool_label();
    NodeId a = assume(le(b1, b2)), b = assume(le(b2, b1));
    LabelSeq s = n->second.seq;
    s.back() = b2;
    return apply("eqLe", Lwff{s, n->second.formula}, {a, b, n->first});
  }

  // A closed proof of alpha b1 x:(A -> A) with x new, then GI, XI or histI.
  std::optional<NodeId> intro_chain() {
    LabelSeq s;
    if (rng_.coin()) s.push_back(pool_label());
    Label b1 = pool_label(), x = new_label();
    s.push_back(b1);
    LabelSeq inner = s;
    inner.push_back(x);
    Formula a = random_formula();
    NodeId h = assume(Lwff{inner, a});
    Formula aa = Formula::implies(a, a);
    NodeId id = apply("impI", Lwff{inner, aa}, {h}, {h});
    switch (rng_.uniform(0, 2)) {
      case 0: return apply("GI", Lwff{s, Formula::always(aa)}, {id});
      case 1: return apply("XI", Lwff{s, Formula::next(aa)}, {id});
      default:
        s.push_back(pool_label());
        return apply("histI", Lwff{s, Formula::hist(aa)}, {id});
    }
  }

  // baseLe over a new successor assumption, closed again by serS.
  std::optional<NodeId> ser_chain() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    Label b1 = pool_label(), x = new_label();
    NodeId sc = assume(succ(b1, x));
    NodeId base = apply("baseLe", n->second, {sc, n->first}, matching(n->first, le(b1, x)));
    return apply("serS", n->second, {base}, {sc});
  }

  // linS: the hypothetical premise uses b3 where the proved premise uses b2.
  std::optional<NodeId> lin() {
    auto n = pick_lwff();
    if (!n) return std::nullopt;
    auto phi3 = pick_open(n->first, [](const Generic&) { return true; });
    if (!phi3) return std::nullopt;
    std::set<Label> ls;
    collect_labels(phi3->second, ls);
    std::vector<Label> v(ls.begin(), ls.end());
    Label b3 = rng_.pick(v), b2 = new_label(), b1 = pool_label();
    Generic phi = subst_label(phi3->second, b3, b2);
    NodeId s1 = assume(succ(b1, b2)), s2 = assume(succ(b1, b3)), p = assume(phi);
    return apply("linS", n->second, {s1, s2, p, n->first}, matching(n->first, phi3->second),
                 LabelPair{b2, b3});
  }
};

std::size_t rule_count(const Derivation& d) {
  std::size_t n = 0;
  for (const auto& [id, s] : d.steps) n += !s.is_assumption();
  return n;
}

}  // namespace

Derivation random_derivation(Rng& rng, const DerivationGenOptions& opts) {
  for (;;) {
    Derivation d = Generator(rng, opts).run();
    if (!d.steps.empty() && rule_count(d) >= opts.min_rules) return d;
  }
}

}  // namespace nabla
