#include <gtest/gtest.h>

#include <string>

#include "nabla/corpus.hpp"
#include "nabla/derived.hpp"
#include "nabla/gen.hpp"
#include "nabla/kernel.hpp"
#include "nabla/script.hpp"
#include "test_util.hpp"

using namespace nabla;
using nabla::test::check_text;
using nabla::test::lw;

namespace {

void expect_accepts(const std::string& text, std::size_t open) {
  CheckReport r = check_text(text);
  ASSERT_TRUE(r.accepted) << to_string(r.reason) << " at " << r.node << ": " << r.message;
  EXPECT_EQ(r.open_assumptions.size(), open);
}

void expect_rejects(const std::string& text, Reason reason, NodeId node) {
  CheckReport r = check_text(text);
  ASSERT_FALSE(r.accepted);
  EXPECT_EQ(to_string(r.reason), std::string(to_string(reason))) << r.message;
  EXPECT_EQ(r.node, node) << r.message;
}

const std::string kCorpus = NABLA_CORPUS_DIR;

}  // namespace

// --- one block per rule -----------------------------------------------------

TEST(Rules, BotE) {
  expect_accepts(R"(
assume 1 lwff b : (p -> bot)
assume 2 lwff b : ((p -> bot) -> bot)
node 3 impE concl b : bot prem 2,1
node 4 botE concl b : p prem 3 disch 1
root 4
)",
                 1);
  // Only a:(A -> bot) may be discharged.
  expect_rejects(R"(
assume 1 lwff b : (p -> bot)
assume 2 lwff b : p
node 3 impE concl b : bot prem 1,2
node 4 botE concl b : p prem 3 disch 2
root 4
)",
                 Reason::BadDischarge, 4);
  // The premise must be bot.
  expect_rejects(R"(
assume 1 lwff b : q
node 2 botE concl b : p prem 1
root 2
)",
                 Reason::ShapeMismatch, 2);
}

TEST(Rules, BotEOtherSequence) {
  // The bot premise may carry any label sequence.
  expect_accepts(R"(
assume 1 lwff c d : bot
node 2 botE concl b : p prem 1
root 2
)",
                 1);
}

TEST(Rules, ImpIAndImpE) {
  expect_accepts(R"(
assume 1 lwff b : p
node 2 impI concl b : (p -> p) prem 1 disch 1
root 2
)",
                 0);
  // Vacuous discharge.
  expect_accepts(R"(
assume 1 lwff b : p
node 2 impI concl b : (q -> p) prem 1
root 2
)",
                 1);
  expect_rejects(R"(
assume 1 lwff b : (p -> q)
assume 2 lwff b : q
node 3 impE concl b : q prem 1,2
root 3
)",
                 Reason::ShapeMismatch, 3);
  expect_rejects(R"(
assume 1 lwff b : (p -> q)
assume 2 lwff c : p
node 3 impE concl b : q prem 1,2
root 3
)",
                 Reason::SequenceMismatch, 3);
  // impI's conclusion label must match the premise.
  expect_rejects(R"(
assume 1 lwff b : p
node 2 impI concl c : (p -> p) prem 1 disch 1
root 2
)",
                 Reason::SequenceMismatch, 2);
}

const char* kGI = R"(
assume 1 lwff b : (G p)
assume 2 rwff le(b,c)
node 3 GE concl b c : p prem 1,2
node 4 GI concl b : (G p) prem 3 disch 2
root 4
)";

TEST(Rules, GIAndGE) {
  expect_accepts(kGI, 1);
  // Without the discharge, le(b,c) stays open and c is not fresh.
  std::string vac = kGI;
  vac.replace(vac.find(" disch 2"), 8, "");
  expect_rejects(vac, Reason::FreshnessViolation, 4);
  // GE needs a G major premise.
  expect_rejects(R"(
assume 1 lwff b : (X p)
assume 2 rwff le(b,c)
node 3 GE concl b c : p prem 1,2
root 3
)",
                 Reason::ShapeMismatch, 3);
  // The relational premise starts at the last label.
  expect_rejects(R"(
assume 1 lwff b : (G p)
assume 2 rwff le(d,c)
node 3 GE concl b c : p prem 1,2
root 3
)",
                 Reason::SequenceMismatch, 3);
  // GE takes le, not succ.
  expect_rejects(R"(
assume 1 lwff b : (G p)
assume 2 rwff succ(b,c)
node 3 GE concl b c : p prem 1,2
root 3
)",
                 Reason::ShapeMismatch, 3);
}

TEST(Rules, XIAndXE) {
  expect_accepts(R"(
assume 1 lwff b : (X p)
assume 2 rwff succ(b,c)
node 3 XE concl b c : p prem 1,2
node 4 XI concl b : (X p) prem 3 disch 2
root 4
)",
                 1);
  // XI must discharge succ, not le.
  expect_rejects(R"(
assume 1 lwff b : (G p)
assume 2 rwff le(b,c)
node 3 GE concl b c : p prem 1,2
node 4 XI concl b : (X p) prem 3 disch 2
root 4
)",
                 Reason::BadDischarge, 4);
  // The eigenlabel may not occur in the conclusion sequence.
  expect_rejects(R"(
assume 1 lwff c : (X p)
assume 2 rwff succ(c,c)
node 3 XE concl c c : p prem 1,2
node 4 XI concl c : (X p) prem 3 disch 2
root 4
)",
                 Reason::FreshnessViolation, 4);
}

const char* kHist = R"(
assume 1 lwff b c : (H p)
assume 2 rwff le(b,d)
assume 3 rwff le(d,c)
node 4 histE concl b d : p prem 1,2,3
node 5 histI concl b c : (H p) prem 4 disch 2,3
root 5
)";

TEST(Rules, HistIAndHistE) {
  expect_accepts(kHist, 1);
  // Middle label equal to the right end.
  expect_rejects(R"(
assume 1 lwff b c : (H p)
assume 2 rwff le(b,c)
assume 3 rwff le(c,c)
node 4 histE concl b c : p prem 1,2,3
node 5 histI concl b c : (H p) prem 4 disch 2,3
root 5
)",
                 Reason::FreshnessViolation, 5);
  // Third premise must be le(d,c).
  expect_rejects(R"(
assume 1 lwff b c : (H p)
assume 2 rwff le(b,d)
assume 3 rwff le(c,d)
node 4 histE concl b d : p prem 1,2,3
root 4
)",
                 Reason::SequenceMismatch, 4);
  // histE replaces the last label; it does not append.
  expect_rejects(R"(
assume 1 lwff b c : (H p)
assume 2 rwff le(b,d)
assume 3 rwff le(d,c)
node 4 histE concl b c d : p prem 1,2,3
root 4
)",
                 Reason::SequenceMismatch, 4);
  // histI only discharges the two le formulas around the middle label.
  expect_rejects(R"(
assume 1 lwff b c : (H p)
assume 2 rwff le(b,d)
assume 3 rwff le(d,c)
node 4 histE concl b d : p prem 1,2,3
node 5 histI concl b c : (H p) prem 4 disch 1,2,3
root 5
)",
                 Reason::BadDischarge, 5);
}

TEST(Rules, Last) {
  expect_accepts(R"(
assume 1 lwff b c : (G (H p))
node 2 last concl d e c : (G (H p)) prem 1
root 2
)",
                 1);
  expect_rejects(R"(
assume 1 lwff b c : (H p)
node 2 last concl c : (H p) prem 1
root 2
)",
                 Reason::NotLocalFormula, 2);
  expect_rejects(R"(
assume 1 lwff b c : ((H p) -> q)
node 2 last concl c : ((H p) -> q) prem 1
root 2
)",
                 Reason::NotLocalFormula, 2);
  expect_rejects(R"(
assume 1 lwff b c : p
node 2 last concl b : p prem 1
root 2
)",
                 Reason::SequenceMismatch, 2);
}

TEST(Rules, SerS) {
  expect_accepts(R"(
assume 1 rwff succ(b,c)
assume 2 lwff b : p
node 3 baseLe concl b : p prem 1,2
node 4 serS concl b : p prem 3 disch 1
root 4
)",
                 1);
  // Successor label appears in the conclusion.
  expect_rejects(R"(
assume 1 rwff succ(b,c)
assume 2 lwff c : p
node 3 baseLe concl c : p prem 1,2
node 4 serS concl c : p prem 3 disch 1
root 4
)",
                 Reason::FreshnessViolation, 4);
  // Only succ formulas are discharged.
  expect_rejects(R"(
assume 1 lwff b : (G p)
assume 2 rwff le(b,c)
node 3 GE concl b c : p prem 1,2
node 4 serS concl b c : p prem 3 disch 2
root 4
)",
                 Reason::BadDischarge, 4);
}

const char* kLin = R"(
assume 1 rwff succ(b,c)
assume 2 rwff succ(b,d)
assume 3 lwff b c : p
assume 4 lwff b d : p
node 5 linS concl b d : p prem 1,2,3,4 disch 4 subst c d
root 5
)";

TEST(Rules, LinS) {
  expect_accepts(kLin, 3);
  std::string wrong_subst = kLin;
  wrong_subst.replace(wrong_subst.find("subst c d"), 9, "subst d c");
  expect_rejects(wrong_subst, Reason::SequenceMismatch, 5);
  std::string wrong_disch = kLin;
  wrong_disch.replace(wrong_disch.find("disch 4"), 7, "disch 3");
  expect_rejects(wrong_disch, Reason::BadDischarge, 5);
  std::string split_source = kLin;
  split_source.replace(split_source.find("succ(b,d)"), 9, "succ(e,d)");
  expect_rejects(split_source, Reason::SequenceMismatch, 5);
}

TEST(Rules, ReflLe) {
  expect_accepts(R"(
assume 1 lwff b : (G p)
assume 2 rwff le(b,b)
node 3 GE concl b b : p prem 1,2
node 4 reflLe concl b b : p prem 3 disch 2
root 4
)",
                 1);
  expect_rejects(R"(
assume 1 lwff b : (G p)
assume 2 rwff le(b,c)
node 3 GE concl b c : p prem 1,2
node 4 reflLe concl b c : p prem 3 disch 2
root 4
)",
                 Reason::BadDischarge, 4);
}

TEST(Rules, TransLe) {
  expect_accepts(R"(
assume 1 rwff le(b,c)
assume 2 rwff le(c,d)
assume 3 lwff b : (G p)
assume 4 rwff le(b,d)
node 5 GE concl b d : p prem 3,4
node 6 transLe concl b d : p prem 1,2,5 disch 4
root 6
)",
                 3);
  expect_rejects(R"(
assume 1 rwff le(b,c)
assume 2 rwff le(e,d)
assume 3 lwff b : (G p)
assume 4 rwff le(b,d)
node 5 GE concl b d : p prem 3,4
node 6 transLe concl b d : p prem 1,2,5 disch 4
root 6
)",
                 Reason::SequenceMismatch, 6);
}

TEST(Rules, EqLe) {
  expect_accepts(R"(
assume 1 rwff le(b,c)
assume 2 rwff le(c,b)
assume 3 lwff d b : p
node 4 eqLe concl d c : p prem 1,2,3
root 4
)",
                 3);
  expect_rejects(R"(
assume 1 rwff le(b,c)
assume 2 rwff le(c,d)
assume 3 lwff d b : p
node 4 eqLe concl d c : p prem 1,2,3
root 4
)",
                 Reason::SequenceMismatch, 4);
  expect_rejects(R"(
assume 1 rwff le(b,c)
assume 2 rwff le(c,b)
assume 3 lwff d b : p
node 4 eqLe concl d c : p prem 1,2,3 disch 1
root 4
)",
                 Reason::BadDischarge, 4);
}

const char* kSplit = R"(
assume 1 rwff le(b,c)
assume 2 lwff b : p
assume 3 lwff c : p
assume 4 rwff succ(b,e)
assume 7 lwff c : p
node 5 baseLe concl c : p prem 4,7
node 6 splitLe concl c : p prem 1,2,3,5 disch 3,4 subst b c
root 6
)";

TEST(Rules, SplitLe) {
  expect_accepts(kSplit, 3);
  std::string stale = kSplit;
  for (std::size_t at; (at = stale.find("succ(b,e)")) != std::string::npos;)
    stale.replace(at, 9, "succ(b,c)");
  expect_rejects(stale, Reason::FreshnessViolation, 6);
  std::string no_subst = kSplit;
  no_subst.replace(no_subst.find("subst b c"), 9, "subst c b");
  expect_rejects(no_subst, Reason::SequenceMismatch, 6);
}

TEST(Rules, BaseLe) {
  expect_rejects(R"(
assume 1 rwff le(b,c)
assume 2 lwff b : p
node 3 baseLe concl b : p prem 1,2
root 3
)",
                 Reason::ShapeMismatch, 3);
}

TEST(Rules, Ind) {
  expect_accepts(read_file(kCorpus + "/A6.ndp"), 0);
  std::string bad = read_file(kCorpus + "/A6.ndp");
  bad.replace(bad.find("prem 2,3,11"), 11, "prem 2,4,11");
  expect_rejects(bad, Reason::SequenceMismatch, 12);
}

TEST(Rules, UnknownAndArity) {
  expect_rejects(R"(
assume 1 lwff b : p
node 2 orIntro concl b : p prem 1
root 2
)",
                 Reason::UnknownRule, 2);
  expect_rejects(R"(
assume 1 lwff b : p
node 2 impE concl b : p prem 1
root 2
)",
                 Reason::ShapeMismatch, 2);
}

TEST(Rules, FirstFailureInPremiseOrder) {
  CheckReport r = check_text(R"(
assume 1 lwff b : p
node 2 last concl c : (H p) prem 1
node 3 bogus concl c : p prem 2
root 3
)");
  ASSERT_FALSE(r.accepted);
  EXPECT_EQ(r.node, 2);
}

TEST(Check, Deterministic) {
  Derivation d = load_script(kCorpus + "/A7R.ndp");
  Derivation e = expand_derived(d);
  CheckReport a = check(e), b = check(e);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.open_assumptions.size(), b.open_assumptions.size());
}

// --- operations -------------------------------------------------------------

TEST(SubstLabel, Examples) {
  Label b{"b"}, c{"c"}, d{"d"};
  EXPECT_EQ(subst_label(lw({"b", "c"}, "p"), c, d), lw({"b", "d"}, "p"));
  EXPECT_EQ(subst_label(le(b, c), b, d), le(d, c));
  EXPECT_EQ(subst_label(lw({"b", "b"}, "p"), b, d), lw({"d", "d"}, "p"));
  EXPECT_EQ(subst_label(Generic{succ(b, b)}, b, c), Generic{succ(c, c)});
  EXPECT_EQ(subst_label(lw({"c"}, "(G b)"), b, d), lw({"c"}, "(G b)"));
}

TEST(OpenAssumptions, Examples) {
  auto single = parse_script("assume 1 lwff b : p\nroot 1\n");
  GenericSet s = open_assumptions(single);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(*s.begin(), Generic{lw({"b"}, "p")});
  EXPECT_TRUE(open_assumptions(parse_script(
                  "assume 1 lwff b : p\nnode 2 impI concl b : (p -> p) prem 1 disch 1\nroot 2\n"))
                  .empty());
  EXPECT_EQ(open_assumptions(parse_script(
                "assume 1 lwff b : p\nnode 2 impI concl b : (p -> p) prem 1\nroot 2\n"))
                .size(),
            1u);
}

TEST(OpenAssumptions, SetSemantics) {
  // Two leaves with the same judgment count once.
  auto d = parse_script(R"(
assume 1 lwff b : (p -> q)
assume 2 lwff b : p
assume 3 lwff b : p
node 4 impE concl b : q prem 1,2
node 5 impE concl b : q prem 1,3
node 6 impI concl b : (p -> q) prem 5 disch 3
root 6
)");
  EXPECT_EQ(open_assumptions(d).size(), 1u);
  EXPECT_EQ(open_assumption_ids(d, 4).size(), 2u);
}

TEST(LtlDerivation, Examples) {
  Derivation a6 = load_script(kCorpus + "/A6.ndp");
  ASSERT_TRUE(check(a6).accepted);
  EXPECT_TRUE(is_ltl_derivation(a6, sources_of(a6)));
}

TEST(LtlDerivation, SingleLabelRequired) {
  Derivation d = parse_script(R"(
assume 1 lwff c : p
node 2 impI concl c : (q -> p) prem 1
ltl 1 p
ltl 2 (q -> p)
root 2
)");
  ASSERT_TRUE(check(d).accepted);
  EXPECT_TRUE(is_ltl_derivation(d, sources_of(d)));

  Derivation two = parse_script(R"(
assume 1 lwff c : bot
node 2 botE concl b : p prem 1
ltl 1 bot
ltl 2 p
root 2
)");
  ASSERT_TRUE(check(two).accepted);
  EXPECT_FALSE(is_ltl_derivation(two, sources_of(two)));
}

TEST(LtlDerivation, OpenRwffOrLongSequence) {
  Derivation rel = parse_script(R"(
assume 1 lwff b : (G p)
assume 2 rwff le(b,b)
node 3 GE concl b b : p prem 1,2
node 4 last concl b : p prem 3
ltl 1 (G p)
ltl 4 p
root 4
)");
  ASSERT_TRUE(check(rel).accepted);
  EXPECT_FALSE(is_ltl_derivation(rel, sources_of(rel)));

  Derivation mismatch = parse_script(R"(
assume 1 lwff b : p
node 2 impI concl b : (p -> p) prem 1 disch 1
ltl 2 (q -> q)
root 2
)");
  EXPECT_FALSE(is_ltl_derivation(mismatch, sources_of(mismatch)));
}

TEST(LtlDerivation, MissingAnnotation) {
  Derivation d = parse_script("assume 1 lwff b : p\nnode 2 impI concl b : (q -> p) prem 1\nroot 2\n");
  ASSERT_TRUE(check(d).accepted);
  EXPECT_THROW(is_ltl_derivation(d, sources_of(d)), MissingAnnotation);
}

TEST(RenameLabels, Examples) {
  Derivation a6 = load_script(kCorpus + "/A6.ndp");
  Derivation same = rename_labels(a6, {});
  EXPECT_EQ(print_script(same), print_script(a6));

  Derivation moved = rename_labels(a6, {{Label{"b"}, Label{"b'"}}});
  CheckReport r = check(moved);
  ASSERT_TRUE(r.accepted);
  EXPECT_TRUE(r.closed());
  EXPECT_EQ(r.conclusion->seq, LabelSeq{Label{"b'"}});

  EXPECT_THROW(rename_labels(a6, {{Label{"b"}, Label{"c"}}}), NonInjectiveRenaming);
  // Swapping is a bijection.
  Derivation swapped = rename_labels(a6, {{Label{"b"}, Label{"c"}}, {Label{"c"}, Label{"b"}}});
  EXPECT_TRUE(check(swapped).closed());
}

TEST(RenameLabels, PreservesVerdictOnRandomDerivations) {
  Rng rng(61);
  for (int i = 0; i < 40; ++i) {
    Derivation d = random_derivation(rng);
    std::map<Label, Label> m;
    for (const Label& l : labels_of(d)) m[l] = Label{l.name + "x"};
    Derivation e = rename_labels(d, m);
    CheckReport a = check(d), b = check(e);
    ASSERT_TRUE(a.accepted);
    ASSERT_TRUE(b.accepted) << b.message;
    EXPECT_EQ(a.open_assumptions.size(), b.open_assumptions.size());
  }
}

// Every discharged id must be an open leaf of one of the rule's hypothetical
// premises.
void audit(const Derivation& d) {
  for (const auto& [id, step] : d.steps) {
    if (step.is_assumption()) continue;
    const Application& app = step.application();
    std::set<NodeId> reachable;
    for (std::size_t i : hypothetical_premises(app.rule)) {
      ASSERT_LT(i, app.premises.size());
      for (const auto& [x, g] : open_assumption_ids(d, app.premises[i])) reachable.insert(x);
    }
    for (NodeId x : app.discharges) EXPECT_TRUE(reachable.count(x)) << "step " << id << " id " << x;
  }
}

TEST(StructuralAudit, Corpus) {
  for (const auto& [name, d] : corpus_proofs(kCorpus)) {
    SCOPED_TRACE(name);
    ASSERT_TRUE(check(d).accepted);
    audit(d);
  }
}

TEST(StructuralAudit, RandomDerivations) {
  Rng rng(67);
  for (int i = 0; i < 50; ++i) audit(random_derivation(rng));
}

TEST(HypotheticalPremises, Table) {
  EXPECT_EQ(hypothetical_premises("splitLe"), (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(hypothetical_premises("linS"), (std::vector<std::size_t>{3}));
  EXPECT_TRUE(hypothetical_premises("GE").empty());
  EXPECT_EQ(primitive_rules().size(), 18u);
}

// --- script format ----------------------------------------------------------

TEST(Script, RoundTrip) {
  for (const auto& name : corpus_entry_names()) {
    Derivation d = load_script(kCorpus + "/" + name + ".ndp");
    Derivation e = parse_script(print_script(d));
    EXPECT_EQ(print_script(e), print_script(d)) << name;
    EXPECT_EQ(e.root, d.root);
  }
}

TEST(Script, Errors) {
  struct Case {
    const char* text;
    std::size_t line;
  };
  const Case cases[] = {
      {"assume 1 lwff b : p\nfrob\nroot 1\n", 2},
      {"assume 1 lwff b : p\nassume 1 lwff c : p\nroot 1\n", 2},
      {"assume 1 lwff b : p\nnode 2 impI concl b : (p -> p) prem 7\nroot 2\n", 2},
      {"assume 1 lwff b : (p ->\nroot 1\n", 1},
      {"assume 1 lwff : p\nroot 1\n", 1},
      {"assume 1 rwff lt(b,c)\nroot 1\n", 1},
      {"assume 1 lwff b : p\nroot 9\n", 2},
      {"assume x lwff b : p\nroot 1\n", 1},
  };
  for (const auto& c : cases) {
    try {
      parse_script(c.text);
      ADD_FAILURE() << c.text;
    } catch (const ScriptError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text << " -> " << e.what();
    }
  }
  EXPECT_THROW(parse_script("assume 1 lwff b : p\n"), ScriptError);
}

TEST(Script, UntilOnlyInAnnotations) {
  EXPECT_THROW(parse_script("assume 1 lwff b : (p U q)\nroot 1\n"), ScriptError);
  EXPECT_NO_THROW(parse_script("assume 1 lwff b : p\nltl 1 (p U p)\nroot 1\n"));
}
