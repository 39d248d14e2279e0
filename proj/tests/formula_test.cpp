#include <gtest/gtest.h>

#include "nabla/formula.hpp"
#include "nabla/random.hpp"

using namespace nabla;

TEST(Parse, Examples) {
  EXPECT_TRUE(parse_ltl("(p U q)").identical(Formula::until(Formula::atom("p"), Formula::atom("q"))));
  EXPECT_TRUE(parse_h("(H p)").identical(Formula::hist(Formula::atom("p"))));
  EXPECT_TRUE(parse_h("(p | q)").identical(Formula::disj(Formula::atom("p"), Formula::atom("q"))));
  EXPECT_TRUE(parse_ltl("  ( G   bot )").identical(Formula::always(Formula::bottom())));
}

TEST(Parse, LanguageSeparation) {
  EXPECT_THROW(parse_ltl("(H p)"), ParseError);
  EXPECT_THROW(parse_h("(p U q)"), ParseError);
}

TEST(Parse, Malformed) {
  for (const char* s : {"", "(p -> q", "p -> q", "(p q)", "(G p q)", "((p))", "(p -> q))",
                        "(-> p q)", "(G)", "1p"}) {
    EXPECT_THROW(parse_ltl(s), ParseError) << s;
  }
}

TEST(Parse, ErrorOffset) {
  try {
    parse_ltl("(p -> )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
}

TEST(Print, RoundTripRandom) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = i % 2 ? random_ltl(rng, 50) : random_hist(rng, 50);
    std::string s = print(f);
    Formula g = i % 2 ? parse_ltl(s) : parse_h(s);
    EXPECT_TRUE(g.identical(f)) << s;
  }
}

TEST(Print, RoundTripSugar) {
  for (const char* s : {"(~ p)", "(p | q)", "(p & q)", "(F p)", "((F (H p)) & (~ bot))"})
    EXPECT_EQ(print(parse_h(s)), s);
}

TEST(Desugar, Examples) {
  EXPECT_TRUE(desugar(parse_h("(~ p)")).identical(parse_h("(p -> bot)")));
  EXPECT_TRUE(desugar(parse_h("(F p)")).identical(parse_h("((G (p -> bot)) -> bot)")));
  EXPECT_TRUE(desugar(parse_h("p")).identical(parse_h("p")));
}

TEST(Desugar, IdempotentAndGrowing) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Formula f = random_hist(rng, 8);
    // Sprinkle sugar over the core output of the generator.
    Formula g = i % 3 == 0 ? Formula::sometime(f)
                : i % 3 == 1 ? Formula::conj(f, Formula::negation(f))
                             : Formula::disj(Formula::atom("p"), f);
    Formula d = desugar(g);
    EXPECT_TRUE(d.is_core());
    EXPECT_TRUE(desugar(d).identical(d));
    EXPECT_GE(d.size(), g.size());
    EXPECT_EQ(d, g);
  }
}

TEST(Complexity, Examples) {
  EXPECT_EQ(complexity(parse_ltl("p")), 0u);
  EXPECT_EQ(complexity(parse_ltl("((G p) -> (X (p U bot)))")), 4u);
  EXPECT_EQ(complexity(parse_h("(H p)")), 1u);
  EXPECT_EQ(complexity(parse_h("bot")), 0u);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_local(parse_h("(G (H p))")), LocalClass::Local);
  EXPECT_EQ(classify_local(parse_h("(H p)")), LocalClass::HistOnly);
  EXPECT_EQ(classify_local(parse_h("(p -> (H q))")), LocalClass::HistOnly);
  EXPECT_EQ(classify_local(parse_h("(X ((H p) -> q))")), LocalClass::Local);
}

TEST(Classify, NeverNeither) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i)
    EXPECT_NE(classify_local(random_hist(rng, 10)), LocalClass::Neither);
}

TEST(Equality, ModuloSugar) {
  EXPECT_EQ(parse_h("(~ p)"), parse_h("(p -> bot)"));
  EXPECT_FALSE(parse_h("(~ p)").identical(parse_h("(p -> bot)")));
  EXPECT_NE(parse_h("(p | q)"), parse_h("(q | p)"));
}

// Frozen from tests/oracles/oracle.py: formula, complexity, class, desugared.
struct MetricRow {
  const char* formula;
  std::size_t complexity;
  LocalClass cls;
  const char* core;
};

const MetricRow kMetricRows[] = {
{"(((H q) | bot) | q)", 5, LocalClass::HistOnly, "(((((H q) -> bot) -> bot) -> bot) -> q)"},
{"(G q)", 1, LocalClass::Local, "(G q)"},
{"q", 0, LocalClass::Local, "q"},
{"(F ((H bot) | q))", 6, LocalClass::Local, "((G ((((H bot) -> bot) -> q) -> bot)) -> bot)"},
{"(H (X bot))", 2, LocalClass::HistOnly, "(H (X bot))"},
{"bot", 0, LocalClass::Local, "bot"},
{"(p -> (q -> p))", 2, LocalClass::Local, "(p -> (q -> p))"},
{"(q -> (p & bot))", 6, LocalClass::Local, "(q -> ((((p -> bot) -> bot) -> (bot -> bot)) -> bot))"},
{"(X bot)", 1, LocalClass::Local, "(X bot)"},
{"(F (G p))", 4, LocalClass::Local, "((G ((G p) -> bot)) -> bot)"},
{"(p & ((q | q) -> p))", 8, LocalClass::Local, "((((p -> bot) -> bot) -> ((((q -> bot) -> q) -> p) -> bot)) -> bot)"},
{"(G ((~ bot) | q))", 4, LocalClass::Local, "(G (((bot -> bot) -> bot) -> q))"},
{"(~ (H (X (G bot))))", 4, LocalClass::HistOnly, "((H (X (G bot))) -> bot)"},
{"(X (q & q))", 6, LocalClass::Local, "(X ((((q -> bot) -> bot) -> (q -> bot)) -> bot))"},
{"p", 0, LocalClass::Local, "p"},
{"(p & (bot -> (q & p)))", 11, LocalClass::Local, "((((p -> bot) -> bot) -> ((bot -> ((((q -> bot) -> bot) -> (p -> bot)) -> bot)) -> bot)) -> bot)"},
{"(p & (G q))", 6, LocalClass::Local, "((((p -> bot) -> bot) -> ((G q) -> bot)) -> bot)"},
{"(q | q)", 2, LocalClass::Local, "((q -> bot) -> q)"},
{"((H q) | (~ bot))", 4, LocalClass::HistOnly, "(((H q) -> bot) -> (bot -> bot))"},
{"(F (F q))", 6, LocalClass::Local, "((G (((G (q -> bot)) -> bot) -> bot)) -> bot)"},
{"(~ p)", 1, LocalClass::Local, "(p -> bot)"},
{"(bot & (~ (X (~ (G p)))))", 9, LocalClass::Local, "((((bot -> bot) -> bot) -> (((X ((G p) -> bot)) -> bot) -> bot)) -> bot)"},
{"(X (F (G (F (bot | q)))))", 10, LocalClass::Local, "(X ((G ((G ((G (((bot -> bot) -> q) -> bot)) -> bot)) -> bot)) -> bot))"},
{"(G (F (q -> q)))", 5, LocalClass::Local, "(G ((G ((q -> q) -> bot)) -> bot))"},
};

TEST(Oracle, FormulaMetrics) {
  for (const auto& row : kMetricRows) {
    Formula f = parse_h(row.formula);
    EXPECT_EQ(complexity(f), row.complexity) << row.formula;
    EXPECT_EQ(classify_local(desugar(f)), row.cls) << row.formula;
    EXPECT_EQ(print(desugar(f)), row.core) << row.formula;
  }
}
