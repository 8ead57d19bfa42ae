#include <doctest.h>

#include <algorithm>

#include "ctxprob/formula.hpp"
#include "support.hpp"

using namespace ctxprob;

TEST_CASE("parse builds the grammar-forced tree") {
  const auto f = parse_formula("P:E@c1(x) & !S:s0(x)");
  CHECK(f == (Formula::property("E", "c1") & !Formula::state("s0")));

  const auto g = parse_formula("S:s0(x) | S:s1(x) & S:s2(x)");
  CHECK(g == (Formula::state("s0") | (Formula::state("s1") & Formula::state("s2"))));
}

TEST_CASE("binary operators associate to the left") {
  const auto a = Formula::state("a");
  const auto b = Formula::state("b");
  const auto c = Formula::state("c");
  CHECK(parse_formula("S:a(x) & S:b(x) & S:c(x)") == ((a & b) & c));
  CHECK(parse_formula("S:a(x) | S:b(x) | S:c(x)") == ((a | b) | c));
  CHECK(parse_formula("!!S:a(x)") == !!a);
  CHECK(parse_formula("!(S:a(x) | S:b(x))") == !(a | b));
  CHECK(parse_formula("  ( S:a(x) )  ") == a);
}

TEST_CASE("names accept punctuation and UTF-8") {
  CHECK(parse_formula("S:z+(x)") == Formula::state("z+"));
  CHECK(parse_formula("P:spin_1.5-@ctx.2(x)") == Formula::property("spin_1.5-", "ctx.2"));
  CHECK(parse_formula("S:\xCF\x88(x)") == Formula::state("\xCF\x88"));
}

TEST_CASE("syntax errors carry offset and expected tokens") {
  try {
    parse_formula("P:E@(x)");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse_formula(""), SyntaxError);
  CHECK_THROWS_AS(parse_formula("S:a(x) &"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("(S:a(x)"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("S:a(x))"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("S:a(y)"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("Q:a(x)"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("P:E(x)"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("S:(x)"), SyntaxError);
  try {
    parse_formula("S:a(x) S:b(x)");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 7);
  }
}

TEST_CASE("print uses the minimum parentheses") {
  const auto a = Formula::state("a");
  const auto b = Formula::state("b");
  const auto c = Formula::state("c");
  CHECK(print(a & b & c) == "S:a(x) & S:b(x) & S:c(x)");
  CHECK(print(a & (b & c)) == "S:a(x) & (S:b(x) & S:c(x))");
  CHECK(print(a | (b & c)) == "S:a(x) | S:b(x) & S:c(x)");
  CHECK(print((a | b) & c) == "(S:a(x) | S:b(x)) & S:c(x)");
  CHECK(print(!(a & b)) == "!(S:a(x) & S:b(x))");
  CHECK(print(!Formula::property("E", "c1")) == "!P:E@c1(x)");
}

TEST_CASE("parse after print is the identity on trees") {
  std::mt19937_64 rng(23);
  const auto atoms = support::standard_atoms(6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = random_formula(rng, atoms, 6);
    CHECK(f.depth() <= 6);
    const auto text = print(f);
    const auto g = parse_formula(text);
    CHECK(g == f);
    CHECK(print(g) == text);
  }
}

TEST_CASE("print after parse is canonical on strings") {
  for (const char* text : {"(S:a(x))", "((S:a(x) & S:b(x)) | !(!S:c(x)))", "S:a(x)|S:b(x)&S:c(x)",
                           "!(P:E@c(x))&(S:a(x)|S:b(x))"}) {
    const auto once = print(parse_formula(text));
    CHECK(print(parse_formula(once)) == once);
  }
}

TEST_CASE("atoms_of lists distinct atoms in order") {
  const auto f = parse_formula("S:a(x) & (P:E@c1(x) | !S:a(x)) & P:E@c2(x)");
  const auto atoms = atoms_of(f);
  REQUIRE(atoms.size() == 3);
  CHECK(to_string(atoms[0]) == "S:a(x)");
  CHECK(to_string(atoms[1]) == "P:E@c1(x)");
  CHECK(to_string(atoms[2]) == "P:E@c2(x)");
}

TEST_CASE("reindex rewrites one context and is invertible") {
  const auto f = parse_formula("P:E@c1(x) & !P:F@c1(x) | P:G@c3(x) & S:s(x)");
  const auto g = reindex(f, ContextId{"c1"}, ContextId{"c2"});
  CHECK(print(g) == "P:E@c2(x) & !P:F@c2(x) | P:G@c3(x) & S:s(x)");
  CHECK(reindex(g, ContextId{"c2"}, ContextId{"c1"}) == f);
}
