#include "doctest.h"

#include "tlkit/formula.hpp"
#include "tlkit/parser.hpp"

using namespace tlkit;

namespace {

// parse -> print -> parse must close the loop, and the printed form must be
// a fixed point of its own round trip
void check_round_trip(const std::string& text) {
    CAPTURE(text);
    Formula f = parse_formula(text);
    std::string printed = format_formula(f);
    Formula again = parse_formula(printed);
    CHECK(formula_equal(f, again));
    CHECK(format_formula(again) == printed);
}

} // namespace

TEST_CASE("parse and print round trips across the grammar") {
    for (const char* text : {
             "true",
             "false",
             "a",
             "!a",
             "a & b & c",
             "a | b -> c <-> d",
             "a U b",
             "a U[[0,3]] (c S (P<>[[0,1]] d))",
             "a Uns b",
             "a Sns[[0,2]] b",
             "F[(0,2)] a",
             "G[(0,1)] (a -> b)",
             "PG[(1,2)] a",
             "O[(0,1)] a",
             "Obar a",
             "Fns (a & b)",
             "Gns a",
             "G (a -> F b)",
             "x.(a U (b & T-x in (0,1)))",
             "x.(a S (b & x-T in [-1,0]))",
             "x.(T-x in (0,inf))",
             "Rat[(0,1)]{({a}+{a,b})*}",
             "FRat[[0,2]]{{b}*.{a}}",
             "PRat[[0,1]]{{a}.{b}*}",
             "Fk[[0,1];[1,2]]{{a}* | {b} | 1}",
             "Pk[[0,1]]{{a,b}* | {a}*}",
         }) {
        check_round_trip(text);
    }
}

TEST_CASE("printing inserts parentheses only where reparsing needs them") {
    Formula f = parse_formula("a U[[0,3]] (c S (P<>[[0,1]] d))");
    // U/S are right associative in the grammar, so the parens drop away
    CHECK(format_formula(f) == "a U[[0,3]] c S P<>[[0,1]] d");
    CHECK(format_formula(parse_formula("(a & b) | c")) == "a & b | c");
    CHECK(format_formula(parse_formula("a & (b | c)")) == "a & (b | c)");
    CHECK(format_formula(parse_formula("!(a U b)")) == "!(a U b)");
    CHECK(format_formula(parse_formula("(a U b) U c")) == "(a U b) U c");
}

TEST_CASE("freeze shorthand expands to the anchored constraint") {
    CHECK(formula_equal(parse_formula("x.(x in (0,1))"),
                        parse_formula("x.(T-x in (0,1))")));
}

TEST_CASE("constraints must be closed by an enclosing freeze quantifier") {
    CHECK_THROWS_AS(parse_formula("T-x in (0,1)"), Error);
    CHECK_THROWS_AS(parse_formula("x.(T-y in (0,1))"), Error);
    CHECK_NOTHROW(parse_formula("x.(y.(T-x in (0,1) & y-T in [0,0]))"));
    // formula-set members inside automata are separate closed formulas
    CHECK_THROWS_AS(parse_formula("x.(Rat[(0,1)]{{T-x in (0,1)}*})"), Error);
}

TEST_CASE("modal windows require nonnegative lower bounds") {
    CHECK_THROWS_AS(parse_formula("a U[[-1,2]] b"), Error);
    CHECK_THROWS_AS(parse_formula("F[[-1,0]] a"), Error);
    CHECK_THROWS_AS(f_until_ns(f_atom("a"), f_atom("b"),
                               Interval::closed(-1, 0)),
                    Error);
    CHECK_THROWS_AS(parse_formula("Rat[[-2,-1]]{{a}}"), Error);
    // constraint intervals may be negative, only modal subscripts may not
    CHECK_NOTHROW(parse_formula("x.(x-T in [-2,-1])"));
}

TEST_CASE("pnueli modalities need one slot more than intervals") {
    CHECK_THROWS_AS(parse_formula("Fk[[0,1]]{{a} | {b} | {a,b}}"), Error);
    CHECK_THROWS_AS(parse_formula("Fk[[0,1];[1,2]]{{a} | {b}}"), Error);
    CHECK_NOTHROW(parse_formula("Fk[[0,1]]{{a} | {b}}"));
}

TEST_CASE("parse diagnostics on malformed input") {
    CHECK_THROWS_AS(parse_formula(""), Error);
    CHECK_THROWS_AS(parse_formula("a &"), Error);
    CHECK_THROWS_AS(parse_formula("a U"), Error);
    CHECK_THROWS_AS(parse_formula("(a"), Error);
    CHECK_THROWS_AS(parse_formula("a b"), Error);
    CHECK_THROWS_AS(parse_formula("a U[0,1] b"), Error);  // missing brackets
    CHECK_THROWS_AS(parse_formula("Fns[[0,1]] a"), Error);
    CHECK_THROWS_AS(parse_formula("U"), Error);
    CHECK_THROWS_AS(parse_formula("Rat{...}"), Error);
}

TEST_CASE("n-ary connectives keep their arity, singletons collapse") {
    Formula three = parse_formula("a & b & c");
    CHECK(three->kind == Kind::And);
    CHECK(three->kids.size() == 3);
    Formula single = f_and({f_atom("a")});
    CHECK(single->kind == Kind::Atom);
    CHECK(f_or({f_atom("b")})->kind == Kind::Atom);
}

TEST_CASE("structural equality and hashing see through separate parses") {
    Formula f = parse_formula("x.(a U (b & T-x in (0,1)))");
    Formula g = parse_formula("x.( a U (b & T-x in (0,1)) )");
    CHECK(formula_equal(f, g));
    CHECK(formula_hash(f) == formula_hash(g));
    CHECK(formula_cmp(f, g) == 0);
    Formula h = parse_formula("x.(a U (b & T-x in (0,2)))");
    CHECK_FALSE(formula_equal(f, h));
    CHECK(formula_cmp(f, h) != 0);
    CHECK((formula_less(f, h) || formula_less(h, f)));
}

TEST_CASE("atom and freeze variable collection reach inside automata") {
    Formula f = parse_formula("x.(a U (T-x in (0,1) & Rat[(0,1)]{{c}.{d}*}))");
    CHECK(collect_atoms(f) == std::set<std::string>{"a", "c", "d"});
    CHECK(collect_freeze_vars(f) == std::set<std::string>{"x"});
    CHECK(collect_atoms(parse_formula("true")).empty());
}

TEST_CASE("sugar kinds are flagged for rewriting") {
    CHECK(is_sugar(Kind::Iff));
    CHECK(is_sugar(Kind::Next));
    CHECK(is_sugar(Kind::UntilNs));
    CHECK_FALSE(is_sugar(Kind::Until));
    CHECK_FALSE(is_sugar(Kind::Freeze));
    CHECK_FALSE(is_sugar(Kind::Rat));
    // untimed G parses straight to the core box
    CHECK(parse_formula("G a")->kind == Kind::Always);
    CHECK(parse_formula("G[(0,1)] a")->kind == Kind::BoxT);
    CHECK(parse_formula("PG a")->kind == Kind::AlwaysPast);
}
