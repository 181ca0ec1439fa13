#include "doctest.h"

#include "tlkit/evaluator.hpp"
#include "tlkit/fuzz.hpp"
#include "tlkit/parser.hpp"
#include "tlkit/rewrite.hpp"

#include "support/generators.hpp"

using namespace tlkit;

namespace {

bool in_nnf(const Formula& f) {
    switch (f->kind) {
    case Kind::True_:
    case Kind::False_:
    case Kind::Atom:
    case Kind::TmX:
    case Kind::XmT:
        return true;
    case Kind::Not:
        return f->kids[0]->kind == Kind::Atom;
    case Kind::And:
    case Kind::Or:
    case Kind::Until:
    case Kind::Since:
    case Kind::Always:
    case Kind::AlwaysPast:
    case Kind::Freeze:
        for (const auto& k : f->kids)
            if (!in_nnf(k))
                return false;
        return (f->kind != Kind::Until && f->kind != Kind::Since) || !f->ivl;
    default:
        return false;
    }
}

// pointwise agreement of two closed formulas over every short word
void check_equivalent(const Formula& f, const Formula& g) {
    testing::for_each_word({"a", "b"}, 3, [&](const TimedWord& w) {
        Evaluator ev(w);
        for (std::size_t pos = 1; pos <= w.size(); ++pos) {
            if (ev.eval(f, pos) != ev.eval(g, pos)) {
                CAPTURE(format_formula(f));
                CAPTURE(format_formula(g));
                CAPTURE(w.to_string());
                CAPTURE(pos);
                CHECK(ev.eval(f, pos) == ev.eval(g, pos));
                return false;
            }
        }
        return true;
    });
}

} // namespace

TEST_CASE("desugar pins: every sugar kind lowers to its defining form") {
    auto same = [](const char* sugar, const char* core) {
        CAPTURE(sugar);
        CHECK(formula_equal(desugar(parse_formula(sugar)), parse_formula(core)));
    };
    same("F[(0,1)] a", "true U[(0,1)] a");
    same("F a", "true U a");
    same("P<>[[0,1]] d", "true S[[0,1]] d");
    same("G[(0,1)] a", "!(true U[(0,1)] !a)");
    same("PG[(1,2)] a", "!(true S[(1,2)] !a)");
    same("O a", "false U a");
    same("O[(0,1)] b", "false U[(0,1)] b");
    same("Obar a", "false S a");
    same("a Uns[(0,2)] b", "b | (a & (a U[(0,2)] b))");
    same("a Sns b", "b | (a & (a S b))");
    same("Fns a", "a | (true U a)");
    same("Gns a", "a & G a");
    same("a -> b", "!a | b");
    same("a <-> b", "(!a | b) & (!b | a)");
    // core kinds pass through untouched, including automata modalities
    Formula rat = parse_formula("Rat[(0,1)]{({a}+{a,b})*}");
    CHECK(formula_equal(desugar(rat), rat));
    Formula core = parse_formula("x.(a U (b & T-x in (0,1)))");
    CHECK(formula_equal(desugar(core), core));
}

TEST_CASE("desugar preserves pointwise truth on the kind-spanning suite") {
    for (const Formula& f : testing::kind_spanning_suite())
        check_equivalent(f, desugar(f));
}

TEST_CASE("negation normal form rewrites and stays equivalent") {
    for (const char* text : {
             "!(a U b)",
             "!(a S b)",
             "!(G a)",
             "!(PG b)",
             "!!a",
             "!(a & (b | !a))",
             "!x.(a U (b & T-x in (0,1)))",
             "x.(!(a U (T-x in [1,2])))",
         }) {
        CAPTURE(text);
        Formula f = parse_formula(text);
        Formula n = to_nnf(embed_timed_modalities(desugar(f)));
        CHECK(in_nnf(n));
        check_equivalent(f, n);
        // idempotent once in normal form
        CHECK(formula_equal(to_nnf(n), n));
    }
}

TEST_CASE("negated until unfolds through the untimed box") {
    CHECK(formula_equal(to_nnf(parse_formula("!(a U b)")),
                        parse_formula("G !b | (!b U (!a & !b))")));
    CHECK(formula_equal(to_nnf(parse_formula("!(a S b)")),
                        parse_formula("PG !b | (!b S (!a & !b))")));
    CHECK(formula_equal(to_nnf(parse_formula("!(G a)")),
                        parse_formula("true U !a")));
}

TEST_CASE("negation pushes through freeze and complements constraints") {
    Formula f = to_nnf(parse_formula("!x.(T-x in [1,2])"));
    Formula expect = f_freeze(
        "x", f_or(f_tmx("x", Interval(std::nullopt, false, 1, false)),
                  f_tmx("x", Interval(2, false, std::nullopt, false))));
    CHECK(formula_equal(f, expect));

    // one-sided intervals complement to a single constraint
    CHECK(formula_equal(to_nnf(parse_formula("!x.(x-T in [0,inf))")),
                        f_freeze("x", f_xmt("x", Interval(std::nullopt, false,
                                                          0, false)))));
    // open endpoints close under complement
    Formula g = to_nnf(parse_formula("!x.(T-x in (0,1))"));
    Formula gexpect = f_freeze(
        "x", f_or(f_tmx("x", Interval(std::nullopt, false, 0, true)),
                  f_tmx("x", Interval(1, true, std::nullopt, false))));
    CHECK(formula_equal(g, gexpect));
}

TEST_CASE("negation normal form refuses unprepared input") {
    CHECK_THROWS_AS(to_nnf(parse_formula("a U[(0,1)] b")), Error);
    CHECK_THROWS_AS(to_nnf(parse_formula("a -> b")), Error);
    CHECK_THROWS_AS(to_nnf(parse_formula("O a")), Error);
    CHECK_THROWS_AS(to_nnf(parse_formula("Rat[(0,1)]{{a}}")), Error);
}

TEST_CASE("timed modalities embed as freeze quantifiers") {
    CHECK(formula_equal(embed_timed_modalities(parse_formula("a U[(0,1)] b")),
                        parse_formula("x1.(a U (b & T-x1 in (0,1)))")));
    CHECK(formula_equal(embed_timed_modalities(parse_formula("a S[[1,2]] b")),
                        parse_formula("x1.(a S (b & x1-T in [1,2]))")));
    // untimed modalities stay put
    Formula plain = parse_formula("a U b");
    CHECK(formula_equal(embed_timed_modalities(plain), plain));

    // the fresh variable dodges names already in use
    Formula clash =
        embed_timed_modalities(parse_formula("x1.(T-x1 in (0,2) & a U[(0,1)] b)"));
    CHECK(collect_freeze_vars(clash) == std::set<std::string>{"x1", "x2"});

    for (const char* text : {"a U[(0,1)] b", "(a S[[0,1]] b) | F[(1,2)] a",
                             "a U[[0,2]] (b U[(1,2)] a)"}) {
        CAPTURE(text);
        Formula f = parse_formula(text);
        check_equivalent(f, embed_timed_modalities(desugar(f)));
    }
}

TEST_CASE("randomized rewrite pipeline agreement") {
    FuzzOptions o;
    o.seed = 5;
    o.cases = 60;
    FuzzReport r = fuzz_rewrites(o);
    INFO(fuzz_report_to_string(r));
    CHECK(r.ok);
}
