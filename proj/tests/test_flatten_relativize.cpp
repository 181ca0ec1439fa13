#include "doctest.h"

#include "tlkit/equisat.hpp"
#include "tlkit/parser.hpp"
#include "tlkit/rewrite.hpp"

using namespace tlkit;

namespace {

Formula act_of(const PropSet& sigma) {
    std::vector<Formula> parts;
    for (const auto& p : sigma)
        parts.push_back(f_atom(p));
    return f_or(std::move(parts));
}

// ready-to-check pair for the oversampled harness: the relativized formula
// plus the first-point action pin that makes its models admissible behaviours
Formula relativized_psi(const PropSet& sigma, const Formula& f) {
    return f_and(act_of(sigma), relativize(sigma, f));
}

} // namespace

TEST_CASE("flattening names witnesses outermost-first") {
    Formula f = parse_formula("a U[[0,3]] (c S (P<>[[0,1]] d))");
    FlattenResult r = flatten(f, {"a", "c", "d"});

    CHECK(format_formula(r.main) == "a U[[0,3]] w1");
    REQUIRE(r.definitions.size() == 2);
    // listed so each body only uses witnesses defined earlier: the inner
    // diamond's definition comes first even though it was named second
    CHECK(r.definitions[0].first == "w2");
    CHECK(formula_equal(r.definitions[0].second, parse_formula("P<>[[0,1]] d")));
    CHECK(r.definitions[1].first == "w1");
    CHECK(formula_equal(r.definitions[1].second, parse_formula("c S w2")));
    CHECK(r.witnesses == PropSet{"w1", "w2"});
    CHECK(formula_equal(r.assembled,
                        parse_formula("a U[[0,3]] w1"
                                      " & Gns (w2 <-> P<>[[0,1]] d)"
                                      " & Gns (w1 <-> c S w2)"
                                      " & Gns (a | c | d)")));
}

TEST_CASE("witness names avoid atoms already in use") {
    FlattenResult r = flatten(parse_formula("F (G w1)"), {"w1"});
    REQUIRE(r.definitions.size() == 1);
    CHECK(r.definitions[0].first == "w2");
}

TEST_CASE("repeated modal subformulas share one witness") {
    FlattenResult r = flatten(parse_formula("(F (F a)) & (G (F a))"), {"a"});
    REQUIRE(r.definitions.size() == 1);
    CHECK(formula_equal(r.main, parse_formula("(F w1) & (G w1)")));
}

TEST_CASE("propositional formulas flatten to themselves") {
    Formula f = parse_formula("a & !b");
    FlattenResult r = flatten(f, {"a", "b"});
    CHECK(formula_equal(r.main, f));
    CHECK(r.definitions.empty());
    CHECK(r.witnesses.empty());
    CHECK(formula_equal(r.assembled, parse_formula("a & !b & Gns (a | b)")));
}

TEST_CASE("flattening rejects freeze constructs and empty alphabets") {
    CHECK_THROWS_AS(flatten(parse_formula("x.(a U b)"), {"a", "b"}), Error);
    CHECK_THROWS_AS(flatten(parse_formula("a U (b & T-x in (0,1))"), {"a", "b"}),
                    Error);
    CHECK_THROWS_AS(flatten(parse_formula("a"), {}), Error);
}

TEST_CASE("relativization guards and conjoins the action disjunct") {
    PropSet sigma{"a", "b"};
    CHECK(formula_equal(relativize(sigma, parse_formula("a U[(0,1)] b")),
                        parse_formula("(a | b -> a) U[(0,1)] (b & (a | b))")));
    CHECK(formula_equal(relativize({"a"}, parse_formula("F[(0,1)] b")),
                        parse_formula("F[(0,1)] (b & a)")));
    CHECK(formula_equal(relativize({"a"}, parse_formula("G b")),
                        parse_formula("G (a -> b)")));
    CHECK(formula_equal(relativize({"a"}, parse_formula("G[(0,1)] b")),
                        parse_formula("G[(0,1)] (a -> b)")));
    CHECK(formula_equal(relativize({"a"}, parse_formula("b S c")),
                        parse_formula("(a -> b) S (c & a)")));
    CHECK(formula_equal(relativize({"a"}, parse_formula("!(P<>[[0,1]] b)")),
                        parse_formula("!(P<>[[0,1]] (b & a))")));
}

TEST_CASE("relativization rejects freeze, next and automata modalities") {
    CHECK_THROWS_AS(relativize({"a"}, parse_formula("x.(a U b)")), Error);
    CHECK_THROWS_AS(relativize({"a"}, parse_formula("O a")), Error);
    CHECK_THROWS_AS(relativize({"a"}, parse_formula("Rat[(0,1)]{{a}*}")), Error);
}

TEST_CASE("flattened formulas are equisatisfiable modulo erasure") {
    PropSet sigma{"a", "b"};
    for (const char* text : {
             "a U[[0,1]] (a S b)",
             "F[(0,2)] (G[[0,1]] a)",
             "G (a -> F[[0,1]] b)",
             "!(F (a U b))",
             "a | !b",
         }) {
        Formula phi = parse_formula(text);
        FlattenResult r = flatten(phi, sigma);
        EquisatReport rep = verify_simple_equisat(phi, r.assembled, sigma,
                                                  r.witnesses);
        CAPTURE(text);
        CAPTURE(report_to_string(rep));
        CHECK(rep.ok);
        CHECK(rep.psi_models > 0);
    }
}

TEST_CASE("relativized formulas are equisatisfiable modulo deletion") {
    PropSet sigma{"a", "b"};
    PropSet x{"c"};
    for (const char* text : {
             "a U[[0,1]] b",
             "F[(0,2)] (!a)",
             "G (a -> F[[0,1]] b)",
             "(b S a) | G[(0,1)] a",
             "a & !b",
         }) {
        Formula phi = parse_formula(text);
        EquisatReport rep = verify_oversampled_equisat(
            phi, relativized_psi(sigma, phi), sigma, x);
        CAPTURE(text);
        CAPTURE(report_to_string(rep));
        CHECK(rep.ok);
        CHECK(rep.psi_models > 0);
    }
}

TEST_CASE("weakening a witness definition to an implication is caught") {
    PropSet sigma{"a", "b"};
    // the witness occurs under negation, so losing the body-to-witness
    // direction lets models drop the witness and dodge the main formula
    Formula phi = parse_formula("!(F (a U b))");
    FlattenResult r = flatten(phi, sigma);
    REQUIRE(r.definitions.size() == 1);
    Formula mutated = f_and(
        {r.main,
         f_always_ns(f_implies(f_atom(r.definitions[0].first),
                               r.definitions[0].second)),
         f_always_ns(act_of(sigma))});
    EquisatReport rep = verify_simple_equisat(phi, mutated, sigma, r.witnesses);
    CHECK_FALSE(rep.ok);
    CHECK(rep.direction == "backward");
}

TEST_CASE("dropping an action conjunct from relativization is caught") {
    PropSet sigma{"a", "b"};
    PropSet x{"c"};
    // correct form is F[[0,2]] (!a & (a | b)); without the conjunct a pure
    // oversampling point can serve as the witness and vanish under projection
    Formula phi = parse_formula("F[[0,2]] (!a)");
    Formula mutated = f_and(act_of(sigma), parse_formula("F[[0,2]] (!a)"));
    EquisatReport rep = verify_oversampled_equisat(phi, mutated, sigma, x);
    CHECK_FALSE(rep.ok);
    CHECK(rep.direction == "backward");
}
