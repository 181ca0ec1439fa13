#pragma once

#include "tlkit/automaton.hpp"
#include "tlkit/formula_fwd.hpp"
#include "tlkit/interval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tlkit {

// One AST covers every logic handled here. Core kinds survive desugaring;
// the kinds listed after Pk are sugar and are rewritten away by desugar().
enum class Kind {
    // core
    True_,
    False_,
    Atom,      // name
    Not,       // kids[0]
    And,       // kids (n-ary, >= 2)
    Or,        // kids (n-ary, >= 2)
    Until,     // kids[0] U kids[1], optional interval; strict
    Since,     // kids[0] S kids[1], optional interval; strict
    Always,    // untimed strict box, kids[0]
    AlwaysPast,// untimed strict past box, kids[0]
    Freeze,    // name = clock var, kids[0] = body
    TmX,       // T - name in *ivl
    XmT,       // name - T in *ivl
    Rat,       // interval *ivl, automata[0]
    FRat,      // interval *ivl, automata[0]
    PRat,      // interval *ivl, automata[0]
    Fk,        // intervals (k), automata (k+1)
    Pk,        // intervals (k), automata (k+1)
    // sugar
    Eventually,     // optional interval
    EventuallyPast, // optional interval
    BoxT,           // optional interval (timed/untimed G sugar)
    BoxPastT,       // optional interval
    Next,           // optional interval
    Prev,           // optional interval
    UntilNs,        // optional interval
    SinceNs,        // optional interval
    EventuallyNs,   // untimed only
    AlwaysNs,       // untimed only
    Implies,
    Iff,
};

struct FormulaNode {
    Kind kind;
    std::string name;                   // Atom / Freeze / TmX / XmT
    std::optional<Interval> ivl;        // modal or constraint interval
    std::vector<Formula> kids;
    std::vector<Interval> intervals;    // Fk / Pk
    std::vector<SymbolicNfa> automata;  // Rat family / Fk / Pk
    std::size_t hash = 0;
};

Formula f_true();
Formula f_false();
Formula f_atom(std::string name);
Formula f_not(Formula a);
// And/Or flatten singletons: one child returns the child itself.
Formula f_and(std::vector<Formula> kids);
Formula f_or(std::vector<Formula> kids);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_until(Formula a, Formula b, std::optional<Interval> ivl = {});
Formula f_since(Formula a, Formula b, std::optional<Interval> ivl = {});
Formula f_always(Formula a);
Formula f_always_past(Formula a);
Formula f_freeze(std::string var, Formula body);
Formula f_tmx(std::string var, Interval ivl);
Formula f_xmt(std::string var, Interval ivl);
Formula f_rat(Interval ivl, SymbolicNfa a);
Formula f_frat(Interval ivl, SymbolicNfa a);
Formula f_prat(Interval ivl, SymbolicNfa a);
Formula f_fk(std::vector<Interval> ivls, std::vector<SymbolicNfa> as);
Formula f_pk(std::vector<Interval> ivls, std::vector<SymbolicNfa> as);
Formula f_eventually(Formula a, std::optional<Interval> ivl = {});
Formula f_eventually_past(Formula a, std::optional<Interval> ivl = {});
Formula f_box(Formula a, std::optional<Interval> ivl = {});
Formula f_box_past(Formula a, std::optional<Interval> ivl = {});
Formula f_next(Formula a, std::optional<Interval> ivl = {});
Formula f_prev(Formula a, std::optional<Interval> ivl = {});
Formula f_until_ns(Formula a, Formula b, std::optional<Interval> ivl = {});
Formula f_since_ns(Formula a, Formula b, std::optional<Interval> ivl = {});
Formula f_eventually_ns(Formula a);
Formula f_always_ns(Formula a);
Formula f_implies(Formula a, Formula b);
Formula f_iff(Formula a, Formula b);

bool is_sugar(Kind k);

// Structural three-way comparison; formula_less/formula_equal in
// formula_fwd.hpp are thin wrappers over this.
int formula_cmp(const Formula& a, const Formula& b);

// Atoms appearing anywhere, including inside automaton formula sets.
std::set<std::string> collect_atoms(const Formula& f);
// Freeze variable names appearing anywhere.
std::set<std::string> collect_freeze_vars(const Formula& f);

} // namespace tlkit
