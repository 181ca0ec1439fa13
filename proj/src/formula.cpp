#include "tlkit/formula.hpp"

#include <algorithm>
#include <sstream>

namespace tlkit {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return (h ^ v) * 1099511628211ull;
}

std::size_t hash_opt_interval(const std::optional<Interval>& i) {
    return i ? hash_interval(*i) : 0x5bd1e995u;
}

Formula finish(FormulaNode n) {
    std::size_t h = 1469598103934665603ull;
    h = mix(h, std::size_t(n.kind));
    h = mix(h, std::hash<std::string>{}(n.name));
    h = mix(h, hash_opt_interval(n.ivl));
    for (const auto& k : n.kids)
        h = mix(h, k->hash);
    for (const auto& i : n.intervals)
        h = mix(h, hash_interval(i));
    for (const auto& a : n.automata)
        h = mix(h, nfa_hash(a));
    n.hash = h;
    return std::make_shared<const FormulaNode>(std::move(n));
}

void require_nat(const std::optional<Interval>& i, const char* what) {
    if (i && !i->is_nonnegative())
        throw Error(std::string(what) +
                    " interval must have a nonnegative lower bound, got " +
                    i->to_string());
}

} // namespace

bool is_sugar(Kind k) {
    switch (k) {
    case Kind::Eventually:
    case Kind::EventuallyPast:
    case Kind::BoxT:
    case Kind::BoxPastT:
    case Kind::Next:
    case Kind::Prev:
    case Kind::UntilNs:
    case Kind::SinceNs:
    case Kind::EventuallyNs:
    case Kind::AlwaysNs:
    case Kind::Implies:
    case Kind::Iff:
        return true;
    default:
        return false;
    }
}

Formula f_true() { return finish({.kind = Kind::True_}); }
Formula f_false() { return finish({.kind = Kind::False_}); }

Formula f_atom(std::string name) {
    if (name.empty())
        throw Error("atom needs a name");
    return finish({.kind = Kind::Atom, .name = std::move(name)});
}

Formula f_not(Formula a) {
    return finish({.kind = Kind::Not, .kids = {std::move(a)}});
}

Formula f_and(std::vector<Formula> kids) {
    if (kids.empty())
        return f_true();
    if (kids.size() == 1)
        return kids[0];
    return finish({.kind = Kind::And, .kids = std::move(kids)});
}

Formula f_or(std::vector<Formula> kids) {
    if (kids.empty())
        return f_false();
    if (kids.size() == 1)
        return kids[0];
    return finish({.kind = Kind::Or, .kids = std::move(kids)});
}

Formula f_and(Formula a, Formula b) {
    return f_and(std::vector<Formula>{std::move(a), std::move(b)});
}
Formula f_or(Formula a, Formula b) {
    return f_or(std::vector<Formula>{std::move(a), std::move(b)});
}

Formula f_until(Formula a, Formula b, std::optional<Interval> ivl) {
    require_nat(ivl, "U");
    return finish({.kind = Kind::Until,
                   .ivl = std::move(ivl),
                   .kids = {std::move(a), std::move(b)}});
}

Formula f_since(Formula a, Formula b, std::optional<Interval> ivl) {
    require_nat(ivl, "S");
    return finish({.kind = Kind::Since,
                   .ivl = std::move(ivl),
                   .kids = {std::move(a), std::move(b)}});
}

Formula f_always(Formula a) {
    return finish({.kind = Kind::Always, .kids = {std::move(a)}});
}
Formula f_always_past(Formula a) {
    return finish({.kind = Kind::AlwaysPast, .kids = {std::move(a)}});
}

Formula f_freeze(std::string var, Formula body) {
    if (var.empty())
        throw Error("freeze quantifier needs a variable name");
    return finish({.kind = Kind::Freeze,
                   .name = std::move(var),
                   .kids = {std::move(body)}});
}

Formula f_tmx(std::string var, Interval ivl) {
    if (var.empty())
        throw Error("clock constraint needs a variable name");
    return finish(
        {.kind = Kind::TmX, .name = std::move(var), .ivl = std::move(ivl)});
}

Formula f_xmt(std::string var, Interval ivl) {
    if (var.empty())
        throw Error("clock constraint needs a variable name");
    return finish(
        {.kind = Kind::XmT, .name = std::move(var), .ivl = std::move(ivl)});
}

namespace {

Formula rat_like(Kind k, const char* what, Interval ivl, SymbolicNfa a) {
    std::optional<Interval> i = std::move(ivl);
    require_nat(i, what);
    return finish({.kind = k, .ivl = std::move(i), .automata = {std::move(a)}});
}

Formula pnueli_like(Kind k, const char* what, std::vector<Interval> ivls,
                    std::vector<SymbolicNfa> as) {
    if (ivls.empty())
        throw Error(std::string(what) + " needs at least one interval");
    if (as.size() != ivls.size() + 1)
        throw Error(std::string(what) + " with " + std::to_string(ivls.size()) +
                    " intervals needs " + std::to_string(ivls.size() + 1) +
                    " automata, got " + std::to_string(as.size()));
    for (const auto& i : ivls)
        if (!i.is_nonnegative())
            throw Error(std::string(what) +
                        " interval must have a nonnegative lower bound, got " +
                        i.to_string());
    for (std::size_t j = 1; j < as.size(); ++j)
        if (!same_sset(as[0].sset(), as[j].sset()))
            throw Error(std::string(what) +
                        " automata must share one formula set");
    return finish({.kind = k,
                   .intervals = std::move(ivls),
                   .automata = std::move(as)});
}

} // namespace

Formula f_rat(Interval ivl, SymbolicNfa a) {
    return rat_like(Kind::Rat, "Rat", std::move(ivl), std::move(a));
}
Formula f_frat(Interval ivl, SymbolicNfa a) {
    return rat_like(Kind::FRat, "FRat", std::move(ivl), std::move(a));
}
Formula f_prat(Interval ivl, SymbolicNfa a) {
    return rat_like(Kind::PRat, "PRat", std::move(ivl), std::move(a));
}
Formula f_fk(std::vector<Interval> ivls, std::vector<SymbolicNfa> as) {
    return pnueli_like(Kind::Fk, "Fk", std::move(ivls), std::move(as));
}
Formula f_pk(std::vector<Interval> ivls, std::vector<SymbolicNfa> as) {
    return pnueli_like(Kind::Pk, "Pk", std::move(ivls), std::move(as));
}

namespace {

Formula unary_sugar(Kind k, const char* what, Formula a,
                    std::optional<Interval> ivl) {
    require_nat(ivl, what);
    return finish({.kind = k, .ivl = std::move(ivl), .kids = {std::move(a)}});
}

} // namespace

Formula f_eventually(Formula a, std::optional<Interval> ivl) {
    return unary_sugar(Kind::Eventually, "F", std::move(a), std::move(ivl));
}
Formula f_eventually_past(Formula a, std::optional<Interval> ivl) {
    return unary_sugar(Kind::EventuallyPast, "P<>", std::move(a),
                       std::move(ivl));
}
Formula f_box(Formula a, std::optional<Interval> ivl) {
    if (!ivl)
        return f_always(std::move(a));
    return unary_sugar(Kind::BoxT, "G", std::move(a), std::move(ivl));
}
Formula f_box_past(Formula a, std::optional<Interval> ivl) {
    if (!ivl)
        return f_always_past(std::move(a));
    return unary_sugar(Kind::BoxPastT, "PG", std::move(a), std::move(ivl));
}
Formula f_next(Formula a, std::optional<Interval> ivl) {
    return unary_sugar(Kind::Next, "O", std::move(a), std::move(ivl));
}
Formula f_prev(Formula a, std::optional<Interval> ivl) {
    return unary_sugar(Kind::Prev, "Obar", std::move(a), std::move(ivl));
}

Formula f_until_ns(Formula a, Formula b, std::optional<Interval> ivl) {
    require_nat(ivl, "Uns");
    return finish({.kind = Kind::UntilNs,
                   .ivl = std::move(ivl),
                   .kids = {std::move(a), std::move(b)}});
}
Formula f_since_ns(Formula a, Formula b, std::optional<Interval> ivl) {
    require_nat(ivl, "Sns");
    return finish({.kind = Kind::SinceNs,
                   .ivl = std::move(ivl),
                   .kids = {std::move(a), std::move(b)}});
}
Formula f_eventually_ns(Formula a) {
    return finish({.kind = Kind::EventuallyNs, .kids = {std::move(a)}});
}
Formula f_always_ns(Formula a) {
    return finish({.kind = Kind::AlwaysNs, .kids = {std::move(a)}});
}
Formula f_implies(Formula a, Formula b) {
    return finish({.kind = Kind::Implies, .kids = {std::move(a), std::move(b)}});
}
Formula f_iff(Formula a, Formula b) {
    return finish({.kind = Kind::Iff, .kids = {std::move(a), std::move(b)}});
}

namespace {

int opt_interval_cmp(const std::optional<Interval>& a,
                     const std::optional<Interval>& b) {
    if (!a && !b)
        return 0;
    if (!a)
        return -1;
    if (!b)
        return 1;
    return interval_cmp(*a, *b);
}

int nfa_cmp(const SymbolicNfa& a, const SymbolicNfa& b) {
    if (a.sset().size() != b.sset().size())
        return a.sset().size() < b.sset().size() ? -1 : 1;
    for (std::size_t i = 0; i < a.sset().size(); ++i)
        if (int c = formula_cmp(a.sset()[i], b.sset()[i]))
            return c;
    if (a.num_states() != b.num_states())
        return a.num_states() < b.num_states() ? -1 : 1;
    if (a.init() != b.init())
        return a.init() < b.init() ? -1 : 1;
    if (a.finals() != b.finals())
        return a.finals() < b.finals() ? -1 : 1;
    if (a.transitions() != b.transitions())
        return a.transitions() < b.transitions() ? -1 : 1;
    return 0;
}

} // namespace

int formula_cmp(const Formula& a, const Formula& b) {
    if (a.get() == b.get())
        return 0;
    if (a->kind != b->kind)
        return int(a->kind) < int(b->kind) ? -1 : 1;
    if (int c = a->name.compare(b->name))
        return c < 0 ? -1 : 1;
    if (int c = opt_interval_cmp(a->ivl, b->ivl))
        return c;
    if (a->intervals.size() != b->intervals.size())
        return a->intervals.size() < b->intervals.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->intervals.size(); ++i)
        if (int c = interval_cmp(a->intervals[i], b->intervals[i]))
            return c;
    if (a->automata.size() != b->automata.size())
        return a->automata.size() < b->automata.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->automata.size(); ++i)
        if (int c = nfa_cmp(a->automata[i], b->automata[i]))
            return c;
    if (a->kids.size() != b->kids.size())
        return a->kids.size() < b->kids.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (int c = formula_cmp(a->kids[i], b->kids[i]))
            return c;
    return 0;
}

bool formula_equal(const Formula& a, const Formula& b) {
    if (a.get() == b.get())
        return true;
    if (a->hash != b->hash)
        return false;
    return formula_cmp(a, b) == 0;
}

bool formula_less(const Formula& a, const Formula& b) {
    return formula_cmp(a, b) < 0;
}

std::size_t formula_hash(const Formula& f) {
    return f->hash;
}

namespace {

void collect_atoms_into(const Formula& f, std::set<std::string>& out) {
    if (f->kind == Kind::Atom)
        out.insert(f->name);
    for (const auto& k : f->kids)
        collect_atoms_into(k, out);
    for (const auto& a : f->automata)
        for (const auto& s : a.sset())
            collect_atoms_into(s, out);
}

void collect_vars_into(const Formula& f, std::set<std::string>& out) {
    if (f->kind == Kind::Freeze || f->kind == Kind::TmX ||
        f->kind == Kind::XmT)
        out.insert(f->name);
    for (const auto& k : f->kids)
        collect_vars_into(k, out);
    for (const auto& a : f->automata)
        for (const auto& s : a.sset())
            collect_vars_into(s, out);
}

} // namespace

std::set<std::string> collect_atoms(const Formula& f) {
    std::set<std::string> out;
    collect_atoms_into(f, out);
    return out;
}

std::set<std::string> collect_freeze_vars(const Formula& f) {
    std::set<std::string> out;
    collect_vars_into(f, out);
    return out;
}

// ---------------------------------------------------------------------------
// Printing. Operator levels, loosest first: <-> (1), -> (2), | (3), & (4),
// U/S family (5, right associative), prefix operators (6), self-delimited
// atoms and bracketed modalities (7). A child is parenthesized when its level
// is below what its position requires, so output reparses to the same tree.

namespace {

int level_of(Kind k) {
    switch (k) {
    case Kind::Iff: return 1;
    case Kind::Implies: return 2;
    case Kind::Or: return 3;
    case Kind::And: return 4;
    case Kind::Until:
    case Kind::Since:
    case Kind::UntilNs:
    case Kind::SinceNs: return 5;
    case Kind::Not:
    case Kind::Always:
    case Kind::AlwaysPast:
    case Kind::Eventually:
    case Kind::EventuallyPast:
    case Kind::BoxT:
    case Kind::BoxPastT:
    case Kind::Next:
    case Kind::Prev:
    case Kind::EventuallyNs:
    case Kind::AlwaysNs: return 6;
    default: return 7;
    }
}

void print_into(const Formula& f, int min_level, std::string& out);

void print_child(const Formula& f, int min_level, std::string& out) {
    if (level_of(f->kind) < min_level) {
        out += '(';
        print_into(f, 1, out);
        out += ')';
    } else {
        print_into(f, min_level, out);
    }
}

std::string modal_suffix(const std::optional<Interval>& i) {
    return i ? "[" + i->to_string() + "]" : "";
}

void print_binary_modal(const Formula& f, const char* op, std::string& out) {
    print_child(f->kids[0], 6, out);
    out += ' ';
    out += op;
    out += modal_suffix(f->ivl);
    out += ' ';
    print_child(f->kids[1], 5, out);
}

void print_prefix(const Formula& f, const std::string& op, std::string& out) {
    out += op;
    out += modal_suffix(f->ivl);
    out += ' ';
    print_child(f->kids[0], 6, out);
}

void print_nary(const Formula& f, const char* op, int lvl, std::string& out) {
    for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) {
            out += ' ';
            out += op;
            out += ' ';
        }
        print_child(f->kids[i], lvl + 1, out);
    }
}

void print_into(const Formula& f, int, std::string& out) {
    switch (f->kind) {
    case Kind::True_: out += "true"; return;
    case Kind::False_: out += "false"; return;
    case Kind::Atom: out += f->name; return;
    case Kind::Not:
        out += '!';
        print_child(f->kids[0], 6, out);
        return;
    case Kind::And: print_nary(f, "&", 4, out); return;
    case Kind::Or: print_nary(f, "|", 3, out); return;
    case Kind::Until: print_binary_modal(f, "U", out); return;
    case Kind::Since: print_binary_modal(f, "S", out); return;
    case Kind::UntilNs: print_binary_modal(f, "Uns", out); return;
    case Kind::SinceNs: print_binary_modal(f, "Sns", out); return;
    case Kind::Always: print_prefix(f, "G", out); return;
    case Kind::AlwaysPast: print_prefix(f, "PG", out); return;
    case Kind::BoxT: print_prefix(f, "G", out); return;
    case Kind::BoxPastT: print_prefix(f, "PG", out); return;
    case Kind::Eventually: print_prefix(f, "F", out); return;
    case Kind::EventuallyPast: print_prefix(f, "P<>", out); return;
    case Kind::Next: print_prefix(f, "O", out); return;
    case Kind::Prev: print_prefix(f, "Obar", out); return;
    case Kind::EventuallyNs: print_prefix(f, "Fns", out); return;
    case Kind::AlwaysNs: print_prefix(f, "Gns", out); return;
    case Kind::Freeze:
        out += f->name;
        out += ".(";
        print_into(f->kids[0], 1, out);
        out += ')';
        return;
    case Kind::TmX:
        out += "T-" + f->name + " in " + f->ivl->to_string();
        return;
    case Kind::XmT:
        out += f->name + "-T in " + f->ivl->to_string();
        return;
    case Kind::Implies:
        print_child(f->kids[0], 3, out);
        out += " -> ";
        print_child(f->kids[1], 2, out);
        return;
    case Kind::Iff:
        print_child(f->kids[0], 2, out);
        out += " <-> ";
        print_child(f->kids[1], 1, out);
        return;
    case Kind::Rat:
    case Kind::FRat:
    case Kind::PRat: {
        const char* op = f->kind == Kind::Rat ? "Rat"
                         : f->kind == Kind::FRat ? "FRat"
                                                 : "PRat";
        out += op;
        out += '[' + f->ivl->to_string() + "]{";
        out += f->automata[0].to_string(false);
        out += '}';
        return;
    }
    case Kind::Fk:
    case Kind::Pk: {
        out += f->kind == Kind::Fk ? "Fk[" : "Pk[";
        for (std::size_t i = 0; i < f->intervals.size(); ++i) {
            if (i)
                out += ';';
            out += f->intervals[i].to_string();
        }
        out += "]{";
        for (std::size_t i = 0; i < f->automata.size(); ++i) {
            if (i)
                out += " | ";
            out += f->automata[i].to_string(false);
        }
        out += '}';
        return;
    }
    }
    throw Error("unprintable formula node");
}

} // namespace

std::string format_formula(const Formula& f) {
    std::string out;
    print_into(f, 1, out);
    return out;
}

std::string format_formula_atomic(const Formula& f) {
    if (level_of(f->kind) == 7)
        return format_formula(f);
    return "(" + format_formula(f) + ")";
}

} // namespace tlkit
