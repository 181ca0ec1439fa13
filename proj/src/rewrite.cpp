#include "tlkit/rewrite.hpp"

#include <algorithm>
#include <map>

namespace tlkit {

namespace {

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
    FormulaNode n = *f;
    n.kids = std::move(kids);
    // factories recompute the hash
    switch (n.kind) {
    case Kind::Not: return f_not(n.kids[0]);
    case Kind::And: return f_and(std::move(n.kids));
    case Kind::Or: return f_or(std::move(n.kids));
    case Kind::Until: return f_until(n.kids[0], n.kids[1], n.ivl);
    case Kind::Since: return f_since(n.kids[0], n.kids[1], n.ivl);
    case Kind::Always: return f_always(n.kids[0]);
    case Kind::AlwaysPast: return f_always_past(n.kids[0]);
    case Kind::Freeze: return f_freeze(n.name, n.kids[0]);
    case Kind::Eventually: return f_eventually(n.kids[0], n.ivl);
    case Kind::EventuallyPast: return f_eventually_past(n.kids[0], n.ivl);
    case Kind::BoxT: return f_box(n.kids[0], n.ivl);
    case Kind::BoxPastT: return f_box_past(n.kids[0], n.ivl);
    case Kind::Next: return f_next(n.kids[0], n.ivl);
    case Kind::Prev: return f_prev(n.kids[0], n.ivl);
    case Kind::UntilNs: return f_until_ns(n.kids[0], n.kids[1], n.ivl);
    case Kind::SinceNs: return f_since_ns(n.kids[0], n.kids[1], n.ivl);
    case Kind::EventuallyNs: return f_eventually_ns(n.kids[0]);
    case Kind::AlwaysNs: return f_always_ns(n.kids[0]);
    case Kind::Implies: return f_implies(n.kids[0], n.kids[1]);
    case Kind::Iff: return f_iff(n.kids[0], n.kids[1]);
    default:
        return f;  // leaf or automata node: kids unchanged
    }
}

} // namespace

Formula desugar(const Formula& f) {
    std::vector<Formula> kids;
    kids.reserve(f->kids.size());
    for (const auto& k : f->kids)
        kids.push_back(desugar(k));
    switch (f->kind) {
    case Kind::Eventually:
        return f_until(f_true(), kids[0], f->ivl);
    case Kind::EventuallyPast:
        return f_since(f_true(), kids[0], f->ivl);
    case Kind::BoxT:
        return f_not(f_until(f_true(), f_not(kids[0]), f->ivl));
    case Kind::BoxPastT:
        return f_not(f_since(f_true(), f_not(kids[0]), f->ivl));
    case Kind::Next:
        return f_until(f_false(), kids[0], f->ivl);
    case Kind::Prev:
        return f_since(f_false(), kids[0], f->ivl);
    case Kind::UntilNs:
        return f_or(kids[1], f_and(kids[0], f_until(kids[0], kids[1], f->ivl)));
    case Kind::SinceNs:
        return f_or(kids[1], f_and(kids[0], f_since(kids[0], kids[1], f->ivl)));
    case Kind::EventuallyNs:
        return f_or(kids[0], f_until(f_true(), kids[0]));
    case Kind::AlwaysNs:
        return f_and(kids[0], f_always(kids[0]));
    case Kind::Implies:
        return f_or(f_not(kids[0]), kids[1]);
    case Kind::Iff:
        return f_and(f_or(f_not(kids[0]), kids[1]),
                     f_or(f_not(kids[1]), kids[0]));
    default:
        return rebuild(f, std::move(kids));
    }
}

namespace {

// Complement of one constraint interval, as zero, one or two constraints on
// the same variable with flipped boundary closure.
std::vector<Formula> complement_constraint(Kind kind, const std::string& var,
                                           const Interval& i) {
    auto make = [&](Interval part) {
        return kind == Kind::TmX ? f_tmx(var, std::move(part))
                                 : f_xmt(var, std::move(part));
    };
    std::vector<Formula> parts;
    if (!i.lo_unbounded())
        parts.push_back(make(Interval(std::nullopt, false, i.lo(),
                                      !i.lo_closed())));
    if (!i.hi_unbounded())
        parts.push_back(make(Interval(i.hi(), !i.hi_closed(),
                                      std::nullopt, false)));
    return parts;
}

Formula nnf(const Formula& f, bool neg);

Formula nnf_all(const Formula& f, bool neg, Kind pos_kind, Kind neg_kind) {
    std::vector<Formula> kids;
    for (const auto& k : f->kids)
        kids.push_back(nnf(k, neg));
    Kind out = neg ? neg_kind : pos_kind;
    return out == Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids));
}

Formula nnf(const Formula& f, bool neg) {
    switch (f->kind) {
    case Kind::True_:
        return neg ? f_false() : f_true();
    case Kind::False_:
        return neg ? f_true() : f_false();
    case Kind::Atom:
        return neg ? f_not(f) : f;
    case Kind::Not:
        return nnf(f->kids[0], !neg);
    case Kind::And:
        return nnf_all(f, neg, Kind::And, Kind::Or);
    case Kind::Or:
        return nnf_all(f, neg, Kind::Or, Kind::And);
    case Kind::Freeze:
        return f_freeze(f->name, nnf(f->kids[0], neg));
    case Kind::TmX:
    case Kind::XmT: {
        if (!neg)
            return f;
        return f_or(complement_constraint(f->kind, f->name, *f->ivl));
    }
    case Kind::Until:
    case Kind::Since: {
        if (f->ivl)
            throw Error("negation normal form is defined on untimed "
                        "modalities; embed timed operators first");
        bool fut = f->kind == Kind::Until;
        if (!neg) {
            Formula a = nnf(f->kids[0], false), b = nnf(f->kids[1], false);
            return fut ? f_until(a, b) : f_since(a, b);
        }
        Formula na = nnf(f->kids[0], true), nb = nnf(f->kids[1], true);
        if (fut)
            return f_or(f_always(nb), f_until(nb, f_and(na, nb)));
        return f_or(f_always_past(nb), f_since(nb, f_and(na, nb)));
    }
    case Kind::Always:
        if (!neg)
            return f_always(nnf(f->kids[0], false));
        return f_until(f_true(), nnf(f->kids[0], true));
    case Kind::AlwaysPast:
        if (!neg)
            return f_always_past(nnf(f->kids[0], false));
        return f_since(f_true(), nnf(f->kids[0], true));
    default:
        throw Error("negation normal form does not cover this node; desugar "
                    "and embed first");
    }
}

} // namespace

Formula to_nnf(const Formula& f) {
    return nnf(f, false);
}

namespace {

std::string fresh_var_name(const Formula& f) {
    std::set<std::string> used = collect_freeze_vars(f);
    for (int i = 1;; ++i) {
        std::string cand = "x" + std::to_string(i);
        if (!used.count(cand))
            return cand;
    }
}

Formula embed_with(const Formula& f, const std::string& var) {
    std::vector<Formula> kids;
    for (const auto& k : f->kids)
        kids.push_back(embed_with(k, var));
    if ((f->kind == Kind::Until || f->kind == Kind::Since) && f->ivl) {
        bool fut = f->kind == Kind::Until;
        Formula guard = fut ? f_tmx(var, *f->ivl) : f_xmt(var, *f->ivl);
        Formula right = f_and(kids[1], std::move(guard));
        Formula inner = fut ? f_until(kids[0], std::move(right))
                            : f_since(kids[0], std::move(right));
        return f_freeze(var, std::move(inner));
    }
    return rebuild(f, std::move(kids));
}

} // namespace

Formula embed_timed_modalities(const Formula& f) {
    return embed_with(f, fresh_var_name(f));
}

namespace {

bool is_modal(Kind k) {
    switch (k) {
    case Kind::Until:
    case Kind::Since:
    case Kind::Always:
    case Kind::AlwaysPast:
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
    case Kind::Rat:
    case Kind::FRat:
    case Kind::PRat:
    case Kind::Fk:
    case Kind::Pk:
        return true;
    default:
        return false;
    }
}

struct Flattener {
    std::set<std::string> used_names;
    std::vector<std::pair<std::string, Formula>> definitions;
    // original subtree -> witness name, so repeated subformulas share one
    std::vector<std::pair<Formula, std::string>> seen;
    int counter = 1;

    std::string fresh_witness() {
        while (true) {
            std::string cand = "w" + std::to_string(counter++);
            if (!used_names.count(cand))
                return cand;
        }
    }

    Formula walk(const Formula& f, bool inside_modal) {
        if (f->kind == Kind::TmX || f->kind == Kind::XmT ||
            f->kind == Kind::Freeze)
            throw Error("flattening is defined for modal formulas without "
                        "freeze quantifiers");
        if (is_modal(f->kind) && inside_modal) {
            for (const auto& [orig, name] : seen)
                if (formula_equal(orig, f))
                    return f_atom(name);
            std::string name = fresh_witness();
            seen.emplace_back(f, name);
            std::vector<Formula> kids;
            for (const auto& k : f->kids)
                kids.push_back(walk(k, true));
            definitions.emplace_back(name, rebuild(f, std::move(kids)));
            return f_atom(name);
        }
        bool next_inside = inside_modal || is_modal(f->kind);
        std::vector<Formula> kids;
        for (const auto& k : f->kids)
            kids.push_back(walk(k, next_inside));
        return rebuild(f, std::move(kids));
    }
};

Formula disjunction_of(const PropSet& sigma) {
    std::vector<Formula> parts;
    for (const auto& p : sigma)
        parts.push_back(f_atom(p));
    if (parts.empty())
        throw Error("need a nonempty proposition set");
    return f_or(std::move(parts));
}

} // namespace

FlattenResult flatten(const Formula& f, const PropSet& sigma) {
    Flattener fl;
    fl.used_names = collect_atoms(f);
    fl.used_names.insert(sigma.begin(), sigma.end());
    FlattenResult out;
    out.main = fl.walk(f, false);
    out.definitions = std::move(fl.definitions);
    std::vector<Formula> conjuncts{out.main};
    for (const auto& [name, body] : out.definitions) {
        out.witnesses.insert(name);
        conjuncts.push_back(f_always_ns(f_iff(f_atom(name), body)));
    }
    conjuncts.push_back(f_always_ns(disjunction_of(sigma)));
    out.assembled = f_and(std::move(conjuncts));
    return out;
}

namespace {

Formula rel(const Formula& act, const Formula& f) {
    auto guard = [&](const Formula& g) { return f_implies(act, g); };
    switch (f->kind) {
    case Kind::True_:
    case Kind::False_:
    case Kind::Atom:
        return f;
    case Kind::Not:
        return f_not(rel(act, f->kids[0]));
    case Kind::And:
    case Kind::Or: {
        std::vector<Formula> kids;
        for (const auto& k : f->kids)
            kids.push_back(rel(act, k));
        return f->kind == Kind::And ? f_and(std::move(kids))
                                    : f_or(std::move(kids));
    }
    case Kind::Until:
        return f_until(guard(rel(act, f->kids[0])),
                       f_and(rel(act, f->kids[1]), act), f->ivl);
    case Kind::Since:
        return f_since(guard(rel(act, f->kids[0])),
                       f_and(rel(act, f->kids[1]), act), f->ivl);
    case Kind::Always:
        return f_always(guard(rel(act, f->kids[0])));
    case Kind::AlwaysPast:
        return f_always_past(guard(rel(act, f->kids[0])));
    case Kind::BoxT:
        return f_box(guard(rel(act, f->kids[0])), f->ivl);
    case Kind::BoxPastT:
        return f_box_past(guard(rel(act, f->kids[0])), f->ivl);
    case Kind::Eventually:
        return f_eventually(f_and(rel(act, f->kids[0]), act), f->ivl);
    case Kind::EventuallyPast:
        return f_eventually_past(f_and(rel(act, f->kids[0]), act), f->ivl);
    default:
        throw Error("relativization covers U/S and the box/diamond "
                    "operators only");
    }
}

} // namespace

Formula relativize(const PropSet& sigma, const Formula& f) {
    return rel(disjunction_of(sigma), f);
}

} // namespace tlkit
