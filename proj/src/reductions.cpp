#include "tlkit/reductions.hpp"

#include "tlkit/automaton.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace tlkit {

namespace {

// Structural dedup so identical subterms share nodes and evaluator
// memoization hits across disjuncts.
class Interner {
public:
    Formula intern(Formula f) {
        auto& bucket = by_hash_[f->hash];
        for (const auto& g : bucket)
            if (formula_equal(g, f)) return g;
        bucket.push_back(f);
        return f;
    }

private:
    std::unordered_map<std::size_t, std::vector<Formula>> by_hash_;
};

bool interval_subset(const Interval& a, const Interval& b) {
    bool lower = b.lo_unbounded() ||
                 (!a.lo_unbounded() &&
                  (a.lo() > b.lo() ||
                   (a.lo() == b.lo() && (b.lo_closed() || !a.lo_closed()))));
    bool upper = b.hi_unbounded() ||
                 (!a.hi_unbounded() &&
                  (a.hi() < b.hi() ||
                   (a.hi() == b.hi() && (b.hi_closed() || !a.hi_closed()))));
    return lower && upper;
}

// Splits [0, inf) at every interval endpoint: alternating punctual windows
// [b,b] and open windows (b,b'), ending with the open tail. Every input
// interval is then an exact union of consecutive pieces.
std::vector<Interval> atomic_pieces(const std::vector<Interval>& ivls) {
    std::set<std::int64_t> bps{0};
    for (const auto& i : ivls) {
        bps.insert(i.lo());
        if (!i.hi_unbounded()) bps.insert(i.hi());
    }
    std::vector<std::int64_t> b(bps.begin(), bps.end());
    std::vector<Interval> out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        out.push_back(Interval::punctual(b[i]));
        if (i + 1 < b.size()) out.push_back(Interval::open(b[i], b[i + 1]));
    }
    out.push_back(Interval::greater_than(b.back()));
    return out;
}

Interval merge_pieces(const std::vector<Interval>& ps, std::size_t a, std::size_t b) {
    std::optional<std::int64_t> hi;
    if (!ps[b].hi_unbounded()) hi = ps[b].hi();
    return Interval(ps[a].lo(), ps[a].lo_closed(), hi, ps[b].hi_closed());
}

struct EffWindow {
    Interval ivl;
    std::size_t enter;                 // 1-based index of the automaton reading at entry
    std::vector<std::size_t> anchors;  // 1-based anchor indices hosted here
};

struct FkContext {
    std::vector<Interval> ivls;
    std::vector<SymbolicNfa> as;  // as[w-1] is automaton w, 1-based w in 1..k+1
    std::size_t k = 0;
    std::vector<Interval> pieces;
    std::vector<std::vector<std::size_t>> allowed;  // piece indices per anchor
};

std::vector<EffWindow> plan_windows(const FkContext& cx, std::size_t h0,
                                    const std::vector<std::size_t>& omega) {
    std::map<std::size_t, std::vector<std::size_t>> hosted;
    for (std::size_t w = h0 + 1; w <= cx.k; ++w)
        hosted[omega[w - h0 - 1]].push_back(w);

    std::vector<EffWindow> out;
    std::size_t cursor = 0;
    std::size_t enter = h0 + 1;
    for (const auto& [piece, ws] : hosted) {
        if (cursor < piece)
            out.push_back({merge_pieces(cx.pieces, cursor, piece - 1), enter, {}});
        out.push_back({cx.pieces[piece], enter, ws});
        enter = ws.back() + 1;
        cursor = piece + 1;
    }
    if (cursor < cx.pieces.size())
        out.push_back({merge_pieces(cx.pieces, cursor, cx.pieces.size() - 1), enter, {}});
    return out;
}

// The language the window's slice of the suffix must fall in, given the
// state the entering automaton carries across the left boundary and the
// state handed over at the right one. Anchored automata accept inside the
// window: the first must consume at least its anchor letter, later ones run
// init-to-final in full.
SymbolicNfa window_chain(const FkContext& cx, const EffWindow& w,
                         std::size_t entry, std::optional<std::size_t> exit) {
    const SymbolicNfa& enter_a = cx.as[w.enter - 1];
    if (w.anchors.empty()) {
        std::vector<std::size_t> finals =
            exit ? std::vector<std::size_t>{*exit} : enter_a.finals();
        return with_init_finals(enter_a, entry, std::move(finals));
    }
    std::size_t first = w.anchors.front();
    std::size_t last = w.anchors.back();
    SymbolicNfa chain = nonempty_part(
        with_init_finals(cx.as[first - 1], entry, cx.as[first - 1].finals()));
    for (std::size_t a = first + 1; a <= last; ++a)
        chain = nfa_concat(chain, cx.as[a - 1]);
    const SymbolicNfa& next_a = cx.as[last];
    SymbolicNfa tail = exit ? with_init_finals(next_a, next_a.init(), {*exit})
                            : next_a;
    return nfa_concat(chain, tail);
}

std::string describe_disjunct(const FkContext& cx, std::size_t h0,
                              const std::vector<std::size_t>& omega,
                              const std::vector<EffWindow>& wins,
                              const std::vector<std::size_t>& entries) {
    std::ostringstream os;
    os << "h0=" << h0;
    for (std::size_t w = h0 + 1; w <= cx.k; ++w)
        os << " i" << w << "@" << cx.pieces[omega[w - h0 - 1]].to_string();
    for (std::size_t v = 1; v < wins.size(); ++v)
        os << " " << wins[v].ivl.to_string() << ":"
           << cx.as[wins[v].enter - 1].state_name(entries[v]);
    return os.str();
}

void emit_plan(const FkContext& cx, std::size_t h0,
               const std::vector<std::size_t>& omega, Interner& in,
               ReductionReport& rep, std::vector<Formula>& disjuncts,
               std::set<std::size_t>& seen_hashes,
               std::vector<Formula>& seen_formulas) {
    std::vector<EffWindow> wins = plan_windows(cx, h0, omega);
    std::size_t m = wins.size();

    std::vector<std::size_t> dims;
    for (std::size_t v = 1; v < m; ++v)
        dims.push_back(cx.as[wins[v].enter - 1].num_states());
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    rep.disjuncts_before_pruning += total;

    std::vector<std::size_t> pick(dims.size(), 0);
    for (std::size_t it = 0; it < total; ++it) {
        std::vector<std::size_t> entries(m, 0);
        entries[0] = cx.as[wins[0].enter - 1].init();
        for (std::size_t v = 1; v < m; ++v) entries[v] = pick[v - 1];

        std::vector<Formula> conjs;
        bool dead = false;
        for (std::size_t v = 0; v < m; ++v) {
            std::optional<std::size_t> exit;
            if (v + 1 < m) exit = entries[v + 1];
            SymbolicNfa b = prune_unreachable(window_chain(cx, wins[v], entries[v], exit));
            if (language_empty(b)) {
                dead = true;
                break;
            }
            conjs.push_back(in.intern(f_rat(wins[v].ivl, std::move(b))));
        }
        if (!dead) {
            Formula d = in.intern(f_and(std::move(conjs)));
            bool fresh = true;
            if (seen_hashes.count(d->hash)) {
                for (const auto& g : seen_formulas)
                    if (formula_equal(g, d)) {
                        fresh = false;
                        break;
                    }
            }
            if (fresh) {
                seen_hashes.insert(d->hash);
                seen_formulas.push_back(d);
                disjuncts.push_back(d);
                rep.witness_states.push_back(
                    describe_disjunct(cx, h0, omega, wins, entries));
            }
        }

        for (std::size_t v = 0; v < pick.size(); ++v) {
            if (++pick[v] < dims[v]) break;
            pick[v] = 0;
        }
    }
}

void enumerate_omegas(const FkContext& cx, std::size_t h0, std::size_t w,
                      std::size_t min_piece, std::vector<std::size_t>& omega,
                      Interner& in, ReductionReport& rep,
                      std::vector<Formula>& disjuncts,
                      std::set<std::size_t>& seen_hashes,
                      std::vector<Formula>& seen_formulas) {
    if (w > cx.k) {
        ++rep.plans;
        emit_plan(cx, h0, omega, in, rep, disjuncts, seen_hashes, seen_formulas);
        return;
    }
    for (std::size_t p : cx.allowed[w - 1]) {
        if (p < min_piece) continue;
        omega.push_back(p);
        enumerate_omegas(cx, h0, w + 1, p, omega, in, rep, disjuncts,
                         seen_hashes, seen_formulas);
        omega.pop_back();
    }
}

} // namespace

ReductionReport fk_to_rat(const Formula& f, FkToRatOptions opts) {
    if (f->kind != Kind::Fk)
        throw Error("fk_to_rat expects an Fk node");
    FkContext cx;
    cx.ivls = f->intervals;
    cx.as = f->automata;
    cx.k = cx.ivls.size();

    for (const auto& i : cx.ivls) {
        bool closed = !i.lo_unbounded() && i.lo_closed() &&
                      !i.hi_unbounded() && i.hi_closed();
        if (!closed && !opts.allow_nonclosed)
            throw Error("fk_to_rat precondition: interval " + i.to_string() +
                        " is not closed");
    }
    for (std::size_t j = 0; j + 1 < cx.k; ++j) {
        bool sorted = !cx.ivls[j].hi_unbounded() &&
                      cx.ivls[j].hi() <= cx.ivls[j + 1].lo();
        if (!sorted)
            throw Error("fk_to_rat precondition: intervals not sorted, sup(" +
                        cx.ivls[j].to_string() + ") > inf(" +
                        cx.ivls[j + 1].to_string() + ")");
    }

    cx.pieces = atomic_pieces(cx.ivls);
    cx.allowed.resize(cx.k);
    for (std::size_t j = 0; j < cx.k; ++j)
        for (std::size_t p = 0; p < cx.pieces.size(); ++p)
            if (interval_subset(cx.pieces[p], cx.ivls[j]))
                cx.allowed[j].push_back(p);

    ReductionReport rep;
    rep.input = f;
    Interner in;
    std::vector<Formula> disjuncts;
    std::set<std::size_t> seen_hashes;
    std::vector<Formula> seen_formulas;

    for (std::size_t h0 = 0;; ++h0) {
        std::vector<std::size_t> omega;
        enumerate_omegas(cx, h0, h0 + 1, 0, omega, in, rep, disjuncts,
                         seen_hashes, seen_formulas);
        if (h0 == cx.k) break;
        if (!cx.ivls[h0].contains_zero() || !accepts_empty(cx.as[h0])) break;
    }

    rep.disjuncts_emitted = disjuncts.size();
    rep.output = f_or(std::move(disjuncts));
    rep.output_nodes = formula_node_count(rep.output);
    return rep;
}

ReductionReport rat_to_fk(const Formula& f) {
    if (f->kind != Kind::Rat)
        throw Error("rat_to_fk expects a Rat node");
    const Interval& w = *f->ivl;
    const SymbolicNfa& a = f->automata[0];
    const auto& s = a.sset();
    if (s.size() > 20)
        throw Error("rat_to_fk: alphabet too large to enumerate");

    ReductionReport rep;
    rep.input = f;
    Interner in;

    SymbolicNfa xs = universal(s);
    SymbolicNfa x1 = single_any_letter(s);
    SymbolicNfa eps = epsilon_only(s);

    // The stretch of the time axis before the window and after it, phrased
    // so that the predecessor (successor) of a window position always lands
    // inside when it is not itself in the window.
    std::optional<Interval> jpre, jpost;
    std::int64_t l = w.lo();
    if (w.lo_closed() && l == 0)
        jpre = std::nullopt;
    else if (w.lo_closed())
        jpre = Interval::left_closed(0, l);
    else if (l == 0)
        jpre = Interval::punctual(0);
    else
        jpre = Interval::closed(0, l);
    if (!w.hi_unbounded())
        jpost = w.hi_closed() ? Interval::greater_than(w.hi())
                              : Interval::at_least(w.hi());

    // Does any position strictly after the anchor fall in the window? With
    // 0 in the window a bare existential would also admit the anchor
    // itself, so that case forces the witness to be a real successor.
    Formula win_nonempty =
        jpre ? in.intern(f_fk({w}, {xs, xs})) : in.intern(f_fk({w}, {x1, xs}));

    std::vector<Formula> top;
    if (accepts_empty(a)) {
        top.push_back(f_not(win_nonempty));
        rep.witness_states.push_back("empty-window: epsilon accepted");
    }
    ++rep.disjuncts_before_pruning;

    for (Letter mask : all_letters(s.size())) {
        rep.disjuncts_before_pruning += jpost ? 2 : 1;
        SymbolicNfa rest = prune_unreachable(left_quotient(a, mask));
        if (language_empty(rest)) continue;
        SymbolicNfa first = letter_nfa(s, mask);
        std::ostringstream desc;
        desc << "first-letter mask=" << mask;
        if (jpre) {
            top.push_back(in.intern(
                f_fk({*jpre, w, w}, {xs, first, rest, eps})));
            if (jpost)
                top.push_back(in.intern(f_fk({*jpre, w, w, *jpost},
                                             {xs, first, rest, x1, xs})));
        } else {
            top.push_back(in.intern(f_fk({w, w}, {first, rest, eps})));
            if (jpost)
                top.push_back(in.intern(
                    f_fk({w, w, *jpost}, {first, rest, x1, xs})));
        }
        rep.witness_states.push_back(desc.str());
    }

    rep.disjuncts_emitted = top.size();
    rep.output = f_or(std::move(top));
    rep.output_nodes = formula_node_count(rep.output);
    return rep;
}

Formula until_via_frat(const Formula& f) {
    if (f->kind != Kind::Until || !f->ivl)
        throw Error("until_via_frat expects a timed Until node");
    Formula a = f->kids[0];
    Formula b = f->kids[1];
    std::vector<Formula> s = canonical_sset({a, b});
    auto bit_of = [&](const Formula& g) {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (formula_equal(s[i], g)) return Letter(1) << i;
        throw Error("until_via_frat: operand missing from formula set");
    };
    Letter m1 = bit_of(a);
    Letter m2 = bit_of(b);
    Letter m12 = m1 | m2;
    SymbolicNfa holds = nfa_union(letter_nfa(s, m1), letter_nfa(s, m12));
    SymbolicNfa hits = nfa_union(letter_nfa(s, m2), letter_nfa(s, m12));
    SymbolicNfa lang = prune_unreachable(nfa_concat(nfa_star(holds), hits));
    return f_frat(*f->ivl, std::move(lang));
}

std::size_t formula_node_count(const Formula& f) {
    std::size_t n = 1;
    for (const auto& k : f->kids) n += formula_node_count(k);
    return n;
}

std::string report_to_string(const ReductionReport& r) {
    std::ostringstream os;
    os << "input nodes: " << formula_node_count(r.input) << "\n";
    os << "output nodes: " << r.output_nodes << "\n";
    os << "plans: " << r.plans << "\n";
    os << "disjuncts: " << r.disjuncts_emitted << " kept of "
       << r.disjuncts_before_pruning << " enumerated\n";
    return os.str();
}

} // namespace tlkit
