#include "tlkit/fuzz.hpp"

#include "tlkit/evaluator.hpp"
#include "tlkit/reductions.hpp"
#include "tlkit/rewrite.hpp"

#include <sstream>

namespace tlkit {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    return bound == 0 ? 0 : next() % bound;
}

std::vector<Rational> default_grid() {
    std::vector<Rational> g;
    for (int i = 0; i <= 8; ++i) {
        Rational r(i, 2);
        r.canonicalize();
        g.push_back(r);
    }
    return g;
}

TimedWord random_word(SplitMix64& rng, const std::vector<std::string>& props,
                      std::size_t max_len, const std::vector<Rational>& grid) {
    if (props.empty() || props.size() > 10 || grid.empty() || grid.front() != 0)
        throw Error("random_word: needs 1..10 propositions and a grid starting at 0");
    std::size_t len = 1 + rng.below(max_len);
    std::vector<TimedEvent> events;
    std::size_t tick = 0;
    for (std::size_t i = 0; i < len; ++i) {
        if (i > 0) tick += rng.below(grid.size() - tick);
        std::uint64_t mask = 1 + rng.below((1ull << props.size()) - 1);
        PropSet ps;
        for (std::size_t p = 0; p < props.size(); ++p)
            if (mask & (1ull << p)) ps.insert(props[p]);
        events.push_back({std::move(ps), grid[tick]});
    }
    return TimedWord(std::move(events));
}

Interval random_nat_interval(SplitMix64& rng, std::int64_t max_endpoint) {
    std::int64_t lo = static_cast<std::int64_t>(rng.below(max_endpoint + 1));
    switch (rng.below(7)) {
    case 0: return Interval::punctual(lo);
    case 1: return Interval::closed(lo, lo + static_cast<std::int64_t>(rng.below(3)));
    case 2: return Interval::open(lo, lo + 1 + static_cast<std::int64_t>(rng.below(3)));
    case 3: return Interval::left_closed(lo, lo + 1 + static_cast<std::int64_t>(rng.below(3)));
    case 4: return Interval::right_closed(lo, lo + 1 + static_cast<std::int64_t>(rng.below(3)));
    case 5: return Interval::at_least(lo);
    default: return Interval::greater_than(lo);
    }
}

std::vector<Interval> random_sorted_closed_intervals(SplitMix64& rng, std::size_t k,
                                                     std::int64_t max_endpoint) {
    std::vector<Interval> out;
    std::int64_t lo = 0;
    for (std::size_t j = 0; j < k; ++j) {
        lo += static_cast<std::int64_t>(rng.below(2));
        std::int64_t hi = lo + static_cast<std::int64_t>(rng.below(3));
        if (hi > max_endpoint) hi = max_endpoint;
        if (lo > hi) lo = hi;
        out.push_back(Interval::closed(lo, hi));
        lo = hi;
    }
    return out;
}

SymbolicNfa random_nfa(SplitMix64& rng, std::vector<Formula> sset, std::size_t max_states) {
    std::size_t n = 1 + rng.below(max_states);
    std::vector<Transition> ts;
    for (std::size_t from = 0; from < n; ++from)
        for (Letter l : all_letters(sset.size()))
            for (std::size_t to = 0; to < n; ++to)
                if (rng.below(3) == 0) ts.push_back({from, l, to});
    std::vector<std::size_t> finals;
    for (std::size_t q = 0; q < n; ++q)
        if (rng.coin()) finals.push_back(q);
    return SymbolicNfa(std::move(sset), n, 0, std::move(finals), std::move(ts));
}

namespace {

Interval random_bounded_interval(SplitMix64& rng, std::int64_t max_endpoint) {
    while (true) {
        Interval i = random_nat_interval(rng, max_endpoint);
        if (!i.hi_unbounded()) return i;
    }
}

Formula random_leaf(SplitMix64& rng, const std::vector<std::string>& props, bool var_bound) {
    std::uint64_t roll = rng.below(var_bound ? 8 : 6);
    if (roll < 4) return f_atom(props[rng.below(props.size())]);
    if (roll == 4) return f_true();
    if (roll == 5) return f_false();
    if (roll == 6) return f_tmx("x", random_nat_interval(rng, 2));
    return f_xmt("x", random_nat_interval(rng, 2));
}

Formula random_core(SplitMix64& rng, const std::vector<std::string>& props, std::size_t depth,
                    bool var_bound) {
    if (depth == 0) return random_leaf(rng, props, var_bound);
    switch (rng.below(8)) {
    case 0: return f_not(random_core(rng, props, depth - 1, var_bound));
    case 1:
        return f_and(random_core(rng, props, depth - 1, var_bound),
                     random_core(rng, props, depth - 1, var_bound));
    case 2:
        return f_or(random_core(rng, props, depth - 1, var_bound),
                    random_core(rng, props, depth - 1, var_bound));
    case 3:
        return f_until(random_core(rng, props, depth - 1, var_bound),
                       random_core(rng, props, depth - 1, var_bound));
    case 4:
        return f_since(random_core(rng, props, depth - 1, var_bound),
                       random_core(rng, props, depth - 1, var_bound));
    case 5: return f_always(random_core(rng, props, depth - 1, var_bound));
    case 6: return f_always_past(random_core(rng, props, depth - 1, var_bound));
    default: return f_freeze("x", random_core(rng, props, depth - 1, true));
    }
}

} // namespace

Formula random_constraint_formula(SplitMix64& rng, const std::vector<std::string>& props,
                                  std::size_t depth) {
    return random_core(rng, props, depth, false);
}

Formula random_metric_formula(SplitMix64& rng, const std::vector<std::string>& props,
                              std::size_t depth) {
    if (depth == 0) {
        std::uint64_t roll = rng.below(6);
        if (roll < 4) return f_atom(props[rng.below(props.size())]);
        return roll == 4 ? f_true() : f_false();
    }
    auto sub = [&] { return random_metric_formula(rng, props, depth - 1); };
    auto ivl = [&]() -> std::optional<Interval> {
        if (rng.coin()) return std::nullopt;
        return random_nat_interval(rng, 2);
    };
    switch (rng.below(14)) {
    case 0: return f_not(sub());
    case 1: return f_and(sub(), sub());
    case 2: return f_or(sub(), sub());
    case 3: return f_implies(sub(), sub());
    case 4: return f_iff(sub(), sub());
    case 5: return f_until(sub(), sub(), ivl());
    case 6: return f_since(sub(), sub(), ivl());
    case 7: return f_until_ns(sub(), sub());
    case 8: return f_since_ns(sub(), sub());
    case 9: return f_eventually(sub(), ivl());
    case 10: return f_eventually_past(sub(), ivl());
    case 11: return f_box(sub(), ivl());
    case 12: return f_box_past(sub(), ivl());
    default: return rng.coin() ? f_next(sub(), ivl()) : f_prev(sub(), ivl());
    }
}

namespace {

std::string describe_mismatch(std::size_t case_no, const Formula& f, const Formula& g,
                              const TimedWord& w, std::size_t pos, bool vf, bool vg) {
    std::ostringstream os;
    os << "case " << case_no << "\n";
    os << "input:  " << format_formula(f) << "\n";
    os << "output: " << format_formula(g) << "\n";
    os << "word:\n" << w.to_string();
    os << "position " << pos << ": input=" << (vf ? "true" : "false")
       << " output=" << (vg ? "true" : "false") << "\n";
    return os.str();
}

// True when the two formulas agree everywhere; otherwise records the witness.
bool agree_on_words(SplitMix64& rng, const FuzzOptions& o,
                    const std::vector<std::string>& props, std::size_t case_no,
                    const Formula& f, const Formula& g, FuzzReport& rep) {
    for (std::size_t wi = 0; wi < o.words_per_case; ++wi) {
        TimedWord w = random_word(rng, props, o.max_word_len);
        Evaluator ef(w);
        for (std::size_t pos = 1; pos <= w.size(); ++pos) {
            bool vf = ef.eval(f, pos);
            bool vg = ef.eval(g, pos);
            if (vf != vg) {
                rep.ok = false;
                rep.counterexample = describe_mismatch(case_no, f, g, w, pos, vf, vg);
                return false;
            }
        }
    }
    return true;
}

std::vector<std::string> random_props(SplitMix64& rng) {
    if (rng.coin()) return {"p", "q"};
    return {"p"};
}

std::vector<Formula> atoms_of(const std::vector<std::string>& props) {
    std::vector<Formula> s;
    for (const auto& p : props) s.push_back(f_atom(p));
    return s;
}

// Interval rows for the gated construction: arbitrary shapes, still sorted
// by endpoint value, with an unbounded interval allowed only in last place.
std::vector<Interval> random_gated_intervals(SplitMix64& rng, std::size_t k) {
    std::vector<Interval> out;
    std::int64_t lo = 0;
    for (std::size_t j = 0; j < k; ++j) {
        bool last = j + 1 == k;
        Interval i = last && rng.below(3) == 0
                         ? (rng.coin() ? Interval::at_least(lo) : Interval::greater_than(lo))
                         : random_bounded_interval(rng, lo + 2);
        // shift the fresh interval so the rows stay sorted
        if (!i.hi_unbounded()) {
            std::int64_t width = i.hi() - i.lo();
            std::int64_t at = lo + static_cast<std::int64_t>(rng.below(2));
            i = Interval(at, i.lo_closed(), at + width, i.hi_closed());
            lo = i.hi();
        } else {
            std::int64_t at = lo + static_cast<std::int64_t>(rng.below(2));
            i = i.lo_closed() ? Interval::at_least(at) : Interval::greater_than(at);
        }
        out.push_back(i);
    }
    return out;
}

Formula random_fk(SplitMix64& rng, const std::vector<std::string>& props, std::size_t k,
                  std::size_t max_states, bool gated) {
    std::vector<Interval> ivls = gated ? random_gated_intervals(rng, k)
                                       : random_sorted_closed_intervals(rng, k, 3);
    std::vector<SymbolicNfa> as;
    for (std::size_t j = 0; j <= k; ++j) as.push_back(random_nfa(rng, atoms_of(props), max_states));
    return f_fk(std::move(ivls), std::move(as));
}

Formula replace_rat_nodes(const Formula& f) {
    if (f->kind == Kind::Rat) return rat_to_fk(f).output;
    if (f->kids.empty()) return f;
    std::vector<Formula> ks;
    for (const auto& kid : f->kids) ks.push_back(replace_rat_nodes(kid));
    switch (f->kind) {
    case Kind::And: return f_and(std::move(ks));
    case Kind::Or: return f_or(std::move(ks));
    case Kind::Not: return f_not(ks[0]);
    default:
        throw Error("fuzz: unexpected connective in a translated formula: " +
                    format_formula(f));
    }
}

template <typename MakePair>
FuzzReport run_pairs(const FuzzOptions& o, MakePair make) {
    FuzzReport rep;
    SplitMix64 root(o.seed);
    for (std::size_t c = 1; c <= o.cases; ++c) {
        SplitMix64 rng = root.split();
        std::vector<std::string> props = random_props(rng);
        auto [f, g] = make(rng, props);
        rep.cases = c;
        if (!agree_on_words(rng, o, props, c, f, g, rep)) break;
    }
    return rep;
}

} // namespace

FuzzReport fuzz_fk_to_rat(const FuzzOptions& o) {
    return run_pairs(o, [&](SplitMix64& rng, const std::vector<std::string>& props) {
        std::size_t k = 1 + rng.below(2);
        Formula f = random_fk(rng, props, k, o.max_states, o.allow_nonclosed);
        FkToRatOptions opts;
        opts.allow_nonclosed = o.allow_nonclosed;
        return std::pair{f, fk_to_rat(f, opts).output};
    });
}

FuzzReport fuzz_rat_to_fk(const FuzzOptions& o) {
    return run_pairs(o, [&](SplitMix64& rng, const std::vector<std::string>& props) {
        Formula f = f_rat(random_nat_interval(rng, 3), random_nfa(rng, atoms_of(props), o.max_states));
        return std::pair{f, rat_to_fk(f).output};
    });
}

FuzzReport fuzz_fk_round_trip(const FuzzOptions& o) {
    return run_pairs(o, [&](SplitMix64& rng, const std::vector<std::string>& props) {
        Formula f = random_fk(rng, props, 1, o.max_states, false);
        return std::pair{f, replace_rat_nodes(fk_to_rat(f).output)};
    });
}

FuzzReport fuzz_until_via_frat(const FuzzOptions& o) {
    return run_pairs(o, [&](SplitMix64& rng, const std::vector<std::string>& props) {
        auto side = [&] {
            Formula x = f_atom(props[rng.below(props.size())]);
            if (props.size() > 1 && rng.below(3) == 0)
                x = rng.coin() ? f_or(f_atom(props[0]), f_atom(props[1]))
                               : f_and(f_atom(props[0]), f_not(f_atom(props[1])));
            return x;
        };
        Formula f = f_until(side(), side(), random_nat_interval(rng, 3));
        return std::pair{f, until_via_frat(f)};
    });
}

FuzzReport fuzz_rewrites(const FuzzOptions& o) {
    FuzzReport rep;
    SplitMix64 root(o.seed);
    for (std::size_t c = 1; c <= o.cases; ++c) {
        SplitMix64 rng = root.split();
        std::vector<std::string> props = random_props(rng);
        Formula cf = random_constraint_formula(rng, props, 3);
        Formula mf = random_metric_formula(rng, props, 3);
        rep.cases = c;
        if (!agree_on_words(rng, o, props, c, cf, to_nnf(cf), rep)) break;
        if (!agree_on_words(rng, o, props, c, mf, desugar(mf), rep)) break;
    }
    return rep;
}

std::string fuzz_report_to_string(const FuzzReport& r) {
    if (r.ok) return "OK (" + std::to_string(r.cases) + " cases)\n";
    return "counterexample after " + std::to_string(r.cases) + " cases\n" + r.counterexample;
}

} // namespace tlkit
