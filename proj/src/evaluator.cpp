#include "tlkit/evaluator.hpp"

#include "tlkit/automaton.hpp"

#include <algorithm>
#include <set>

namespace tlkit {

namespace {

bool in_window(const std::optional<Interval>& ivl, const Rational& d) {
    return !ivl || ivl->contains(d);
}

void advance(const SymbolicNfa& a, std::vector<char>& cur, Letter c) {
    std::vector<char> next(a.num_states(), 0);
    for (const Transition& t : a.transitions())
        if (cur[t.from] && t.letter == c) next[t.to] = 1;
    cur.swap(next);
}

bool hits_final(const SymbolicNfa& a, const std::vector<char>& cur) {
    for (std::size_t q : a.finals())
        if (cur[q]) return true;
    return false;
}

std::vector<char> initial_frontier(const SymbolicNfa& a) {
    std::vector<char> cur(a.num_states(), 0);
    cur[a.init()] = 1;
    return cur;
}

} // namespace

std::size_t Evaluator::KeyHash::operator()(const Key& k) const {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](std::size_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(reinterpret_cast<std::size_t>(k.node));
    mix(k.pos);
    for (const auto& [name, val] : k.nu) {
        mix(std::hash<std::string>{}(name));
        mix(hash_rational(val));
    }
    return h;
}

Evaluator::Evaluator(const TimedWord& w, EvalOptions opts)
    : word_(&w), opts_(opts) {}

const std::vector<std::string>& Evaluator::free_vars(const Formula& f) {
    auto it = free_cache_.find(f.get());
    if (it != free_cache_.end()) return it->second;
    std::set<std::string> acc;
    switch (f->kind) {
    case Kind::TmX:
    case Kind::XmT:
        acc.insert(f->name);
        break;
    case Kind::Freeze:
        for (const auto& v : free_vars(f->kids[0])) acc.insert(v);
        acc.erase(f->name);
        break;
    default:
        for (const auto& k : f->kids)
            for (const auto& v : free_vars(k)) acc.insert(v);
        for (const auto& a : f->automata)
            for (const auto& g : a.sset())
                for (const auto& v : free_vars(g)) acc.insert(v);
        break;
    }
    return free_cache_
        .emplace(f.get(), std::vector<std::string>(acc.begin(), acc.end()))
        .first->second;
}

bool Evaluator::eval(const Formula& f, std::size_t pos, const Valuation& nu) {
    if (pos < 1 || pos > word_->size())
        throw Error("evaluation position out of range");
    Key key{f.get(), pos, {}};
    const auto& fv = free_vars(f);
    key.nu.reserve(fv.size());
    for (const auto& v : fv) {
        auto it = nu.find(v);
        if (it != nu.end()) key.nu.emplace_back(it->first, it->second);
    }
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;
    bool r = eval_raw(f, pos, nu);
    memo_.emplace(std::move(key), r);
    return r;
}

bool Evaluator::eval(const Formula& f, std::size_t pos) {
    return eval(f, pos, Valuation{});
}

bool Evaluator::satisfies(const Formula& f) {
    Valuation nu;
    for (const auto& v : collect_freeze_vars(f)) nu[v] = Rational(0);
    return eval(f, 1, nu);
}

Letter Evaluator::letter_at(const std::vector<Formula>& s, std::size_t pos) {
    Letter c = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (eval(s[i], pos, Valuation{})) c |= Letter(1) << i;
    return c;
}

std::vector<Letter> Evaluator::seg_plus(const std::vector<Formula>& s,
                                        std::size_t x, std::size_t y) {
    std::vector<Letter> out;
    for (std::size_t z = x; z <= y && z <= word_->size(); ++z)
        out.push_back(letter_at(s, z));
    return out;
}

std::vector<Letter> Evaluator::seg_minus(const std::vector<Formula>& s,
                                         std::size_t x, std::size_t y) {
    std::vector<Letter> out;
    for (std::size_t z = std::min(x, word_->size()); z >= y && z >= 1; --z) {
        out.push_back(letter_at(s, z));
        if (z == 1) break;
    }
    return out;
}

std::vector<Letter> Evaluator::tseg(const std::vector<Formula>& s,
                                    std::size_t i, const Interval& ivl) {
    // Timestamps are non-decreasing and intervals convex, so the qualifying
    // positions form one contiguous block.
    std::vector<Letter> out;
    for (std::size_t z = i + 1; z <= word_->size(); ++z) {
        Rational d = word_->tau(z) - word_->tau(i);
        if (ivl.contains(d))
            out.push_back(letter_at(s, z));
        else if (!out.empty())
            break;
    }
    return out;
}

bool Evaluator::eval_fk(const Formula& f, std::size_t pos) {
    const auto& as = f->automata;
    const auto& ivs = f->intervals;
    const std::size_t k = ivs.size();
    const auto& s = as[0].sset();
    const std::size_t n = word_->size();
    const Rational t0 = word_->tau(pos);

    // fr[w] holds the states automaton w can be in after reading its segment
    // so far, over every admissible choice of the earlier anchor positions.
    std::vector<std::vector<char>> fr(k + 1);
    fr[0] = initial_frontier(as[0]);
    for (std::size_t w = 1; w <= k; ++w) fr[w].assign(as[w].num_states(), 0);

    // Anchoring i_w at the current position hands control to automaton w+1,
    // which starts reading from the next position. Levels are promoted in
    // increasing order so several anchors may share one position.
    auto cascade = [&](const Rational& d) {
        for (std::size_t w = 0; w < k; ++w) {
            if (!ivs[w].contains(d)) continue;
            if (!hits_final(as[w], fr[w])) continue;
            fr[w + 1][as[w + 1].init()] = 1;
        }
    };

    cascade(Rational(0));
    for (std::size_t p = pos + 1; p <= n; ++p) {
        Letter c = letter_at(s, p);
        for (std::size_t w = 0; w <= k; ++w) advance(as[w], fr[w], c);
        Rational d = word_->tau(p) - t0;
        cascade(d);
    }
    return hits_final(as[k], fr[k]);
}

bool Evaluator::eval_pk(const Formula& f, std::size_t pos) {
    const auto& as = f->automata;
    const auto& ivs = f->intervals;
    const std::size_t k = ivs.size();
    const auto& s = as[0].sset();
    const Rational t0 = word_->tau(pos);

    std::vector<std::vector<char>> fr(k + 1);
    fr[0] = initial_frontier(as[0]);
    for (std::size_t w = 1; w <= k; ++w) fr[w].assign(as[w].num_states(), 0);

    auto cascade = [&](const Rational& d) {
        for (std::size_t w = 0; w < k; ++w) {
            if (!ivs[w].contains(d)) continue;
            if (!hits_final(as[w], fr[w])) continue;
            fr[w + 1][as[w + 1].init()] = 1;
        }
    };

    cascade(Rational(0));
    for (std::size_t p = pos; p > 1; --p) {
        Letter c = letter_at(s, p - 1);
        for (std::size_t w = 0; w <= k; ++w) advance(as[w], fr[w], c);
        Rational d = t0 - word_->tau(p - 1);
        cascade(d);
    }
    return hits_final(as[k], fr[k]);
}

bool Evaluator::eval_raw(const Formula& f, std::size_t pos, const Valuation& nu) {
    const std::size_t n = word_->size();
    switch (f->kind) {
    case Kind::True_:
        return true;
    case Kind::False_:
        return false;
    case Kind::Atom:
        return word_->props(pos).count(f->name) > 0;
    case Kind::Not:
        return !eval(f->kids[0], pos, nu);
    case Kind::And:
        for (const auto& k : f->kids)
            if (!eval(k, pos, nu)) return false;
        return true;
    case Kind::Or:
        for (const auto& k : f->kids)
            if (eval(k, pos, nu)) return true;
        return false;
    case Kind::Implies:
        return !eval(f->kids[0], pos, nu) || eval(f->kids[1], pos, nu);
    case Kind::Iff:
        return eval(f->kids[0], pos, nu) == eval(f->kids[1], pos, nu);
    case Kind::Until:
    case Kind::UntilNs: {
        if (f->kind == Kind::UntilNs && eval(f->kids[1], pos, nu)) return true;
        if (f->kind == Kind::UntilNs && !eval(f->kids[0], pos, nu)) return false;
        for (std::size_t j = pos + 1; j <= n; ++j) {
            Rational d = word_->tau(j) - word_->tau(pos);
            if (in_window(f->ivl, d) && eval(f->kids[1], j, nu)) return true;
            if (!eval(f->kids[0], j, nu)) return false;
        }
        return false;
    }
    case Kind::Since:
    case Kind::SinceNs: {
        if (f->kind == Kind::SinceNs && eval(f->kids[1], pos, nu)) return true;
        if (f->kind == Kind::SinceNs && !eval(f->kids[0], pos, nu)) return false;
        for (std::size_t j = pos; j-- > 1;) {
            Rational d = word_->tau(pos) - word_->tau(j);
            if (in_window(f->ivl, d) && eval(f->kids[1], j, nu)) return true;
            if (!eval(f->kids[0], j, nu)) return false;
        }
        return false;
    }
    case Kind::Eventually:
    case Kind::Next: {
        for (std::size_t j = pos + 1; j <= n; ++j) {
            Rational d = word_->tau(j) - word_->tau(pos);
            if (in_window(f->ivl, d) && eval(f->kids[0], j, nu)) return true;
            if (f->kind == Kind::Next) break;  // witness must be the successor
        }
        return false;
    }
    case Kind::EventuallyPast:
    case Kind::Prev: {
        for (std::size_t j = pos; j-- > 1;) {
            Rational d = word_->tau(pos) - word_->tau(j);
            if (in_window(f->ivl, d) && eval(f->kids[0], j, nu)) return true;
            if (f->kind == Kind::Prev) break;
        }
        return false;
    }
    case Kind::Always:
    case Kind::BoxT: {
        for (std::size_t j = pos + 1; j <= n; ++j) {
            Rational d = word_->tau(j) - word_->tau(pos);
            if (in_window(f->ivl, d) && !eval(f->kids[0], j, nu)) return false;
        }
        return true;
    }
    case Kind::AlwaysPast:
    case Kind::BoxPastT: {
        for (std::size_t j = pos; j-- > 1;) {
            Rational d = word_->tau(pos) - word_->tau(j);
            if (in_window(f->ivl, d) && !eval(f->kids[0], j, nu)) return false;
        }
        return true;
    }
    case Kind::EventuallyNs: {
        for (std::size_t j = pos; j <= n; ++j)
            if (eval(f->kids[0], j, nu)) return true;
        return false;
    }
    case Kind::AlwaysNs: {
        for (std::size_t j = pos; j <= n; ++j)
            if (!eval(f->kids[0], j, nu)) return false;
        return true;
    }
    case Kind::Freeze: {
        Valuation nu2 = nu;
        nu2[f->name] = word_->tau(pos);
        return eval(f->kids[0], pos, nu2);
    }
    case Kind::TmX: {
        auto it = nu.find(f->name);
        if (it == nu.end())
            throw Error("unbound freeze variable '" + f->name + "'");
        Rational d = word_->tau(pos) - it->second;
        return f->ivl->contains(d);
    }
    case Kind::XmT: {
        auto it = nu.find(f->name);
        if (it == nu.end())
            throw Error("unbound freeze variable '" + f->name + "'");
        Rational d = it->second - word_->tau(pos);
        return f->ivl->contains(d);
    }
    case Kind::Rat: {
        const SymbolicNfa& a = f->automata[0];
        std::vector<Letter> seg = tseg(a.sset(), pos, *f->ivl);
        if (seg.empty() && opts_.empty_window == EmptyWindowPolicy::AlwaysFalse)
            return false;
        return accepts(a, seg);
    }
    case Kind::FRat: {
        const SymbolicNfa& a = f->automata[0];
        std::vector<char> cur = initial_frontier(a);
        for (std::size_t j = pos;; ++j) {
            Rational d = word_->tau(j) - word_->tau(pos);
            if (f->ivl->contains(d) && hits_final(a, cur)) return true;
            if (j == n) break;
            advance(a, cur, letter_at(a.sset(), j + 1));
        }
        return false;
    }
    case Kind::PRat: {
        const SymbolicNfa& a = f->automata[0];
        std::vector<char> cur = initial_frontier(a);
        for (std::size_t j = pos;; --j) {
            Rational d = word_->tau(pos) - word_->tau(j);
            if (f->ivl->contains(d) && hits_final(a, cur)) return true;
            if (j == 1) break;
            advance(a, cur, letter_at(a.sset(), j - 1));
        }
        return false;
    }
    case Kind::Fk:
        return eval_fk(f, pos);
    case Kind::Pk:
        return eval_pk(f, pos);
    }
    throw Error("evaluator reached an unknown formula kind");
}

bool evaluate(const TimedWord& w, const Formula& f, std::size_t pos, EvalOptions opts) {
    Evaluator ev(w, opts);
    Valuation nu;
    for (const auto& v : collect_freeze_vars(f)) nu[v] = Rational(0);
    return ev.eval(f, pos, nu);
}

bool satisfies(const TimedWord& w, const Formula& f, EvalOptions opts) {
    Evaluator ev(w, opts);
    return ev.satisfies(f);
}

std::vector<Letter> seg_plus(const TimedWord& w, std::size_t x, std::size_t y,
                             const std::vector<Formula>& s, EvalOptions opts) {
    Evaluator ev(w, opts);
    return ev.seg_plus(s, x, y);
}

std::vector<Letter> seg_minus(const TimedWord& w, std::size_t x, std::size_t y,
                              const std::vector<Formula>& s, EvalOptions opts) {
    Evaluator ev(w, opts);
    return ev.seg_minus(s, x, y);
}

std::vector<Letter> tseg(const TimedWord& w, std::size_t i, const Interval& ivl,
                         const std::vector<Formula>& s, EvalOptions opts) {
    Evaluator ev(w, opts);
    return ev.tseg(s, i, ivl);
}

std::string segment_to_string(const std::vector<Formula>& s,
                              const std::vector<Letter>& seg) {
    if (seg.empty()) return "(empty)";
    std::string out;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        if (i) out += " ";
        out += "P[{";
        bool first = true;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (!(seg[i] & (Letter(1) << b))) continue;
            if (!first) out += ", ";
            out += format_formula_atomic(s[b]);
            first = false;
        }
        out += "}]";
    }
    return out;
}

} // namespace tlkit
