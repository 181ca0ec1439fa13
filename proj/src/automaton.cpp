#include "tlkit/automaton.hpp"

#include <algorithm>
#include <sstream>

namespace tlkit {

SymbolicNfa::SymbolicNfa(std::vector<Formula> s, std::size_t num_states,
                         std::size_t init, std::vector<std::size_t> finals,
                         std::vector<Transition> transitions,
                         std::vector<std::string> state_names)
    : s_(std::move(s)), num_states_(num_states), init_(init),
      finals_(std::move(finals)), transitions_(std::move(transitions)),
      state_names_(std::move(state_names)) {
    if (num_states_ == 0)
        throw Error("automaton needs at least one state");
    if (s_.size() > 64)
        throw Error("formula set too large (max 64)");
    for (std::size_t i = 1; i < s_.size(); ++i)
        if (!formula_less(s_[i - 1], s_[i]))
            throw Error("formula set must be sorted and duplicate-free");
    if (init_ >= num_states_)
        throw Error("initial state out of range");
    std::sort(finals_.begin(), finals_.end());
    finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
    for (std::size_t f : finals_)
        if (f >= num_states_)
            throw Error("final state out of range");
    Letter limit = s_.size() >= 64 ? ~Letter(0)
                                   : (Letter(1) << s_.size()) - 1;
    for (const Transition& t : transitions_) {
        if (t.from >= num_states_ || t.to >= num_states_)
            throw Error("transition endpoint out of range");
        if (t.letter > limit)
            throw Error("transition letter mentions formulas outside S");
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()),
                       transitions_.end());
    if (!state_names_.empty() && state_names_.size() != num_states_)
        throw Error("state name list does not match state count");
}

bool SymbolicNfa::is_final(std::size_t q) const {
    return std::binary_search(finals_.begin(), finals_.end(), q);
}

const std::string& SymbolicNfa::state_name(std::size_t q) const {
    static const std::vector<std::string> defaults = [] {
        std::vector<std::string> v;
        for (int i = 0; i < 64; ++i)
            v.push_back("q" + std::to_string(i));
        return v;
    }();
    if (!state_names_.empty())
        return state_names_.at(q);
    if (q < defaults.size())
        return defaults[q];
    throw Error("state index too large for default naming");
}

std::vector<Formula> canonical_sset(std::vector<Formula> s) {
    std::sort(s.begin(), s.end(), formula_less);
    s.erase(std::unique(s.begin(), s.end(), formula_equal), s.end());
    return s;
}

bool same_sset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!formula_equal(a[i], b[i]))
            return false;
    return true;
}

bool nfa_equal(const SymbolicNfa& a, const SymbolicNfa& b) {
    return same_sset(a.sset(), b.sset()) && a.num_states() == b.num_states() &&
           a.init() == b.init() && a.finals() == b.finals() &&
           a.transitions() == b.transitions();
}

std::size_t nfa_hash(const SymbolicNfa& a) {
    auto mix = [](std::size_t h, std::size_t v) {
        return (h ^ v) * 1099511628211ull;
    };
    std::size_t h = 1469598103934665603ull;
    for (const auto& f : a.sset())
        h = mix(h, formula_hash(f));
    h = mix(h, a.num_states());
    h = mix(h, a.init());
    for (auto f : a.finals())
        h = mix(h, f + 1);
    for (const auto& t : a.transitions()) {
        h = mix(h, t.from);
        h = mix(h, std::size_t(t.letter) + 0x9e3779b97f4a7c15ull);
        h = mix(h, t.to);
    }
    return h;
}

bool accepts(const SymbolicNfa& a, const std::vector<Letter>& word) {
    std::vector<char> frontier(a.num_states(), 0);
    frontier[a.init()] = 1;
    for (Letter c : word) {
        std::vector<char> next(a.num_states(), 0);
        bool any = false;
        for (const Transition& t : a.transitions())
            if (t.letter == c && frontier[t.from]) {
                next[t.to] = 1;
                any = true;
            }
        if (!any)
            return false;
        frontier = std::move(next);
    }
    for (std::size_t f : a.finals())
        if (frontier[f])
            return true;
    return false;
}

bool accepts_empty(const SymbolicNfa& a) {
    return a.is_final(a.init());
}

SymbolicNfa with_init_finals(const SymbolicNfa& a, std::size_t init,
                             std::vector<std::size_t> finals) {
    return SymbolicNfa(a.sset(), a.num_states(), init, std::move(finals),
                       a.transitions(), a.state_names());
}

namespace {

void require_same_sset(const SymbolicNfa& a, const SymbolicNfa& b) {
    if (!same_sset(a.sset(), b.sset()))
        throw Error("automata have different formula sets");
}

std::vector<Transition> shifted(const std::vector<Transition>& ts,
                                std::size_t off) {
    std::vector<Transition> out;
    out.reserve(ts.size());
    for (const Transition& t : ts)
        out.push_back({t.from + off, t.letter, t.to + off});
    return out;
}

} // namespace

SymbolicNfa nfa_concat(const SymbolicNfa& a, const SymbolicNfa& b) {
    require_same_sset(a, b);
    std::size_t off = a.num_states();
    std::vector<Transition> ts = a.transitions();
    for (const Transition& t : shifted(b.transitions(), off))
        ts.push_back(t);
    // A transition that completes a word of L(a) may instead hand off to b.
    for (const Transition& t : a.transitions())
        if (a.is_final(t.to))
            ts.push_back({t.from, t.letter, b.init() + off});
    bool ea = accepts_empty(a);
    if (ea)
        for (const Transition& t : b.transitions())
            if (t.from == b.init())
                ts.push_back({a.init(), t.letter, t.to + off});
    std::vector<std::size_t> fin;
    for (std::size_t f : b.finals())
        fin.push_back(f + off);
    if (ea && accepts_empty(b))
        fin.push_back(a.init());
    return SymbolicNfa(a.sset(), off + b.num_states(), a.init(),
                       std::move(fin), std::move(ts));
}

SymbolicNfa nfa_union(const SymbolicNfa& a, const SymbolicNfa& b) {
    require_same_sset(a, b);
    std::size_t offa = 1, offb = 1 + a.num_states();
    std::vector<Transition> ts = shifted(a.transitions(), offa);
    for (const Transition& t : shifted(b.transitions(), offb))
        ts.push_back(t);
    for (const Transition& t : a.transitions())
        if (t.from == a.init())
            ts.push_back({0, t.letter, t.to + offa});
    for (const Transition& t : b.transitions())
        if (t.from == b.init())
            ts.push_back({0, t.letter, t.to + offb});
    std::vector<std::size_t> fin;
    for (std::size_t f : a.finals())
        fin.push_back(f + offa);
    for (std::size_t f : b.finals())
        fin.push_back(f + offb);
    if (accepts_empty(a) || accepts_empty(b))
        fin.push_back(0);
    return SymbolicNfa(a.sset(), 1 + a.num_states() + b.num_states(), 0,
                       std::move(fin), std::move(ts));
}

SymbolicNfa nfa_star(const SymbolicNfa& a) {
    std::size_t off = 1;
    std::vector<Transition> ts = shifted(a.transitions(), off);
    for (const Transition& t : a.transitions())
        if (t.from == a.init())
            ts.push_back({0, t.letter, t.to + off});
    // completing one word of L(a) may restart at a's initial state
    for (const Transition& t : a.transitions())
        if (a.is_final(t.to))
            ts.push_back({t.from + off, t.letter, a.init() + off});
    // the same restart option for one-letter completions out of the new
    // initial state, which never passes through the copied initial state
    for (const Transition& t : a.transitions())
        if (t.from == a.init() && a.is_final(t.to))
            ts.push_back({0, t.letter, a.init() + off});
    std::vector<std::size_t> fin{0};
    for (std::size_t f : a.finals())
        fin.push_back(f + off);
    return SymbolicNfa(a.sset(), 1 + a.num_states(), 0, std::move(fin),
                       std::move(ts));
}

SymbolicNfa left_quotient(const SymbolicNfa& a, Letter c) {
    std::size_t off = 1;
    std::vector<Transition> ts = shifted(a.transitions(), off);
    std::vector<char> after(a.num_states(), 0);
    for (const Transition& t : a.transitions())
        if (t.from == a.init() && t.letter == c)
            after[t.to] = 1;
    bool eps_accepted = false;
    for (std::size_t q = 0; q < a.num_states(); ++q) {
        if (!after[q])
            continue;
        if (a.is_final(q))
            eps_accepted = true;
        for (const Transition& t : a.transitions())
            if (t.from == q)
                ts.push_back({0, t.letter, t.to + off});
    }
    std::vector<std::size_t> fin;
    for (std::size_t f : a.finals())
        fin.push_back(f + off);
    if (eps_accepted)
        fin.push_back(0);
    return SymbolicNfa(a.sset(), 1 + a.num_states(), 0, std::move(fin),
                       std::move(ts));
}

SymbolicNfa right_quotient(const SymbolicNfa& a, Letter c) {
    std::vector<std::size_t> fin;
    for (const Transition& t : a.transitions())
        if (t.letter == c && a.is_final(t.to))
            fin.push_back(t.from);
    return SymbolicNfa(a.sset(), a.num_states(), a.init(), std::move(fin),
                       a.transitions(), a.state_names());
}

SymbolicNfa nonempty_part(const SymbolicNfa& a) {
    std::size_t off = 1;
    std::vector<Transition> ts = shifted(a.transitions(), off);
    for (const Transition& t : a.transitions())
        if (t.from == a.init())
            ts.push_back({0, t.letter, t.to + off});
    std::vector<std::size_t> fin;
    for (std::size_t f : a.finals())
        fin.push_back(f + off);
    return SymbolicNfa(a.sset(), 1 + a.num_states(), 0, std::move(fin),
                       std::move(ts));
}

SymbolicNfa empty_language(std::vector<Formula> s) {
    return SymbolicNfa(std::move(s), 1, 0, {}, {});
}

SymbolicNfa epsilon_only(std::vector<Formula> s) {
    return SymbolicNfa(std::move(s), 1, 0, {0}, {});
}

SymbolicNfa letter_nfa(std::vector<Formula> s, Letter c) {
    return SymbolicNfa(std::move(s), 2, 0, {1}, {{0, c, 1}});
}

SymbolicNfa universal(std::vector<Formula> s) {
    std::vector<Transition> ts;
    for (Letter c : all_letters(s.size()))
        ts.push_back({0, c, 0});
    return SymbolicNfa(std::move(s), 1, 0, {0}, std::move(ts));
}

SymbolicNfa single_any_letter(std::vector<Formula> s) {
    std::vector<Transition> ts;
    for (Letter c : all_letters(s.size()))
        ts.push_back({0, c, 1});
    return SymbolicNfa(std::move(s), 2, 0, {1}, std::move(ts));
}

SymbolicNfa prune_unreachable(const SymbolicNfa& a) {
    std::vector<char> seen(a.num_states(), 0);
    std::vector<std::size_t> stack{a.init()};
    seen[a.init()] = 1;
    while (!stack.empty()) {
        std::size_t q = stack.back();
        stack.pop_back();
        for (const Transition& t : a.transitions())
            if (t.from == q && !seen[t.to]) {
                seen[t.to] = 1;
                stack.push_back(t.to);
            }
    }
    std::vector<std::size_t> remap(a.num_states(), 0);
    std::size_t next = 0;
    for (std::size_t q = 0; q < a.num_states(); ++q)
        if (seen[q])
            remap[q] = next++;
    std::vector<Transition> ts;
    for (const Transition& t : a.transitions())
        if (seen[t.from] && seen[t.to])
            ts.push_back({remap[t.from], t.letter, remap[t.to]});
    std::vector<std::size_t> fin;
    for (std::size_t f : a.finals())
        if (seen[f])
            fin.push_back(remap[f]);
    std::vector<std::string> names;
    if (!a.state_names().empty())
        for (std::size_t q = 0; q < a.num_states(); ++q)
            if (seen[q])
                names.push_back(a.state_names()[q]);
    return SymbolicNfa(a.sset(), next, remap[a.init()], std::move(fin),
                       std::move(ts), std::move(names));
}

bool language_empty(const SymbolicNfa& a) {
    return prune_unreachable(a).finals().empty();
}

std::vector<Letter> all_letters(std::size_t n) {
    if (n > 20)
        throw Error("letter enumeration over " + std::to_string(n) +
                    " formulas is too large");
    std::vector<Letter> out;
    out.reserve(std::size_t(1) << n);
    for (Letter c = 0; c < (Letter(1) << n); ++c)
        out.push_back(c);
    return out;
}

std::set<std::vector<Letter>> language_upto(const SymbolicNfa& a,
                                            std::size_t maxlen) {
    std::set<std::vector<Letter>> out;
    std::vector<Letter> letters = all_letters(a.sset().size());
    // frontier exploration, one word at a time
    struct Item {
        std::vector<Letter> word;
        std::vector<char> states;
    };
    std::vector<char> start(a.num_states(), 0);
    start[a.init()] = 1;
    std::vector<Item> work{{{}, start}};
    while (!work.empty()) {
        Item it = std::move(work.back());
        work.pop_back();
        for (std::size_t f : a.finals())
            if (it.states[f]) {
                out.insert(it.word);
                break;
            }
        if (it.word.size() == maxlen)
            continue;
        for (Letter c : letters) {
            std::vector<char> next(a.num_states(), 0);
            bool any = false;
            for (const Transition& t : a.transitions())
                if (t.letter == c && it.states[t.from]) {
                    next[t.to] = 1;
                    any = true;
                }
            if (!any)
                continue;
            Item child;
            child.word = it.word;
            child.word.push_back(c);
            child.states = std::move(next);
            work.push_back(std::move(child));
        }
    }
    return out;
}

namespace {

std::string letter_to_string(const SymbolicNfa& a, Letter c) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < a.sset().size(); ++i) {
        if (!(c & (Letter(1) << i)))
            continue;
        if (!first)
            out += ",";
        out += format_formula_atomic(a.sset()[i]);
        first = false;
    }
    out += "}";
    return out;
}

} // namespace

std::string SymbolicNfa::to_string(bool multiline) const {
    std::vector<std::string> sections;
    {
        std::string s = "S:";
        for (std::size_t i = 0; i < s_.size(); ++i)
            s += (i ? ", " : " ") + format_formula_atomic(s_[i]);
        sections.push_back(s);
    }
    {
        std::string s = "states:";
        for (std::size_t q = 0; q < num_states_; ++q)
            s += " " + state_name(q);
        sections.push_back(s);
    }
    sections.push_back("init: " + state_name(init_));
    {
        std::string s = "final:";
        for (std::size_t f : finals_)
            s += " " + state_name(f);
        sections.push_back(s);
    }
    for (const Transition& t : transitions_)
        sections.push_back(state_name(t.from) + " -" +
                           letter_to_string(*this, t.letter) + "-> " +
                           state_name(t.to));
    std::ostringstream os;
    for (std::size_t i = 0; i < sections.size(); ++i) {
        if (i)
            os << (multiline ? "\n" : "; ");
        os << sections[i];
    }
    if (multiline)
        os << '\n';
    return os.str();
}

} // namespace tlkit
