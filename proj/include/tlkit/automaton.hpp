#pragma once

#include "tlkit/formula_fwd.hpp"
#include "tlkit/rational.hpp"

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace tlkit {

// A letter is an exact-truth valuation of the declared formula set S: bit i
// is set iff formula S[i] holds at the point. With S sorted canonically the
// bitmask form is itself canonical.
using Letter = std::uint64_t;

struct Transition {
    std::size_t from;
    Letter letter;
    std::size_t to;

    auto operator<=>(const Transition&) const = default;
};

// Plain NFA over 2^S letters: single initial state, no epsilon transitions.
// Epsilon edges appear only transiently inside the regex compiler and the
// language operations below, never in a constructed value.
class SymbolicNfa {
public:
    SymbolicNfa(std::vector<Formula> s, std::size_t num_states,
                std::size_t init, std::vector<std::size_t> finals,
                std::vector<Transition> transitions,
                std::vector<std::string> state_names = {});

    const std::vector<Formula>& sset() const { return s_; }
    std::size_t num_states() const { return num_states_; }
    std::size_t init() const { return init_; }
    const std::vector<std::size_t>& finals() const { return finals_; }
    bool is_final(std::size_t q) const;
    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::vector<std::string>& state_names() const { return state_names_; }
    const std::string& state_name(std::size_t q) const;

    std::string to_string(bool multiline = true) const;

private:
    std::vector<Formula> s_;
    std::size_t num_states_;
    std::size_t init_;
    std::vector<std::size_t> finals_;
    std::vector<Transition> transitions_;
    std::vector<std::string> state_names_;
};

// Sorts by the structural formula order and removes duplicates.
std::vector<Formula> canonical_sset(std::vector<Formula> s);
bool same_sset(const std::vector<Formula>& a, const std::vector<Formula>& b);

bool nfa_equal(const SymbolicNfa& a, const SymbolicNfa& b);
std::size_t nfa_hash(const SymbolicNfa& a);

bool accepts(const SymbolicNfa& a, const std::vector<Letter>& word);
bool accepts_empty(const SymbolicNfa& a);

// Same transition relation, different initial state and/or accepting set.
SymbolicNfa with_init_finals(const SymbolicNfa& a, std::size_t init,
                             std::vector<std::size_t> finals);

SymbolicNfa nfa_concat(const SymbolicNfa& a, const SymbolicNfa& b);
SymbolicNfa nfa_union(const SymbolicNfa& a, const SymbolicNfa& b);
SymbolicNfa nfa_star(const SymbolicNfa& a);

// L = {w : c.w in L(a)} and {w : w.c in L(a)}.
SymbolicNfa left_quotient(const SymbolicNfa& a, Letter c);
SymbolicNfa right_quotient(const SymbolicNfa& a, Letter c);

// L(a) minus the empty word.
SymbolicNfa nonempty_part(const SymbolicNfa& a);

SymbolicNfa empty_language(std::vector<Formula> s);
SymbolicNfa epsilon_only(std::vector<Formula> s);
SymbolicNfa letter_nfa(std::vector<Formula> s, Letter c);
SymbolicNfa universal(std::vector<Formula> s);         // all words incl. epsilon
SymbolicNfa single_any_letter(std::vector<Formula> s); // exactly-one-letter words

// Drops states not reachable from init. State order is preserved, so output
// is deterministic for deterministic input.
SymbolicNfa prune_unreachable(const SymbolicNfa& a);
bool language_empty(const SymbolicNfa& a);

// All 2^n letter masks; refuses n > 20 since callers enumerate the result.
std::vector<Letter> all_letters(std::size_t n);

// Every accepted word of length <= maxlen, for brute-force comparisons.
std::set<std::vector<Letter>> language_upto(const SymbolicNfa& a,
                                            std::size_t maxlen);

} // namespace tlkit
