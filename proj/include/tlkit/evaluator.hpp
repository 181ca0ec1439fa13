#pragma once

#include "tlkit/formula.hpp"
#include "tlkit/timed_word.hpp"

#include <map>
#include <unordered_map>
#include <vector>

namespace tlkit {

// Truth of an automata modality whose time window captures no positions is
// delegated to empty-word acceptance by default; AlwaysFalse is the
// alternative reading kept around so tests can probe the difference.
enum class EmptyWindowPolicy { EpsilonAcceptance, AlwaysFalse };

struct EvalOptions {
    EmptyWindowPolicy empty_window = EmptyWindowPolicy::EpsilonAcceptance;
};

// Assignment of timestamps to freeze variables.
using Valuation = std::map<std::string, Rational>;

// Pointwise satisfaction over one fixed word. Results are memoized per
// (subformula, position, valuation restricted to the subformula's free
// variables), so repeated queries against the same Evaluator are cheap.
class Evaluator {
public:
    explicit Evaluator(const TimedWord& w, EvalOptions opts = {});

    bool eval(const Formula& f, std::size_t pos, const Valuation& nu);
    bool eval(const Formula& f, std::size_t pos);

    // Word-level satisfaction: position 1 with every variable frozen to 0.
    bool satisfies(const Formula& f);

    // Exact-truth segment words over the formula set s. seg_plus covers
    // positions x..y ascending (empty when x > y), seg_minus covers x..y
    // descending (empty when x < y). tseg restricts to the positions
    // strictly after i whose timestamp lies in I + tau_i.
    std::vector<Letter> seg_plus(const std::vector<Formula>& s, std::size_t x, std::size_t y);
    std::vector<Letter> seg_minus(const std::vector<Formula>& s, std::size_t x, std::size_t y);
    std::vector<Letter> tseg(const std::vector<Formula>& s, std::size_t i, const Interval& ivl);

    const TimedWord& word() const { return *word_; }
    const EvalOptions& options() const { return opts_; }

private:
    struct Key {
        const FormulaNode* node;
        std::size_t pos;
        std::vector<std::pair<std::string, Rational>> nu;
        bool operator==(const Key& o) const {
            return node == o.node && pos == o.pos && nu == o.nu;
        }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };

    bool eval_raw(const Formula& f, std::size_t pos, const Valuation& nu);
    Letter letter_at(const std::vector<Formula>& s, std::size_t pos);
    bool eval_fk(const Formula& f, std::size_t pos);
    bool eval_pk(const Formula& f, std::size_t pos);
    const std::vector<std::string>& free_vars(const Formula& f);

    const TimedWord* word_;
    EvalOptions opts_;
    std::unordered_map<Key, bool, KeyHash> memo_;
    std::unordered_map<const FormulaNode*, std::vector<std::string>> free_cache_;
};

// One-shot conveniences. evaluate binds free variables to 0.
bool evaluate(const TimedWord& w, const Formula& f, std::size_t pos, EvalOptions opts = {});
bool satisfies(const TimedWord& w, const Formula& f, EvalOptions opts = {});

std::vector<Letter> seg_plus(const TimedWord& w, std::size_t x, std::size_t y,
                             const std::vector<Formula>& s, EvalOptions opts = {});
std::vector<Letter> seg_minus(const TimedWord& w, std::size_t x, std::size_t y,
                              const std::vector<Formula>& s, EvalOptions opts = {});
std::vector<Letter> tseg(const TimedWord& w, std::size_t i, const Interval& ivl,
                         const std::vector<Formula>& s, EvalOptions opts = {});

// Renders a segment as P[{...}] blocks, one per letter; "(empty)" for the
// empty segment.
std::string segment_to_string(const std::vector<Formula>& s, const std::vector<Letter>& seg);

} // namespace tlkit
