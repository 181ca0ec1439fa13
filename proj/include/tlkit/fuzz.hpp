#pragma once

#include "tlkit/formula.hpp"
#include "tlkit/timed_word.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tlkit {

// Splittable PRNG (splitmix64). Streams derived with split() stay stable
// across platforms, so any reported case replays from its seed.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    std::uint64_t below(std::uint64_t bound);  // uniform-ish in [0, bound)
    bool coin() { return next() & 1u; }
    SplitMix64 split() { return SplitMix64(next() ^ 0x5851f42d4c957f2dull); }
};

std::vector<Rational> default_grid();  // 0, 1/2, ..., 4

TimedWord random_word(SplitMix64& rng, const std::vector<std::string>& props,
                      std::size_t max_len, const std::vector<Rational>& grid = default_grid());
Interval random_nat_interval(SplitMix64& rng, std::int64_t max_endpoint);
std::vector<Interval> random_sorted_closed_intervals(SplitMix64& rng, std::size_t k,
                                                     std::int64_t max_endpoint);
SymbolicNfa random_nfa(SplitMix64& rng, std::vector<Formula> sset, std::size_t max_states);
// Untimed modalities plus frozen-clock constraints; safe input for to_nnf.
Formula random_constraint_formula(SplitMix64& rng, const std::vector<std::string>& props,
                                  std::size_t depth);
// Timed modalities including the derived ones; exercises desugar.
Formula random_metric_formula(SplitMix64& rng, const std::vector<std::string>& props,
                              std::size_t depth);

struct FuzzOptions {
    std::uint64_t seed = 1;
    std::size_t cases = 300;
    std::size_t max_states = 3;
    std::size_t words_per_case = 3;
    std::size_t max_word_len = 6;
    bool allow_nonclosed = false;  // exercise the gated window generalization
};

struct FuzzReport {
    bool ok = true;
    std::size_t cases = 0;
    std::string counterexample;
};

// Each harness compares the translation against the original on every
// position of freshly generated words and stops at the first disagreement.
FuzzReport fuzz_fk_to_rat(const FuzzOptions& o);
FuzzReport fuzz_rat_to_fk(const FuzzOptions& o);
FuzzReport fuzz_fk_round_trip(const FuzzOptions& o);
FuzzReport fuzz_until_via_frat(const FuzzOptions& o);
FuzzReport fuzz_rewrites(const FuzzOptions& o);

std::string fuzz_report_to_string(const FuzzReport& r);

} // namespace tlkit
