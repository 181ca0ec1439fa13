#pragma once

#include "tlkit/formula.hpp"

#include <string>
#include <vector>

namespace tlkit {

struct ReductionReport {
    Formula input;
    Formula output;
    std::size_t plans = 0;
    std::size_t disjuncts_before_pruning = 0;
    std::size_t disjuncts_emitted = 0;
    std::vector<std::string> witness_states;
    std::size_t output_nodes = 0;
};

struct FkToRatOptions {
    // The construction is stated for closed intervals. Open and half-open
    // ones go through the same window machinery and are validated by the
    // equivalence fuzzing, but stay behind this switch rather than being
    // accepted silently.
    bool allow_nonclosed = false;
};

// Rewrites one Fk node into a disjunction of conjunctions of Rat nodes over
// the same formula set. Requires the interval list sorted so that
// sup(I_j) <= inf(I_{j+1}); rejects anything else with a diagnostic. The
// output is equivalent under the epsilon-acceptance empty-window policy.
ReductionReport fk_to_rat(const Formula& f, FkToRatOptions opts = {});

// Rewrites one Rat node into a boolean combination of Fk nodes (arity at
// most 4) over the same formula set, splitting on the exact truth set of the
// first position inside the window. Equivalent under the epsilon-acceptance
// empty-window policy.
ReductionReport rat_to_fk(const Formula& f);

// phi1 U_I phi2 as an FRat over S = {phi1, phi2}: any run of letters
// containing phi1 followed by one letter containing phi2.
Formula until_via_frat(const Formula& f);

// AST size, not counting the insides of automaton alphabets.
std::size_t formula_node_count(const Formula& f);

std::string report_to_string(const ReductionReport& r);

} // namespace tlkit
