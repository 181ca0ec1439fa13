#pragma once

#include "tlkit/formula.hpp"

#include <string>
#include <vector>

namespace tlkit {

enum class PnemtlAdjacency { Na, NaPlus, NaMinus, None_, NotPnemtl };

std::string to_string(PnemtlAdjacency a);

struct FreezeScope {
    std::string var;  // empty for the root scope outside any freeze
    std::vector<Interval> intervals;
};

struct ClassifyReport {
    bool is_mtl = false;
    bool is_mitl = false;
    bool is_mtl_future_only = false;
    bool is_pmtl = false;
    bool is_tptl = false;
    bool is_1tptl = false;
    bool is_open_tptl = false;
    bool is_na_1tptl = false;
    bool is_na_plus = false;
    bool is_na_minus = false;
    bool is_pa_1tptl = false;
    PnemtlAdjacency pnemtl_adjacency = PnemtlAdjacency::NotPnemtl;
    std::vector<FreezeScope> freeze_scopes;
};

// Fragment membership report. The formula is desugared first so hidden
// negations and derived modalities count. Openness tracks negation parity on
// the desugared formula; the non-adjacency flags are computed after embedding
// timed U/S as freeze quantifiers and normalizing negations, grouping
// constraint intervals by their innermost enclosing freeze quantifier.
ClassifyReport classify(const Formula& f);

std::string report_to_string(const ClassifyReport& r);

} // namespace tlkit
