#pragma once

#include "tlkit/formula.hpp"
#include "tlkit/timed_word.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tlkit {

// Bounded word universe for the equisatisfiability checks: every word of
// length <= max_len over the given propositions, first timestamp 0, later
// timestamps non-decreasing values from the grid.
struct EquisatUniverse {
    std::size_t max_len = 3;
    std::vector<Rational> grid{Rational(0), Rational(1, 2), Rational(1),
                               Rational(3, 2), Rational(2)};
};

struct EquisatReport {
    bool ok = true;
    std::size_t words_scanned = 0;
    std::size_t psi_models = 0;
    std::size_t phi_models = 0;
    // First failure, empty when ok. "direction" is backward (a psi-model
    // that is not an admissible behaviour or whose projection refutes phi)
    // or forward (a phi-model no enumerated extension of which models psi).
    std::string direction;
    std::string counterexample;
};

// Checks equisatisfiability modulo erasing projection: every psi-model in
// the universe over sigma+x must be a simple behaviour whose projection
// models phi, and every phi-model over sigma must have an extension in the
// universe modeling psi. psi is expected to constrain the extra
// propositions itself; admissibility failures count as counterexamples.
EquisatReport verify_simple_equisat(const Formula& phi, const Formula& psi,
                                    const PropSet& sigma, const PropSet& x,
                                    const EquisatUniverse& u = {});

// Same shape for the deleting projection: psi-models must have an action
// point first (so the projection is defined) and project to phi-models;
// phi-models must be recoverable as projections of psi-models.
EquisatReport verify_oversampled_equisat(const Formula& phi, const Formula& psi,
                                         const PropSet& sigma, const PropSet& x,
                                         const EquisatUniverse& u = {});

std::string report_to_string(const EquisatReport& r);

// Visits every universe word; stop by returning false from the callback.
void enumerate_words(const std::vector<std::string>& props,
                     const EquisatUniverse& u,
                     const std::function<bool(const TimedWord&)>& visit);

} // namespace tlkit
