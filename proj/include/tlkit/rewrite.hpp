#pragma once

#include "tlkit/formula.hpp"
#include "tlkit/timed_word.hpp"

#include <utility>
#include <vector>

namespace tlkit {

// Rewrites every sugar kind into the core connectives (strict U/S, untimed
// box operators, booleans, freeze, constraints, automata modalities).
// Formula-set members inside automata are left as-is: they name alphabet
// positions, and rewriting them would change letter identity.
Formula desugar(const Formula& f);

// Negation normal form per the freeze-logic grammar: negation survives only
// directly above atoms; negated constraints split into complement-interval
// constraints; negated U/S unfold through the untimed box operators. Input
// must be desugared and free of timed modalities and automata modalities
// (embed timed operators with embed_timed_modalities first).
Formula to_nnf(const Formula& f);

// Replaces each timed U_I / S_I by a freeze quantifier over a fresh variable
// with the matching clock constraint on the right operand. One fresh variable
// name is reused everywhere; inner bindings shadow outer ones, which is
// exactly the standard one-variable embedding.
Formula embed_timed_modalities(const Formula& f);

struct FlattenResult {
    Formula main;
    // (witness name, defining formula), listed so each definition uses only
    // witnesses defined earlier in the list
    std::vector<std::pair<std::string, Formula>> definitions;
    PropSet witnesses;
    Formula assembled;  // main AND witness definitions AND Gns(act)
};

// Replaces every modality nested strictly inside another modality by a fresh
// witness proposition, emitting one definition Gns(w <-> body) per distinct
// replaced subformula. Witness names are assigned outermost-first in visit
// order. The sigma set supplies the "some action point" disjunction.
FlattenResult flatten(const Formula& f, const PropSet& sigma);

// The action-point relativization: modal operands are guarded so that
// evaluation only inspects points where some sigma proposition holds.
// Accepts the post-desugar fragment plus the timed/untimed box and diamond
// sugar; rejects freeze, next/previous and automata modalities.
Formula relativize(const PropSet& sigma, const Formula& f);

} // namespace tlkit
