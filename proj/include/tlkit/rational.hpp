#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tlkit {

// All time arithmetic is exact. Timestamps, interval bounds shifted by an
// anchor time, and encoder placements are mpq_class values, so comparisons
// never suffer rounding.
using Rational = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts "7", "-3", "3/4", "-9/2" and decimal literals like "0.95" or "1.".
// Decimals are converted exactly (0.95 -> 19/20).
Rational parse_rational(const std::string& text);

// Canonical form: integer if the denominator is 1, otherwise "n/d".
std::string rational_to_string(const Rational& q);

std::size_t hash_rational(const Rational& q);

} // namespace tlkit
