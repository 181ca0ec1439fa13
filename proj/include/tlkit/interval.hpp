#pragma once

#include "tlkit/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tlkit {

// Time intervals with integer or infinite endpoints and open/closed
// boundaries. Invalid shapes are rejected at construction: reversed bounds,
// punctual intervals that are not both-closed (e.g. [0,0), which is empty),
// and closed infinite endpoints.
class Interval {
public:
    // lo == nullopt means -infinity, hi == nullopt means +infinity.
    Interval(std::optional<std::int64_t> lo, bool lo_closed,
             std::optional<std::int64_t> hi, bool hi_closed);

    static Interval closed(std::int64_t lo, std::int64_t hi);
    static Interval open(std::int64_t lo, std::int64_t hi);
    static Interval left_closed(std::int64_t lo, std::int64_t hi);   // [lo,hi)
    static Interval right_closed(std::int64_t lo, std::int64_t hi);  // (lo,hi]
    static Interval at_least(std::int64_t lo);                       // [lo,inf)
    static Interval greater_than(std::int64_t lo);                   // (lo,inf)
    static Interval punctual(std::int64_t v);                        // [v,v]

    bool lo_unbounded() const { return !lo_.has_value(); }
    bool hi_unbounded() const { return !hi_.has_value(); }
    std::int64_t lo() const;  // throws if unbounded
    std::int64_t hi() const;  // throws if unbounded
    bool lo_closed() const { return lo_closed_; }
    bool hi_closed() const { return hi_closed_; }

    bool is_punctual() const;
    bool is_nonnegative() const;  // lo >= 0 (and bounded below)
    bool contains(const Rational& v) const;
    bool contains_zero() const { return contains(Rational(0)); }

    bool operator==(const Interval& o) const = default;

    std::string to_string() const;

private:
    std::optional<std::int64_t> lo_, hi_;
    bool lo_closed_, hi_closed_;
};

Interval parse_interval(const std::string& text);

// Pairwise adjacency, following the two-implication shape: the pair (I, I2)
// is non-adjacent iff sup(I)=inf(I2) forces that shared value to be 0, and
// inf(I)=sup(I2) forces that shared value to be 0. Infinite endpoints compare
// unequal to everything, so they never trigger either implication. The
// positive variant relaxes "= 0" to "<= 0" (boundary contact on the negative
// side is tolerated), the negative variant to ">= 0".
bool is_adjacent(const Interval& a, const Interval& b);
bool is_positively_nonadjacent(const Interval& a, const Interval& b);
bool is_negatively_nonadjacent(const Interval& a, const Interval& b);

enum class AdjacencyKind { Plain, Positive, Negative };

// True iff every ordered pair from the set, including each interval paired
// with itself, passes the pairwise predicate. Empty sets pass vacuously.
bool set_nonadjacency(AdjacencyKind kind, const std::vector<Interval>& is);

std::size_t hash_interval(const Interval& i);

// Deterministic total order for canonical printing: by lower bound, then
// closure flags, then upper bound. Returns <0, 0, >0.
int interval_cmp(const Interval& a, const Interval& b);

} // namespace tlkit
