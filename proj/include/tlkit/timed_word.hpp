#pragma once

#include "tlkit/rational.hpp"

#include <set>
#include <string>
#include <vector>

namespace tlkit {

using PropSet = std::set<std::string>;

struct TimedEvent {
    PropSet props;  // never empty
    Rational tau;

    bool operator==(const TimedEvent& o) const = default;
};

// A finite timed word: length >= 1, first timestamp 0, timestamps
// non-decreasing, every event carries at least one proposition. Positions are
// 1-based to match the convention used throughout the semantics.
class TimedWord {
public:
    explicit TimedWord(std::vector<TimedEvent> events);

    std::size_t size() const { return events_.size(); }
    const TimedEvent& at(std::size_t pos) const;  // pos in 1..size()
    const PropSet& props(std::size_t pos) const { return at(pos).props; }
    const Rational& tau(std::size_t pos) const { return at(pos).tau; }
    const std::vector<TimedEvent>& events() const { return events_; }

    bool operator==(const TimedWord& o) const = default;

    std::string to_string() const;

private:
    std::vector<TimedEvent> events_;
};

struct PointedWord {
    const TimedWord* word;
    std::size_t pos;  // 1-based, 1 <= pos <= word->size()
};

// One event per line, "<tau> : <prop> <prop> ...". Timestamps are decimals or
// "n/d" rationals. Blank lines and lines starting with '#' are skipped.
TimedWord parse_timed_word(const std::string& text);

// The word is a simple behaviour over (props \ X) when every event still has
// a proposition left after erasing X. Erases X from every event; same length
// and timestamps. Rejects words where some event's props are entirely in X.
TimedWord project_simple(const TimedWord& w, const PropSet& x);

// Oversampled variant: events whose props lie entirely in X are oversampling
// points and get deleted; X is erased from the survivors. The first event
// must survive (it anchors tau = 0). Rejects otherwise.
TimedWord project_oversampled(const TimedWord& w, const PropSet& x);

std::string props_to_string(const PropSet& ps);

} // namespace tlkit
