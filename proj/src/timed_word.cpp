#include "tlkit/timed_word.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tlkit {

TimedWord::TimedWord(std::vector<TimedEvent> events)
    : events_(std::move(events)) {
    if (events_.empty())
        throw Error("timed word must have at least one event");
    if (events_.front().tau != 0)
        throw Error("first timestamp must be 0, got " +
                    rational_to_string(events_.front().tau));
    for (std::size_t i = 0; i < events_.size(); ++i) {
        if (events_[i].props.empty())
            throw Error("event " + std::to_string(i + 1) +
                        " has an empty proposition set");
        if (i > 0 && events_[i].tau < events_[i - 1].tau)
            throw Error("timestamps decrease at event " + std::to_string(i + 1));
    }
}

const TimedEvent& TimedWord::at(std::size_t pos) const {
    if (pos < 1 || pos > events_.size())
        throw Error("position " + std::to_string(pos) + " outside 1.." +
                    std::to_string(events_.size()));
    return events_[pos - 1];
}

std::string props_to_string(const PropSet& ps) {
    std::string out;
    for (const auto& p : ps) {
        if (!out.empty())
            out += ' ';
        out += p;
    }
    return out;
}

std::string TimedWord::to_string() const {
    std::ostringstream os;
    for (const auto& e : events_)
        os << rational_to_string(e.tau) << " : " << props_to_string(e.props)
           << '\n';
    return os.str();
}

TimedWord parse_timed_word(const std::string& text) {
    std::vector<TimedEvent> events;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#')
            continue;
        std::size_t colon = line.find(':', start);
        if (colon == std::string::npos)
            throw Error("line " + std::to_string(lineno) +
                        ": expected '<tau> : <props>'");
        std::string tau_text = line.substr(start, colon - start);
        while (!tau_text.empty() && std::isspace((unsigned char)tau_text.back()))
            tau_text.pop_back();
        TimedEvent e;
        try {
            e.tau = parse_rational(tau_text);
        } catch (const std::exception& ex) {
            throw Error("line " + std::to_string(lineno) + ": " + ex.what());
        }
        std::istringstream props(line.substr(colon + 1));
        std::string p;
        while (props >> p) {
            if (p[0] == '#')
                break;
            e.props.insert(p);
        }
        if (e.props.empty())
            throw Error("line " + std::to_string(lineno) +
                        ": event has no propositions");
        events.push_back(std::move(e));
    }
    return TimedWord(std::move(events));
}

namespace {

PropSet erase_props(const PropSet& ps, const PropSet& x) {
    PropSet out;
    std::set_difference(ps.begin(), ps.end(), x.begin(), x.end(),
                        std::inserter(out, out.end()));
    return out;
}

} // namespace

TimedWord project_simple(const TimedWord& w, const PropSet& x) {
    std::vector<TimedEvent> events;
    events.reserve(w.size());
    for (std::size_t i = 1; i <= w.size(); ++i) {
        PropSet kept = erase_props(w.props(i), x);
        if (kept.empty())
            throw Error("not a simple behaviour: event " + std::to_string(i) +
                        " has only projected-away propositions");
        events.push_back({std::move(kept), w.tau(i)});
    }
    return TimedWord(std::move(events));
}

TimedWord project_oversampled(const TimedWord& w, const PropSet& x) {
    PropSet first_kept = erase_props(w.props(1), x);
    if (first_kept.empty())
        throw Error("not an oversampled behaviour: first event has only "
                    "projected-away propositions");
    std::vector<TimedEvent> events;
    for (std::size_t i = 1; i <= w.size(); ++i) {
        PropSet kept = erase_props(w.props(i), x);
        if (kept.empty())
            continue;  // oversampling point, dropped
        events.push_back({std::move(kept), w.tau(i)});
    }
    return TimedWord(std::move(events));
}

} // namespace tlkit
