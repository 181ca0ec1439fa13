#include "tlkit/equisat.hpp"

#include "tlkit/evaluator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tlkit {

namespace {

// Non-decreasing timestamp rows over the grid, first entry pinned to 0.
std::vector<std::vector<Rational>> timestamp_rows(const std::vector<Rational>& grid,
                                                  std::size_t len) {
    std::vector<std::vector<Rational>> rows{{Rational(0)}};
    for (std::size_t p = 1; p < len; ++p) {
        std::vector<std::vector<Rational>> next;
        for (const auto& row : rows)
            for (const auto& t : grid)
                if (t >= row.back()) {
                    auto r = row;
                    r.push_back(t);
                    next.push_back(std::move(r));
                }
        rows = std::move(next);
    }
    return rows;
}

PropSet props_of_mask(const std::vector<std::string>& props, std::size_t mask) {
    PropSet out;
    for (std::size_t i = 0; i < props.size(); ++i)
        if (mask & (std::size_t(1) << i)) out.insert(props[i]);
    return out;
}

bool has_action_prop(const PropSet& ps, const PropSet& sigma) {
    for (const auto& p : ps)
        if (sigma.count(p)) return true;
    return false;
}

std::string block(const TimedWord& w) {
    return w.to_string();
}

enum class Mode { Simple, Oversampled };

EquisatReport run_harness(Mode mode, const Formula& phi, const Formula& psi,
                          const PropSet& sigma, const PropSet& x,
                          const EquisatUniverse& u) {
    for (const auto& p : x)
        if (sigma.count(p))
            throw Error("equisat check: sigma and x must be disjoint");

    std::vector<std::string> all_props(sigma.begin(), sigma.end());
    all_props.insert(all_props.end(), x.begin(), x.end());
    std::sort(all_props.begin(), all_props.end());
    std::vector<std::string> sigma_props(sigma.begin(), sigma.end());

    EquisatReport rep;
    // Projections of all psi-models, keyed by their text form, so the
    // forward direction is a lookup rather than a second scan.
    std::set<std::string> projected_models;

    enumerate_words(all_props, u, [&](const TimedWord& w) {
        ++rep.words_scanned;
        Evaluator ev(w);
        if (!ev.satisfies(psi)) return true;
        ++rep.psi_models;

        bool admissible = true;
        for (std::size_t p = 1; p <= w.size(); ++p) {
            bool act = has_action_prop(w.props(p), sigma);
            if (mode == Mode::Simple && !act) admissible = false;
            if (mode == Mode::Oversampled && p == 1 && !act) admissible = false;
        }
        if (!admissible) {
            rep.ok = false;
            rep.direction = "backward";
            rep.counterexample =
                "psi-model is not an admissible behaviour:\n" + block(w);
            return false;
        }

        TimedWord proj = mode == Mode::Simple ? project_simple(w, x)
                                              : project_oversampled(w, x);
        if (!satisfies(proj, phi)) {
            rep.ok = false;
            rep.direction = "backward";
            rep.counterexample = "psi-model:\n" + block(w) +
                                 "projects to a word refuting phi:\n" +
                                 block(proj);
            return false;
        }
        projected_models.insert(block(proj));
        return true;
    });
    if (!rep.ok) return rep;

    enumerate_words(sigma_props, u, [&](const TimedWord& w) {
        if (!satisfies(w, phi)) return true;
        ++rep.phi_models;
        if (!projected_models.count(block(w))) {
            rep.ok = false;
            rep.direction = "forward";
            rep.counterexample =
                "phi-model with no enumerated extension modeling psi:\n" +
                block(w);
            return false;
        }
        return true;
    });
    return rep;
}

} // namespace

void enumerate_words(const std::vector<std::string>& props,
                     const EquisatUniverse& u,
                     const std::function<bool(const TimedWord&)>& visit) {
    if (props.size() >= 16)
        throw Error("equisat universe: too many propositions to enumerate");
    const std::size_t letters = (std::size_t(1) << props.size()) - 1;
    for (std::size_t len = 1; len <= u.max_len; ++len) {
        auto rows = timestamp_rows(u.grid, len);
        for (const auto& row : rows) {
            std::vector<std::size_t> mask(len, 1);
            for (;;) {
                std::vector<TimedEvent> evs;
                for (std::size_t p = 0; p < len; ++p)
                    evs.push_back({props_of_mask(props, mask[p]), row[p]});
                if (!visit(TimedWord(std::move(evs)))) return;
                std::size_t p = 0;
                for (; p < len; ++p) {
                    if (++mask[p] <= letters) break;
                    mask[p] = 1;
                }
                if (p == len) break;
            }
        }
    }
}

EquisatReport verify_simple_equisat(const Formula& phi, const Formula& psi,
                                    const PropSet& sigma, const PropSet& x,
                                    const EquisatUniverse& u) {
    return run_harness(Mode::Simple, phi, psi, sigma, x, u);
}

EquisatReport verify_oversampled_equisat(const Formula& phi, const Formula& psi,
                                         const PropSet& sigma, const PropSet& x,
                                         const EquisatUniverse& u) {
    return run_harness(Mode::Oversampled, phi, psi, sigma, x, u);
}

std::string report_to_string(const EquisatReport& r) {
    std::ostringstream os;
    os << "ok: " << (r.ok ? "true" : "false") << "\n";
    os << "words_scanned: " << r.words_scanned << "\n";
    os << "psi_models: " << r.psi_models << "\n";
    os << "phi_models: " << r.phi_models << "\n";
    if (!r.ok) {
        os << "direction: " << r.direction << "\n";
        os << "counterexample:\n" << r.counterexample;
        if (!r.counterexample.empty() && r.counterexample.back() != '\n')
            os << "\n";
    }
    return os.str();
}

} // namespace tlkit
