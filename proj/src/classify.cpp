#include "tlkit/classify.hpp"

#include "tlkit/rewrite.hpp"

#include <set>
#include <sstream>

namespace tlkit {

std::string to_string(PnemtlAdjacency a) {
    switch (a) {
    case PnemtlAdjacency::Na: return "na";
    case PnemtlAdjacency::NaPlus: return "na_plus";
    case PnemtlAdjacency::NaMinus: return "na_minus";
    case PnemtlAdjacency::None_: return "none";
    case PnemtlAdjacency::NotPnemtl: return "not_pnemtl";
    }
    return "?";
}

namespace {

bool is_boolean_kind(Kind k) {
    return k == Kind::True_ || k == Kind::False_ || k == Kind::Atom ||
           k == Kind::Not || k == Kind::And || k == Kind::Or;
}

struct MtlScan {
    bool only_mtl_kinds = true;
    bool any_past = false;
    bool punctual_until = false;
    bool punctual_since = false;

    void walk(const Formula& f) {
        switch (f->kind) {
        case Kind::Until:
            if (f->ivl && f->ivl->is_punctual()) punctual_until = true;
            break;
        case Kind::Since:
            any_past = true;
            if (f->ivl && f->ivl->is_punctual()) punctual_since = true;
            break;
        case Kind::AlwaysPast:
            any_past = true;
            break;
        case Kind::Always:
            break;
        default:
            if (!is_boolean_kind(f->kind)) only_mtl_kinds = false;
            break;
        }
        for (const auto& k : f->kids) walk(k);
    }
};

struct TptlScan {
    bool ok = true;

    void walk(const Formula& f) {
        switch (f->kind) {
        case Kind::Until:
        case Kind::Since:
            // Freeze quantification replaces timing bounds on modalities.
            if (f->ivl) ok = false;
            break;
        case Kind::Always:
        case Kind::AlwaysPast:
        case Kind::Freeze:
        case Kind::TmX:
        case Kind::XmT:
            break;
        default:
            if (!is_boolean_kind(f->kind)) ok = false;
            break;
        }
        for (const auto& k : f->kids) walk(k);
    }
};

bool interval_open(const Interval& i) {
    bool lo_ok = i.lo_unbounded() || !i.lo_closed();
    bool hi_ok = i.hi_unbounded() || !i.hi_closed();
    return lo_ok && hi_ok;
}

bool interval_closed(const Interval& i) {
    bool lo_ok = i.lo_unbounded() || i.lo_closed();
    bool hi_ok = i.hi_unbounded() || i.hi_closed();
    return lo_ok && hi_ok;
}

// Constraints under an even number of negations must use open intervals,
// those under an odd number closed ones. Checked before negation normal
// form so every explicit negation contributes to the parity.
bool openness_ok(const Formula& f, bool odd) {
    switch (f->kind) {
    case Kind::TmX:
    case Kind::XmT:
        return odd ? interval_closed(*f->ivl) : interval_open(*f->ivl);
    case Kind::Not:
        return openness_ok(f->kids[0], !odd);
    default:
        for (const auto& k : f->kids)
            if (!openness_ok(k, odd)) return false;
        return true;
    }
}

bool has_automata_kind(const Formula& f) {
    switch (f->kind) {
    case Kind::Rat:
    case Kind::FRat:
    case Kind::PRat:
    case Kind::Fk:
    case Kind::Pk:
        return true;
    default:
        for (const auto& k : f->kids)
            if (has_automata_kind(k)) return true;
        return false;
    }
}

// x-T in [l,u] is T-x in [-u,-l]; adjacency reasons about T-x intervals, so
// the mirrored form is what enters the scope's interval set. Past windows
// land on the negative side this way, which is what makes the positive and
// negative relaxations directional.
Interval reflect_interval(const Interval& i) {
    std::optional<std::int64_t> lo =
        i.hi_unbounded() ? std::nullopt : std::optional<std::int64_t>(-i.hi());
    std::optional<std::int64_t> hi =
        i.lo_unbounded() ? std::nullopt : std::optional<std::int64_t>(-i.lo());
    return Interval(lo, i.hi_closed(), hi, i.lo_closed());
}

struct ScopeCollector {
    std::vector<FreezeScope> scopes;

    std::size_t open_scope(const std::string& var) {
        scopes.push_back(FreezeScope{var, {}});
        return scopes.size() - 1;
    }

    void walk(const Formula& f, std::size_t scope) {
        switch (f->kind) {
        case Kind::Freeze:
            walk(f->kids[0], open_scope(f->name));
            return;
        case Kind::TmX:
            scopes[scope].intervals.push_back(*f->ivl);
            return;
        case Kind::XmT:
            scopes[scope].intervals.push_back(reflect_interval(*f->ivl));
            return;
        default:
            for (const auto& k : f->kids) walk(k, scope);
            return;
        }
    }
};

std::vector<FreezeScope> collect_scopes(const Formula& f) {
    ScopeCollector c;
    c.open_scope("");
    c.walk(f, 0);
    return c.scopes;
}

bool scopes_nonadjacent(const std::vector<FreezeScope>& scopes, AdjacencyKind kind) {
    for (const auto& s : scopes)
        if (!set_nonadjacency(kind, s.intervals)) return false;
    return true;
}

struct PnemtlScan {
    bool is_pnemtl = true;
    bool f_sets_ok = true;
    bool p_sets_ok = true;

    void walk(const Formula& f) {
        switch (f->kind) {
        case Kind::Fk:
            if (!set_nonadjacency(AdjacencyKind::Plain, f->intervals)) f_sets_ok = false;
            walk_nested(f);
            return;
        case Kind::Pk:
            if (!set_nonadjacency(AdjacencyKind::Plain, f->intervals)) p_sets_ok = false;
            walk_nested(f);
            return;
        default:
            if (!is_boolean_kind(f->kind)) is_pnemtl = false;
            for (const auto& k : f->kids) walk(k);
            return;
        }
    }

    void walk_nested(const Formula& f) {
        // Alphabet members of the argument automata are themselves formulas
        // of the logic and contribute their own interval sets.
        if (f->automata.empty()) return;
        for (const auto& g : f->automata[0].sset()) walk(g);
    }
};

} // namespace

ClassifyReport classify(const Formula& f) {
    ClassifyReport r;
    Formula d = desugar(f);

    MtlScan mtl;
    mtl.walk(d);
    r.is_mtl = mtl.only_mtl_kinds;
    r.is_mitl = r.is_mtl && !mtl.punctual_until && !mtl.punctual_since;
    r.is_mtl_future_only = r.is_mtl && !mtl.any_past;
    r.is_pmtl = r.is_mtl && !(mtl.punctual_until && mtl.punctual_since);

    TptlScan tptl;
    tptl.walk(d);
    r.is_tptl = tptl.ok;
    std::set<std::string> vars = collect_freeze_vars(d);
    r.is_1tptl = r.is_tptl && vars.size() <= 1;
    r.is_open_tptl = r.is_1tptl && openness_ok(d, false);

    bool na_eligible = !has_automata_kind(d) && vars.size() <= 1;
    if (na_eligible) {
        Formula n = to_nnf(embed_timed_modalities(d));
        r.freeze_scopes = collect_scopes(n);
        r.is_na_1tptl = scopes_nonadjacent(r.freeze_scopes, AdjacencyKind::Plain);
        r.is_na_plus = scopes_nonadjacent(r.freeze_scopes, AdjacencyKind::Positive);
        r.is_na_minus = scopes_nonadjacent(r.freeze_scopes, AdjacencyKind::Negative);
        r.is_pa_1tptl = r.is_na_plus || r.is_na_minus;
    } else {
        r.freeze_scopes = collect_scopes(d);
    }

    PnemtlScan pn;
    pn.walk(d);
    if (!pn.is_pnemtl) {
        r.pnemtl_adjacency = PnemtlAdjacency::NotPnemtl;
    } else if (pn.f_sets_ok && pn.p_sets_ok) {
        r.pnemtl_adjacency = PnemtlAdjacency::Na;
    } else if (pn.f_sets_ok) {
        r.pnemtl_adjacency = PnemtlAdjacency::NaPlus;
    } else if (pn.p_sets_ok) {
        r.pnemtl_adjacency = PnemtlAdjacency::NaMinus;
    } else {
        r.pnemtl_adjacency = PnemtlAdjacency::None_;
    }

    return r;
}

std::string report_to_string(const ClassifyReport& r) {
    std::ostringstream out;
    auto flag = [&](const char* name, bool v) {
        out << name << ": " << (v ? "true" : "false") << "\n";
    };
    flag("mtl", r.is_mtl);
    flag("mitl", r.is_mitl);
    flag("mtl_future_only", r.is_mtl_future_only);
    flag("pmtl", r.is_pmtl);
    flag("tptl", r.is_tptl);
    flag("1tptl", r.is_1tptl);
    flag("open_tptl", r.is_open_tptl);
    flag("na_1tptl", r.is_na_1tptl);
    flag("na_plus", r.is_na_plus);
    flag("na_minus", r.is_na_minus);
    flag("pa_1tptl", r.is_pa_1tptl);
    out << "pnemtl_adjacency: " << to_string(r.pnemtl_adjacency) << "\n";
    for (const auto& s : r.freeze_scopes) {
        out << "scope " << (s.var.empty() ? "<root>" : s.var) << ":";
        if (s.intervals.empty()) out << " (no constraints)";
        for (const auto& i : s.intervals) out << " " << i.to_string();
        out << "\n";
    }
    return out.str();
}

} // namespace tlkit
