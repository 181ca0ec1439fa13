#include "tlkit/interval.hpp"

#include <cctype>
#include <functional>
#include <sstream>
#include <tuple>

namespace tlkit {

Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw Error("empty rational literal");
    std::size_t slash = text.find('/');
    if (slash != std::string::npos) {
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den == 0)
            throw Error("zero denominator in '" + text + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    std::size_t dot = text.find('.');
    if (dot == std::string::npos) {
        return Rational(mpz_class(text));
    }
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole == "-" || whole.empty())
        whole = "0";
    if (frac.empty())
        frac = "0";
    mpz_class w(whole);
    mpz_class f(frac);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    mpz_class num = abs(w) * scale + f;
    if (neg || w < 0)
        num = -num;
    Rational q(num, scale);
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::size_t hash_rational(const Rational& q) {
    std::hash<std::string> h;
    return h(q.get_str());
}

Interval::Interval(std::optional<std::int64_t> lo, bool lo_closed,
                   std::optional<std::int64_t> hi, bool hi_closed)
    : lo_(lo), hi_(hi), lo_closed_(lo_closed), hi_closed_(hi_closed) {
    if (!lo_ && lo_closed_)
        throw Error("interval unbounded below must be open at -inf");
    if (!hi_ && hi_closed_)
        throw Error("interval unbounded above must be open at +inf");
    if (lo_ && hi_) {
        if (*lo_ > *hi_)
            throw Error("reversed interval bounds: " + to_string());
        if (*lo_ == *hi_ && !(lo_closed_ && hi_closed_))
            throw Error("empty interval: " + to_string());
    }
}

Interval Interval::closed(std::int64_t lo, std::int64_t hi) {
    return Interval(lo, true, hi, true);
}
Interval Interval::open(std::int64_t lo, std::int64_t hi) {
    return Interval(lo, false, hi, false);
}
Interval Interval::left_closed(std::int64_t lo, std::int64_t hi) {
    return Interval(lo, true, hi, false);
}
Interval Interval::right_closed(std::int64_t lo, std::int64_t hi) {
    return Interval(lo, false, hi, true);
}
Interval Interval::at_least(std::int64_t lo) {
    return Interval(lo, true, std::nullopt, false);
}
Interval Interval::greater_than(std::int64_t lo) {
    return Interval(lo, false, std::nullopt, false);
}
Interval Interval::punctual(std::int64_t v) {
    return Interval(v, true, v, true);
}

std::int64_t Interval::lo() const {
    if (!lo_)
        throw Error("interval has no finite lower bound");
    return *lo_;
}

std::int64_t Interval::hi() const {
    if (!hi_)
        throw Error("interval has no finite upper bound");
    return *hi_;
}

bool Interval::is_punctual() const {
    return lo_ && hi_ && *lo_ == *hi_;
}

bool Interval::is_nonnegative() const {
    return lo_ && *lo_ >= 0;
}

bool Interval::contains(const Rational& v) const {
    if (lo_) {
        int c = cmp(v, Rational(*lo_));
        if (c < 0 || (c == 0 && !lo_closed_))
            return false;
    }
    if (hi_) {
        int c = cmp(v, Rational(*hi_));
        if (c > 0 || (c == 0 && !hi_closed_))
            return false;
    }
    return true;
}

std::string Interval::to_string() const {
    std::ostringstream os;
    os << (lo_closed_ ? '[' : '(');
    if (lo_)
        os << *lo_;
    else
        os << "-inf";
    os << ',';
    if (hi_)
        os << *hi_;
    else
        os << "inf";
    os << (hi_closed_ ? ']' : ')');
    return os.str();
}

Interval parse_interval(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    if (s.size() < 3)
        throw Error("malformed interval '" + text + "'");
    bool lo_closed, hi_closed;
    if (s.front() == '[')
        lo_closed = true;
    else if (s.front() == '(')
        lo_closed = false;
    else
        throw Error("interval must start with '[' or '(': '" + text + "'");
    if (s.back() == ']')
        hi_closed = true;
    else if (s.back() == ')')
        hi_closed = false;
    else
        throw Error("interval must end with ']' or ')': '" + text + "'");
    std::string body = s.substr(1, s.size() - 2);
    std::size_t comma = body.find(',');
    if (comma == std::string::npos)
        throw Error("interval needs two comma-separated bounds: '" + text + "'");
    auto parse_bound = [&](const std::string& b,
                           bool low) -> std::optional<std::int64_t> {
        if (b == "inf" || b == "+inf") {
            if (low)
                throw Error("lower bound cannot be +inf: '" + text + "'");
            return std::nullopt;
        }
        if (b == "-inf") {
            if (!low)
                throw Error("upper bound cannot be -inf: '" + text + "'");
            return std::nullopt;
        }
        try {
            std::size_t used = 0;
            long long v = std::stoll(b, &used);
            if (used != b.size())
                throw Error("trailing junk");
            return v;
        } catch (const std::exception&) {
            throw Error("bad interval bound '" + b + "' in '" + text + "'");
        }
    };
    auto lo = parse_bound(body.substr(0, comma), true);
    auto hi = parse_bound(body.substr(comma + 1), false);
    return Interval(lo, lo_closed, hi, hi_closed);
}

namespace {

// Adjacency only ever compares finite endpoints; a pair where either side is
// infinite cannot share a value.
bool endpoints_equal(const std::optional<std::int64_t>& a,
                     const std::optional<std::int64_t>& b) {
    return a && b && *a == *b;
}

std::optional<std::int64_t> sup_of(const Interval& i) {
    return i.hi_unbounded() ? std::nullopt
                            : std::optional<std::int64_t>(i.hi());
}
std::optional<std::int64_t> inf_of(const Interval& i) {
    return i.lo_unbounded() ? std::nullopt
                            : std::optional<std::int64_t>(i.lo());
}

enum class ZeroTest { Equal, AtMost, AtLeast };

bool passes(std::int64_t v, ZeroTest t) {
    switch (t) {
    case ZeroTest::Equal: return v == 0;
    case ZeroTest::AtMost: return v <= 0;
    case ZeroTest::AtLeast: return v >= 0;
    }
    return false;
}

bool nonadjacent_pair(const Interval& a, const Interval& b, ZeroTest t) {
    if (endpoints_equal(sup_of(a), inf_of(b)) && !passes(a.hi(), t))
        return false;
    if (endpoints_equal(inf_of(a), sup_of(b)) && !passes(a.lo(), t))
        return false;
    return true;
}

} // namespace

bool is_adjacent(const Interval& a, const Interval& b) {
    return !nonadjacent_pair(a, b, ZeroTest::Equal);
}

bool is_positively_nonadjacent(const Interval& a, const Interval& b) {
    return nonadjacent_pair(a, b, ZeroTest::AtMost);
}

bool is_negatively_nonadjacent(const Interval& a, const Interval& b) {
    return nonadjacent_pair(a, b, ZeroTest::AtLeast);
}

bool set_nonadjacency(AdjacencyKind kind, const std::vector<Interval>& is) {
    for (const Interval& a : is) {
        for (const Interval& b : is) {
            bool ok = true;
            switch (kind) {
            case AdjacencyKind::Plain: ok = !is_adjacent(a, b); break;
            case AdjacencyKind::Positive: ok = is_positively_nonadjacent(a, b); break;
            case AdjacencyKind::Negative: ok = is_negatively_nonadjacent(a, b); break;
            }
            if (!ok)
                return false;
        }
    }
    return true;
}

int interval_cmp(const Interval& a, const Interval& b) {
    auto key = [](const Interval& i) {
        // -inf sorts before every finite bound, +inf after
        std::int64_t lo = i.lo_unbounded() ? INT64_MIN : i.lo();
        std::int64_t hi = i.hi_unbounded() ? INT64_MAX : i.hi();
        return std::tuple(lo, !i.lo_closed(), hi, i.hi_closed());
    };
    auto ka = key(a), kb = key(b);
    if (ka < kb)
        return -1;
    return ka == kb ? 0 : 1;
}

std::size_t hash_interval(const Interval& i) {
    auto mix = [](std::size_t h, std::size_t v) {
        return h * 1099511628211ull ^ v;
    };
    std::size_t h = 14695981039346656037ull;
    h = mix(h, i.lo_unbounded() ? 0x9e3779b9u : std::size_t(i.lo()) + 1);
    h = mix(h, i.hi_unbounded() ? 0x7f4a7c15u : std::size_t(i.hi()) + 1);
    h = mix(h, (i.lo_closed() ? 2u : 0u) | (i.hi_closed() ? 1u : 0u));
    return h;
}

} // namespace tlkit
