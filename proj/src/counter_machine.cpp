#include "tlkit/counter_machine.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace tlkit {

namespace {

std::string bad_machine(const std::string& why) {
    return "counter machine: " + why;
}

} // namespace

CounterMachine::CounterMachine(std::size_t counters, std::vector<Instruction> instructions)
    : k_(counters), instructions_(std::move(instructions)) {
    if (k_ == 0) throw Error(bad_machine("needs at least one counter"));
    if (instructions_.empty()) throw Error(bad_machine("needs at least one instruction"));
    const std::size_t n = instructions_.size();
    for (std::size_t p = 1; p <= n; ++p) {
        const Instruction& ins = instructions_[p - 1];
        if (ins.op == Instruction::Op::Halt) {
            if (p != n) throw Error(bad_machine("halt must be the last instruction"));
            continue;
        }
        if (p == n) throw Error(bad_machine("last instruction must be halt"));
        if (ins.counter < 1 || ins.counter > k_)
            throw Error(bad_machine("instruction " + std::to_string(p) + " uses counter " +
                                    std::to_string(ins.counter) + " of " + std::to_string(k_)));
        auto check_target = [&](std::size_t t) {
            if (t < 1 || t > n)
                throw Error(bad_machine("instruction " + std::to_string(p) + " jumps to " +
                                        std::to_string(t) + ", valid range is 1.." +
                                        std::to_string(n)));
        };
        check_target(ins.target);
        if (ins.op == Instruction::Op::IfZero) check_target(ins.target_nonzero);
    }
}

const Instruction& CounterMachine::at(std::size_t p) const {
    if (p < 1 || p > instructions_.size())
        throw Error(bad_machine("no instruction " + std::to_string(p)));
    return instructions_[p - 1];
}

Configuration step(const CounterMachine& m, const Configuration& c,
                   const std::vector<std::int64_t>* errors) {
    const Instruction& ins = m.at(c.pc);
    if (ins.op == Instruction::Op::Halt)
        throw Error(bad_machine("cannot step from the halt instruction"));
    Configuration next = c;
    switch (ins.op) {
    case Instruction::Op::Inc:
        next.counters[ins.counter - 1] += 1;
        next.pc = ins.target;
        break;
    case Instruction::Op::Dec:
        if (next.counters[ins.counter - 1] > 0) next.counters[ins.counter - 1] -= 1;
        next.pc = ins.target;
        break;
    case Instruction::Op::IfZero:
        next.pc = c.counters[ins.counter - 1] == 0 ? ins.target : ins.target_nonzero;
        break;
    case Instruction::Op::Halt:
        break;
    }
    if (errors) {
        if (errors->size() != m.counters())
            throw Error(bad_machine("error vector has wrong arity"));
        for (std::size_t j = 0; j < m.counters(); ++j) {
            if ((*errors)[j] < 0) throw Error(bad_machine("errors cannot remove counter value"));
            next.counters[j] += (*errors)[j];
        }
    }
    return next;
}

Run run_machine(const CounterMachine& m, std::size_t max_steps, const ErrorSchedule& errors) {
    Run r;
    r.errors = errors;
    Configuration c;
    c.pc = 1;
    c.counters.assign(m.counters(), 0);
    r.configs.push_back(c);
    for (std::size_t move = 1; move <= max_steps; ++move) {
        if (m.at(c.pc).op == Instruction::Op::Halt) break;
        auto it = errors.find(move);
        c = step(m, c, it == errors.end() ? nullptr : &it->second);
        r.configs.push_back(c);
    }
    r.halted = m.at(c.pc).op == Instruction::Op::Halt;
    return r;
}

namespace {

// Shared line scanner for the machine and schedule formats. Strips comments
// and blank lines, keeps 1-based line numbers for messages.
std::vector<std::pair<std::size_t, std::string>> content_lines(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::istringstream is(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(is, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        out.emplace_back(no, line.substr(b, e - b + 1));
    }
    return out;
}

std::size_t parse_index(std::istringstream& is, std::size_t lineno, const std::string& what) {
    long long v = 0;
    if (!(is >> v) || v < 1)
        throw Error("counter machine, line " + std::to_string(lineno) + ": expected " + what);
    return static_cast<std::size_t>(v);
}

void expect_word(std::istringstream& is, std::size_t lineno, const std::string& word) {
    std::string got;
    if (!(is >> got) || got != word)
        throw Error("counter machine, line " + std::to_string(lineno) + ": expected '" + word +
                    "'" + (got.empty() ? "" : ", got '" + got + "'"));
}

} // namespace

CounterMachine parse_counter_machine(const std::string& text) {
    auto lines = content_lines(text);
    if (lines.empty()) throw Error(bad_machine("empty description"));
    std::size_t k = 0;
    {
        std::istringstream is(lines.front().second);
        expect_word(is, lines.front().first, "counters:");
        k = parse_index(is, lines.front().first, "a counter arity");
    }
    std::vector<std::pair<std::size_t, Instruction>> numbered;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto [no, body] = lines[li];
        std::istringstream is(body);
        std::string label;
        is >> label;
        if (label.empty() || label.back() != ':')
            throw Error("counter machine, line " + std::to_string(no) +
                        ": expected 'N: instruction'");
        label.pop_back();
        std::size_t p = 0;
        try {
            p = std::stoul(label);
        } catch (...) {
            throw Error("counter machine, line " + std::to_string(no) + ": bad label '" + label +
                        "'");
        }
        std::string op;
        is >> op;
        Instruction ins;
        if (op == "halt") {
            ins.op = Instruction::Op::Halt;
        } else if (op == "inc" || op == "dec") {
            ins.op = op == "inc" ? Instruction::Op::Inc : Instruction::Op::Dec;
            ins.counter = parse_index(is, no, "a counter index");
            expect_word(is, no, "goto");
            ins.target = parse_index(is, no, "a target label");
        } else if (op == "ifz") {
            ins.op = Instruction::Op::IfZero;
            ins.counter = parse_index(is, no, "a counter index");
            expect_word(is, no, "goto");
            ins.target = parse_index(is, no, "a target label");
            expect_word(is, no, "else");
            ins.target_nonzero = parse_index(is, no, "a target label");
        } else {
            throw Error("counter machine, line " + std::to_string(no) + ": unknown instruction '" +
                        op + "'");
        }
        std::string rest;
        if (is >> rest)
            throw Error("counter machine, line " + std::to_string(no) + ": trailing '" + rest +
                        "'");
        numbered.emplace_back(p, ins);
    }
    std::vector<Instruction> prog(numbered.size());
    std::vector<bool> seen(numbered.size(), false);
    for (auto& [p, ins] : numbered) {
        if (p < 1 || p > prog.size() || seen[p - 1])
            throw Error(bad_machine("labels must cover 1.." + std::to_string(prog.size()) +
                                    " exactly once"));
        seen[p - 1] = true;
        prog[p - 1] = ins;
    }
    return CounterMachine(k, std::move(prog));
}

std::string machine_to_string(const CounterMachine& m) {
    std::ostringstream os;
    os << "counters: " << m.counters() << "\n";
    for (std::size_t p = 1; p <= m.size(); ++p) {
        const Instruction& ins = m.at(p);
        os << p << ": ";
        switch (ins.op) {
        case Instruction::Op::Inc:
            os << "inc " << ins.counter << " goto " << ins.target;
            break;
        case Instruction::Op::Dec:
            os << "dec " << ins.counter << " goto " << ins.target;
            break;
        case Instruction::Op::IfZero:
            os << "ifz " << ins.counter << " goto " << ins.target << " else "
               << ins.target_nonzero;
            break;
        case Instruction::Op::Halt:
            os << "halt";
            break;
        }
        os << "\n";
    }
    return os.str();
}

ErrorSchedule parse_error_schedule(const std::string& text, std::size_t counters) {
    ErrorSchedule s;
    for (auto& [no, body] : content_lines(text)) {
        std::istringstream is(body);
        expect_word(is, no, "step");
        std::string label;
        is >> label;
        if (label.empty() || label.back() != ':')
            throw Error("error schedule, line " + std::to_string(no) + ": expected 'step N:'");
        label.pop_back();
        std::size_t move = 0;
        try {
            move = std::stoul(label);
        } catch (...) {
            throw Error("error schedule, line " + std::to_string(no) + ": bad step '" + label +
                        "'");
        }
        if (move == 0 || s.count(move))
            throw Error("error schedule, line " + std::to_string(no) + ": step " + label +
                        " is invalid or repeated");
        std::vector<std::int64_t> errs;
        std::string tok;
        while (is >> tok) {
            if (tok.size() < 2 || tok[0] != '+')
                throw Error("error schedule, line " + std::to_string(no) +
                            ": increments look like '+2', got '" + tok + "'");
            try {
                errs.push_back(std::stoll(tok.substr(1)));
            } catch (...) {
                throw Error("error schedule, line " + std::to_string(no) + ": bad increment '" +
                            tok + "'");
            }
            if (errs.back() < 0)
                throw Error("error schedule, line " + std::to_string(no) +
                            ": increments cannot be negative");
        }
        if (errs.size() != counters)
            throw Error("error schedule, line " + std::to_string(no) + ": expected " +
                        std::to_string(counters) + " increments");
        s[move] = std::move(errs);
    }
    return s;
}

std::string schedule_to_string(const ErrorSchedule& s) {
    std::ostringstream os;
    for (auto& [move, errs] : s) {
        os << "step " << move << ":";
        for (auto e : errs) os << " +" << e;
        os << "\n";
    }
    return os.str();
}

std::string prop_s(std::size_t p) { return "s.p" + std::to_string(p); }
std::string prop_f(std::size_t p) { return "f.p" + std::to_string(p); }
std::string prop_a(std::size_t j) { return "a." + std::to_string(j); }
std::string prop_b(std::size_t j) { return "b." + std::to_string(j); }

namespace {

// One placed symbol. block 0 is the start marker, 1..k the counters,
// k+1 the end marker. Copied symbols remember their source time because
// the gap (copy, source+1) has to stay free of later insertions.
struct Sym {
    std::string prop;
    Rational t;
    std::size_t block = 0;
    bool is_copy = false;
    Rational src = 0;
};

std::vector<Sym> initial_config(const CounterMachine& m, const Configuration& c) {
    std::vector<Sym> out;
    out.push_back({prop_s(c.pc), Rational(0), 0, false, 0});
    out.push_back({prop_f(c.pc), Rational(1, 2), m.counters() + 1, false, 0});
    return out;
}

// Lays out configuration i+1 from configuration i. Marker drift: the start
// marker moves 1+beta later, every copied symbol lands 1-eta after its
// source with eta shrinking towards the end marker, so copies keep their
// relative order and each one is the last symbol before source+1.
std::vector<Sym> next_config(const CounterMachine& m, const std::vector<Sym>& src,
                             std::size_t cfg_index, const Configuration& from,
                             const Configuration& to, const std::vector<std::int64_t>& errs) {
    const Instruction& ins = m.at(from.pc);
    const std::size_t k = m.counters();
    const std::size_t M = src.size();

    std::int64_t total_err = 0;
    for (auto e : errs) total_err += e;
    if (ins.op == Instruction::Op::Dec && errs[ins.counter - 1] > 0 &&
        from.counters[ins.counter - 1] <= 1)
        throw Error("encode_run: insertion error on counter " + std::to_string(ins.counter) +
                    " collides with a decrement to zero at step " +
                    std::to_string(cfg_index + 1));

    Rational min_gap = Rational(static_cast<long>(cfg_index + 1)) - src.back().t;
    for (std::size_t i = 1; i < M; ++i)
        min_gap = std::min(min_gap, Rational(src[i].t - src[i - 1].t));
    min_gap = std::min(min_gap,
                       Rational(1 - (src[0].t - Rational(static_cast<long>(cfg_index)))));
    if (min_gap <= 0) throw Error("encode_run: configuration layout has collapsed");
    Rational beta = min_gap / Rational(static_cast<long>(4 * (M + 2 * total_err + 8)));

    // Decrement drops the source's last pair of the touched counter.
    std::size_t drop_a = M, drop_b = M;
    if (ins.op == Instruction::Op::Dec && from.counters[ins.counter - 1] >= 1) {
        for (std::size_t i = M; i-- > 0;) {
            if (src[i].block == ins.counter) {
                drop_b = i;
                drop_a = i - 1;
                break;
            }
        }
    }

    std::vector<Sym> out;
    out.push_back({prop_s(to.pc), src[0].t + 1 + beta, 0, false, 0});
    for (std::size_t i = 1; i < M; ++i) {
        if (i == drop_a || i == drop_b) continue;
        Rational t = src[i].t + 1 - Rational(static_cast<long>(M - i)) * beta;
        bool marker = src[i].block == k + 1;
        out.push_back({marker ? prop_f(to.pc) : src[i].prop, t, src[i].block, true, src[i].t});
    }

    // Slot boundary: first placed symbol that belongs to a later block.
    auto first_after = [&](std::size_t block) {
        std::size_t i = 1;
        while (i < out.size() && out[i].block != 0 && out[i].block <= block) ++i;
        return i;
    };

    if (ins.op == Instruction::Op::Inc) {
        std::size_t j = ins.counter;
        std::size_t idx = first_after(j);
        Rational L = out[idx - 1].t, R = out[idx].t;
        Rational w = (R - L) / 3;
        out.insert(out.begin() + idx, {prop_b(j), L + w * 2, j, false, 0});
        out.insert(out.begin() + idx, {prop_a(j), L + w, j, false, 0});
    }

    for (std::size_t j = 1; j <= k; ++j) {
        std::int64_t e = errs[j - 1];
        if (e == 0) continue;
        std::size_t idx = 1;
        while (idx < out.size() && (out[idx].block == 0 || out[idx].block < j)) ++idx;
        const Sym& left = out[idx - 1];
        Rational lb = left.t;
        if (left.is_copy) lb = std::max(lb, Rational(left.src + 1));
        Rational rb = out[idx].t;
        if (!(lb < rb))
            throw Error("encode_run: no room to insert counter " + std::to_string(j) +
                        " errors at step " + std::to_string(cfg_index + 1));
        std::vector<Sym> pairs;
        Rational w = (rb - lb) / Rational(static_cast<long>(2 * e + 1));
        for (std::int64_t q = 1; q <= e; ++q) {
            pairs.push_back({prop_a(j), lb + w * static_cast<long>(2 * q - 1), j, false, 0});
            pairs.push_back({prop_b(j), lb + w * static_cast<long>(2 * q), j, false, 0});
        }
        out.insert(out.begin() + idx, pairs.begin(), pairs.end());
    }

    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i - 1].t < out[i].t))
            throw Error("encode_run: symbol placement is not strictly increasing at step " +
                        std::to_string(cfg_index + 1));
    for (const Sym& s : out)
        if (s.is_copy && !(s.src < s.t && s.t < s.src + 1))
            throw Error("encode_run: copy drifted outside its source window at step " +
                        std::to_string(cfg_index + 1));
    for (std::size_t j = 1; j <= k; ++j) {
        std::int64_t pairs = 0;
        for (const Sym& s : out)
            if (s.block == j && s.prop == prop_a(j)) ++pairs;
        if (pairs != to.counters[j - 1])
            throw Error("encode_run: counter " + std::to_string(j) + " encodes " +
                        std::to_string(pairs) + " but the run says " +
                        std::to_string(to.counters[j - 1]));
    }
    return out;
}

} // namespace

TimedWord encode_run(const CounterMachine& m, const Run& r) {
    if (r.configs.empty()) throw Error("encode_run: empty run");
    if (!r.halted) throw Error("encode_run: run did not halt");
    for (const Configuration& c : r.configs)
        if (c.counters.size() != m.counters())
            throw Error("encode_run: configuration arity mismatch");

    std::vector<std::vector<Sym>> cfgs;
    cfgs.push_back(initial_config(m, r.configs.front()));
    for (std::size_t i = 0; i + 1 < r.configs.size(); ++i) {
        std::vector<std::int64_t> errs(m.counters(), 0);
        auto it = r.errors.find(i + 1);
        if (it != r.errors.end()) {
            if (it->second.size() != m.counters())
                throw Error("encode_run: error schedule arity mismatch at step " +
                            std::to_string(i + 1));
            errs = it->second;
        }
        cfgs.push_back(next_config(m, cfgs[i], i, r.configs[i], r.configs[i + 1], errs));
    }

    std::vector<TimedEvent> events;
    for (const auto& cfg : cfgs)
        for (const Sym& s : cfg) events.push_back({PropSet{s.prop}, s.t});
    return TimedWord(std::move(events));
}

namespace {

// Builds the specification formulas over one shared frozen variable.
// Every macro is interned so repeated subtrees are the same node; the
// evaluator's memo then sees one entry per subtree and position.
class PhiBuilder {
public:
    explicit PhiBuilder(const CounterMachine& m) : m_(m), n_(m.size()), k_(m.counters()) {}

    static constexpr const char* var = "x";

    Formula in(Formula f) {
        auto& bucket = pool_[f->hash];
        for (auto& g : bucket)
            if (formula_equal(g, f)) return g;
        bucket.push_back(f);
        return f;
    }

    Formula atom(const std::string& p) { return in(f_atom(p)); }
    Formula band(std::vector<Formula> ks) { return in(f_and(std::move(ks))); }
    Formula bor(std::vector<Formula> ks) { return in(f_or(std::move(ks))); }
    Formula lnot(Formula a) { return in(f_not(std::move(a))); }
    Formula imp(Formula a, Formula b) { return in(f_implies(std::move(a), std::move(b))); }
    Formula luntil(Formula a, Formula b) { return in(f_until(std::move(a), std::move(b))); }
    Formula o(Formula a) { return in(f_next(std::move(a))); }
    Formula ev(Formula a) { return in(f_eventually(std::move(a))); }
    Formula ev_past(Formula a) { return in(f_eventually_past(std::move(a))); }
    Formula alw(Formula a) { return in(f_always(std::move(a))); }
    Formula gns(Formula a) { return in(f_always_ns(std::move(a))); }
    Formula freeze(Formula a) { return in(f_freeze(var, std::move(a))); }
    Formula ahead(const Interval& I) { return in(f_tmx(var, I)); }
    Formula behind(const Interval& I) { return in(f_xmt(var, I)); }

    Formula s_marker(std::size_t p) { return atom(prop_s(p)); }
    Formula f_marker(std::size_t p) { return atom(prop_f(p)); }
    Formula a_sym(std::size_t j) { return atom(prop_a(j)); }
    Formula b_sym(std::size_t j) { return atom(prop_b(j)); }

    Formula any_s() {
        std::vector<Formula> ks;
        for (std::size_t p = 1; p <= n_; ++p) ks.push_back(s_marker(p));
        return bor(std::move(ks));
    }
    Formula any_f() {
        std::vector<Formula> ks;
        for (std::size_t p = 1; p <= n_; ++p) ks.push_back(f_marker(p));
        return bor(std::move(ks));
    }
    // Any counter symbol a_w with w >= j; false past the last counter.
    Formula a_from(std::size_t j) {
        if (j > k_) return in(f_false());
        std::vector<Formula> ks;
        for (std::size_t w = j; w <= k_; ++w) ks.push_back(a_sym(w));
        return bor(std::move(ks));
    }

    Formula last_a(std::size_t j) {
        return band({a_sym(j), o(o(bor({any_f(), a_from(j + 1)})))});
    }
    Formula last_b(std::size_t j) { return band({b_sym(j), o(bor({any_f(), a_from(j + 1)}))}); }
    Formula nonlast_a(std::size_t j) { return band({a_sym(j), lnot(last_a(j))}); }
    Formula nonlast_b(std::size_t j) { return band({b_sym(j), lnot(last_b(j))}); }
    Formula second_last_a(std::size_t j) { return band({a_sym(j), o(o(last_a(j)))}); }

    // True when no halting end marker sits within one time unit ahead, so
    // the copy obligations lapse only inside the final configuration.
    Formula not_near_halt() {
        return lnot(ev(band({f_marker(n_), ahead(Interval::open(0, 1))})));
    }

    Formula phi1() {
        std::vector<Formula> ks;
        for (std::size_t p = 1; p <= n_; ++p)
            ks.push_back(gns(imp(s_marker(p), o(bor({a_from(1), f_marker(p)})))));
        for (std::size_t j = 1; j <= k_; ++j)
            ks.push_back(gns(imp(a_sym(j), o(b_sym(j)))));
        for (std::size_t j = 1; j <= k_; ++j)
            ks.push_back(gns(imp(b_sym(j), o(bor({a_from(j), any_f()})))));
        ks.push_back(gns(imp(any_f(), bor({o(any_s()), alw(in(f_false()))}))));
        return band(std::move(ks));
    }

    Formula phi2() {
        return freeze(band({s_marker(1), o(band({f_marker(1), ahead(Interval::open(0, 1))}))}));
    }

    Formula phi3() {
        Formula s_rule = gns(freeze(imp(
            band({any_s(), lnot(s_marker(n_))}),
            band({lnot(ev(band({ahead(Interval::closed(0, 1)), any_s()}))),
                  ev(band({any_s(), ahead(Interval::open(1, 2))}))}))));
        Formula f_rule = gns(freeze(imp(band({any_f(), lnot(f_marker(n_))}),
                                        ev(band({any_f(), ahead(Interval::open(0, 1))})))));
        return band({s_rule, f_rule});
    }

    Formula phi4() { return gns(imp(f_marker(n_), alw(in(f_false())))); }

    Formula phi5() {
        std::vector<Formula> props;
        for (std::size_t p = 1; p <= n_; ++p) props.push_back(s_marker(p));
        for (std::size_t p = 1; p <= n_; ++p) props.push_back(f_marker(p));
        for (std::size_t j = 1; j <= k_; ++j) props.push_back(a_sym(j));
        for (std::size_t j = 1; j <= k_; ++j) props.push_back(b_sym(j));
        std::vector<Formula> ks;
        for (std::size_t i = 0; i < props.size(); ++i) {
            std::vector<Formula> others;
            for (std::size_t w = 0; w < props.size(); ++w)
                if (w != i) others.push_back(props[w]);
            ks.push_back(gns(imp(props[i], lnot(bor(std::move(others))))));
        }
        ks.push_back(gns(freeze(
            bor({alw(in(f_false())), o(ahead(Interval::greater_than(0)))}))));
        return band(std::move(ks));
    }

    Formula phi6() { return in(f_eventually_ns(s_marker(n_))); }

    Formula phi7() {
        std::vector<Formula> ks;
        for (std::size_t j = 1; j <= k_; ++j) {
            auto rule = [&](Formula who, Formula sym) {
                return gns(freeze(imp(
                    band({std::move(who), not_near_halt()}),
                    ev(band({std::move(sym), ahead(Interval::open(0, 1)),
                             o(ahead(Interval::open(1, 2)))})))));
            };
            ks.push_back(rule(nonlast_a(j), a_sym(j)));
            ks.push_back(rule(nonlast_b(j), b_sym(j)));
        }
        return band(std::move(ks));
    }

    // Holds at positions inside a configuration that started with s^g. The
    // marker itself never carries a counter symbol, so guarded rules fire
    // only on the configuration's own a/b symbols.
    Formula inside_config(std::size_t g) {
        return in(f_since(lnot(any_s()), s_marker(g)));
    }

    // Last pairs of every counter not in `skip` reappear as last pairs one
    // interval later. Scoped to configurations at instruction g: other
    // instructions impose their own copy set, and the halting configuration
    // has no successor to copy into. Ends with "end marker or a later
    // counter" so higher counters may follow the copied pair.
    Formula copy_excluding(std::size_t g, const std::vector<bool>& skip) {
        std::vector<Formula> ks;
        for (std::size_t j = 1; j <= k_; ++j) {
            if (skip[j - 1]) continue;
            ks.push_back(gns(freeze(imp(
                band({last_a(j), inside_config(g)}),
                ev(band({a_sym(j), ahead(Interval::open(0, 1)),
                         o(band({b_sym(j), ahead(Interval::open(1, 2)),
                                 o(bor({any_f(), a_from(j + 1)}))}))}))))));
        }
        return band(std::move(ks));
    }

    Formula phi8(std::size_t g) {
        const Instruction& ins = m_.at(g);
        std::vector<bool> skip(k_, false);
        std::size_t j = ins.counter;
        Formula sg = s_marker(g);
        Formula no_s = lnot(any_s());
        Formula no_f = lnot(any_f());
        switch (ins.op) {
        case Instruction::Op::IfZero: {
            Formula zero_here = luntil(lnot(a_sym(j)), any_f());
            Formula pos_here = luntil(band({lnot(a_sym(j)), no_f}), a_sym(j));
            Formula zero_branch =
                gns(imp(band({sg, zero_here}), luntil(no_s, s_marker(ins.target))));
            Formula pos_branch =
                gns(imp(band({sg, pos_here}), luntil(no_s, s_marker(ins.target_nonzero))));
            return band({copy_excluding(g, skip), zero_branch, pos_branch});
        }
        case Instruction::Op::Inc: {
            skip[j - 1] = true;
            Formula chain = gns(imp(sg, luntil(no_s, s_marker(ins.target))));
            Formula from_zero = gns(imp(
                band({sg, luntil(lnot(a_sym(j)), f_marker(g))}),
                luntil(no_s, freeze(band({s_marker(ins.target),
                                          ev(band({ahead(Interval::open(0, 1)), a_sym(j)}))})))));
            Formula from_pos = gns(imp(
                band({sg, luntil(no_f, a_sym(j))}),
                luntil(no_f,
                       freeze(band({last_a(j),
                                    ev(band({ahead(Interval::open(0, 1)), a_sym(j),
                                             o(o(band({last_a(j),
                                                       ahead(Interval::open(1, 2))})))}))})))));
            return band({copy_excluding(g, skip), chain, from_zero, from_pos});
        }
        case Instruction::Op::Dec: {
            skip[j - 1] = true;
            Formula chain = gns(imp(sg, luntil(no_s, s_marker(ins.target))));
            Formula next_zero =
                band({s_marker(ins.target), luntil(lnot(a_sym(j)), any_f())});
            Formula from_zero = gns(imp(band({sg, luntil(lnot(a_sym(j)), f_marker(g))}),
                                        luntil(no_s, next_zero)));
            Formula from_one = gns(imp(
                band({sg, luntil(band({lnot(a_sym(j)), no_f}), last_a(j))}),
                luntil(no_s, next_zero)));
            Formula from_more = gns(imp(
                band({sg, luntil(no_f, nonlast_a(j))}),
                luntil(no_f,
                       freeze(band({second_last_a(j),
                                    ev(band({ahead(Interval::open(0, 1)), a_sym(j),
                                             o(o(band({bor({a_from(j + 1), any_f()}),
                                                       ahead(Interval::open(1, 2))})))}))})))));
            return band({copy_excluding(g, skip), chain, from_zero, from_one, from_more});
        }
        case Instruction::Op::Halt:
            break;
        }
        throw Error(bad_machine("no step formula for the halt instruction"));
    }

    Formula phi9() {
        std::vector<Formula> ks;
        for (std::size_t j = 1; j <= k_; ++j) {
            auto rule = [&](Formula who, Formula sym) {
                return gns(freeze(imp(
                    std::move(who),
                    ev_past(band({behind(Interval::open(1, 2)),
                                  o(band({std::move(sym),
                                          behind(Interval::open(0, 1))}))})))));
            };
            ks.push_back(rule(nonlast_a(j), a_sym(j)));
            ks.push_back(rule(nonlast_b(j), b_sym(j)));
        }
        return band(std::move(ks));
    }

    MachineFormulas build() {
        MachineFormulas out;
        out.phi1 = phi1();
        out.phi2 = phi2();
        out.phi3 = phi3();
        out.phi4 = phi4();
        out.phi5_distinct = phi5();
        out.phi6_halt = phi6();
        out.phi7 = phi7();
        for (std::size_t p = 1; p < n_; ++p) out.phi8.push_back(phi8(p));
        out.phi9 = phi9();
        std::vector<Formula> conj{out.phi1, out.phi2,          out.phi3, out.phi4,
                                  out.phi5_distinct, out.phi6_halt, out.phi7};
        for (auto& f : out.phi8) conj.push_back(f);
        out.phi_iecm = in(f_and(conj));
        conj.push_back(out.phi9);
        out.phi_cm = in(f_and(std::move(conj)));
        return out;
    }

private:
    const CounterMachine& m_;
    std::size_t n_, k_;
    std::unordered_map<std::size_t, std::vector<Formula>> pool_;
};

} // namespace

MachineFormulas build_machine_formulas(const CounterMachine& m) {
    return PhiBuilder(m).build();
}

Formula build_phi_iecm(const CounterMachine& m) { return build_machine_formulas(m).phi_iecm; }
Formula build_phi_cm(const CounterMachine& m) { return build_machine_formulas(m).phi_cm; }

} // namespace tlkit
