#pragma once

#include "tlkit/formula.hpp"
#include "tlkit/timed_word.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tlkit {

struct Instruction {
    enum class Op { Inc, Dec, IfZero, Halt };
    Op op = Op::Halt;
    std::size_t counter = 0;        // 1-based; unused for Halt
    std::size_t target = 0;         // goto, or the zero branch of ifz
    std::size_t target_nonzero = 0; // ifz only
};

// Deterministic k-counter program: numbered instructions 1..n, exactly one
// Halt and it is the last instruction.
class CounterMachine {
public:
    CounterMachine(std::size_t counters, std::vector<Instruction> instructions);

    std::size_t counters() const { return k_; }
    std::size_t size() const { return instructions_.size(); }
    const Instruction& at(std::size_t p) const;  // p in 1..size()
    const std::vector<Instruction>& instructions() const { return instructions_; }

private:
    std::size_t k_;
    std::vector<Instruction> instructions_;
};

struct Configuration {
    std::size_t pc = 1;
    std::vector<std::int64_t> counters;

    bool operator==(const Configuration& o) const = default;
};

// Per-counter insertion errors applied on a given move (1-based move index).
using ErrorSchedule = std::map<std::size_t, std::vector<std::int64_t>>;

struct Run {
    std::vector<Configuration> configs;  // configs[0] is the initial one
    bool halted = false;
    ErrorSchedule errors;
};

// One move. Errors, when given, are added on top of the instruction's own
// effect, so counters only ever gain from them. Dec of a zero counter
// leaves it at zero.
Configuration step(const CounterMachine& m, const Configuration& c,
                   const std::vector<std::int64_t>* errors = nullptr);

Run run_machine(const CounterMachine& m, std::size_t max_steps,
                const ErrorSchedule& errors = {});

CounterMachine parse_counter_machine(const std::string& text);
std::string machine_to_string(const CounterMachine& m);
ErrorSchedule parse_error_schedule(const std::string& text, std::size_t counters);
std::string schedule_to_string(const ErrorSchedule& s);

// Proposition names used by the encoding: s.p3 / f.p3 mark the start and
// end of a configuration at instruction 3, a.2 / b.2 spell counter 2.
std::string prop_s(std::size_t p);
std::string prop_f(std::size_t p);
std::string prop_a(std::size_t j);
std::string prop_b(std::size_t j);

// Timed word carrying one run: configuration i occupies [i, i+1) as
// s (a1 b1)^c1 ... (ak bk)^ck f, one proposition per point, strictly
// increasing timestamps. Placement is heuristic; anything that cannot be
// placed consistently with the formulas' timing windows throws. The run
// must have halted.
TimedWord encode_run(const CounterMachine& m, const Run& r);

struct MachineFormulas {
    Formula phi1;           // untimed successor shape of the symbol sequence
    Formula phi2;           // initial configuration (1, 0, ..., 0)
    Formula phi3;           // marker drift: S apart by (1,2), F by (0,1)
    Formula phi4;           // nothing beyond the halt marker
    Formula phi5_distinct;  // one proposition per point, strictly increasing times
    Formula phi6_halt;      // the halt marker is eventually reached
    Formula phi7;           // non-last pairs are copied one interval ahead
    std::vector<Formula> phi8;  // one per non-halt instruction, in order
    Formula phi9;           // no inserted pairs (error-free machines only)
    Formula phi_iecm;
    Formula phi_cm;
};

MachineFormulas build_machine_formulas(const CounterMachine& m);
Formula build_phi_iecm(const CounterMachine& m);
Formula build_phi_cm(const CounterMachine& m);

} // namespace tlkit
