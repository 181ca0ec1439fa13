// Command line front end: one subcommand per invocation, plain text by
// default, --json for line-delimited structured output. Exit codes:
// 0 success / property holds, 1 property fails / counterexample found,
// 2 usage or input errors (always with an "error:" line on stderr).

#include "tlkit/classify.hpp"
#include "tlkit/counter_machine.hpp"
#include "tlkit/equisat.hpp"
#include "tlkit/evaluator.hpp"
#include "tlkit/fuzz.hpp"
#include "tlkit/parser.hpp"
#include "tlkit/reductions.hpp"
#include "tlkit/rewrite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace tlkit;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

PropSet split_props(const std::string& csv) {
    PropSet out;
    std::string cur;
    std::istringstream is(csv);
    while (std::getline(is, cur, ',')) {
        auto b = cur.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        auto e = cur.find_last_not_of(" \t");
        out.insert(cur.substr(b, e - b + 1));
    }
    return out;
}

json classify_json(const ClassifyReport& r) {
    json j;
    j["is_mtl"] = r.is_mtl;
    j["is_mitl"] = r.is_mitl;
    j["is_mtl_future_only"] = r.is_mtl_future_only;
    j["is_pmtl"] = r.is_pmtl;
    j["is_tptl"] = r.is_tptl;
    j["is_1tptl"] = r.is_1tptl;
    j["is_open_tptl"] = r.is_open_tptl;
    j["is_na_1tptl"] = r.is_na_1tptl;
    j["is_na_plus"] = r.is_na_plus;
    j["is_na_minus"] = r.is_na_minus;
    j["is_pa_1tptl"] = r.is_pa_1tptl;
    j["pnemtl_adjacency"] = to_string(r.pnemtl_adjacency);
    return j;
}

struct Options {
    std::string formula_file, word_file, automaton_file, machine_file;
    std::string psi_file, out_file, sigma_csv, aux_csv, errors_file, target;
    std::size_t pos = 1, max_steps = 10000, max_len = 3;
    std::uint64_t seed = 1;
    std::size_t cases = 300;
    bool json_out = false, embed = false, allow_nonclosed = false;
    bool oversampled = false, exact = false, with_errors = false;
};

int run(const std::string& cmd, const Options& o) {
    if (cmd == "parse") {
        int given = !o.formula_file.empty() + !o.word_file.empty() +
                    !o.automaton_file.empty() + !o.machine_file.empty();
        if (given != 1) throw Error("parse: give exactly one of -f, -w, -a, -m");
        std::string kind, text;
        if (!o.formula_file.empty()) {
            kind = "formula";
            text = format_formula(parse_formula(read_input(o.formula_file))) + "\n";
        } else if (!o.word_file.empty()) {
            kind = "word";
            text = parse_timed_word(read_input(o.word_file)).to_string();
        } else if (!o.automaton_file.empty()) {
            kind = "automaton";
            text = parse_automaton(read_input(o.automaton_file)).to_string();
        } else {
            kind = "machine";
            text = machine_to_string(parse_counter_machine(read_input(o.machine_file)));
        }
        if (o.json_out)
            std::cout << json{{"kind", kind}, {"text", text}}.dump() << "\n";
        else
            std::cout << text;
        return 0;
    }
    if (cmd == "classify") {
        ClassifyReport r = classify(parse_formula(read_input(o.formula_file)));
        if (o.json_out)
            std::cout << classify_json(r).dump() << "\n";
        else
            std::cout << report_to_string(r);
        return 0;
    }
    if (cmd == "eval") {
        Formula f = parse_formula(read_input(o.formula_file));
        TimedWord w = parse_timed_word(read_input(o.word_file));
        if (o.pos < 1 || o.pos > w.size())
            throw Error("eval: position " + std::to_string(o.pos) + " outside 1.." +
                        std::to_string(w.size()));
        bool v = evaluate(w, f, o.pos);
        if (o.json_out)
            std::cout << json{{"value", v}}.dump() << "\n";
        else
            std::cout << (v ? "true" : "false") << "\n";
        return v ? 0 : 1;
    }
    if (cmd == "nnf" || cmd == "desugar") {
        Formula f = desugar(parse_formula(read_input(o.formula_file)));
        if (cmd == "nnf") {
            if (o.embed) f = embed_timed_modalities(f);
            f = to_nnf(f);
        }
        write_output(o.out_file, format_formula(f) + "\n");
        return 0;
    }
    if (cmd == "flatten") {
        Formula f = parse_formula(read_input(o.formula_file));
        FlattenResult r = flatten(f, split_props(o.sigma_csv));
        std::ostringstream os;
        os << "main: " << format_formula(r.main) << "\n";
        for (auto& [w, def] : r.definitions)
            os << w << " := " << format_formula(def) << "\n";
        os << "assembled: " << format_formula(r.assembled) << "\n";
        write_output(o.out_file, os.str());
        return 0;
    }
    if (cmd == "relativize") {
        Formula f = parse_formula(read_input(o.formula_file));
        write_output(o.out_file,
                     format_formula(relativize(split_props(o.sigma_csv), f)) + "\n");
        return 0;
    }
    if (cmd == "fk2rat" || cmd == "rat2fk") {
        Formula f = parse_formula(read_input(o.formula_file));
        ReductionReport r;
        if (cmd == "fk2rat") {
            FkToRatOptions opts;
            opts.allow_nonclosed = o.allow_nonclosed;
            r = fk_to_rat(f, opts);
        } else {
            r = rat_to_fk(f);
        }
        if (!o.out_file.empty()) write_output(o.out_file, format_formula(r.output) + "\n");
        if (o.json_out) {
            json j{{"plans", r.plans},
                   {"disjuncts_before_pruning", r.disjuncts_before_pruning},
                   {"disjuncts_emitted", r.disjuncts_emitted},
                   {"output_nodes", r.output_nodes}};
            std::cout << j.dump() << "\n";
        } else {
            std::cout << report_to_string(r);
            if (o.out_file.empty()) std::cout << "output: " << format_formula(r.output) << "\n";
        }
        return 0;
    }
    if (cmd == "equisat-check") {
        Formula phi = parse_formula(read_input(o.formula_file));
        Formula psi = parse_formula(read_input(o.psi_file));
        EquisatUniverse u;
        u.max_len = o.max_len;
        EquisatReport r =
            o.oversampled
                ? verify_oversampled_equisat(phi, psi, split_props(o.sigma_csv),
                                             split_props(o.aux_csv), u)
                : verify_simple_equisat(phi, psi, split_props(o.sigma_csv),
                                        split_props(o.aux_csv), u);
        if (o.json_out)
            std::cout << json{{"ok", r.ok},
                              {"words_scanned", r.words_scanned},
                              {"direction", r.direction}}
                             .dump()
                      << "\n";
        else
            std::cout << report_to_string(r);
        return r.ok ? 0 : 1;
    }
    if (cmd == "cm-run" || cmd == "cm-encode") {
        CounterMachine m = parse_counter_machine(read_input(o.machine_file));
        ErrorSchedule es;
        if (!o.errors_file.empty())
            es = parse_error_schedule(read_input(o.errors_file), m.counters());
        Run r = run_machine(m, o.max_steps, es);
        if (cmd == "cm-run") {
            if (o.json_out) {
                for (auto& c : r.configs)
                    std::cout << json{{"pc", c.pc}, {"counters", c.counters}}.dump() << "\n";
                std::cout << json{{"halted", r.halted}}.dump() << "\n";
            } else {
                for (auto& c : r.configs) {
                    std::cout << "(" << c.pc;
                    for (auto v : c.counters) std::cout << ", " << v;
                    std::cout << ")\n";
                }
                std::cout << (r.halted ? "halted" : "out of steps") << "\n";
            }
            return r.halted ? 0 : 1;
        }
        write_output(o.out_file, encode_run(m, r).to_string());
        return 0;
    }
    if (cmd == "cm-formula") {
        if (o.exact == o.with_errors)
            throw Error("cm-formula: give exactly one of --exact, --errors");
        CounterMachine m = parse_counter_machine(read_input(o.machine_file));
        Formula f = o.exact ? build_phi_cm(m) : build_phi_iecm(m);
        write_output(o.out_file, format_formula(f) + "\n");
        return 0;
    }
    if (cmd == "fuzz") {
        FuzzOptions fo;
        fo.seed = o.seed;
        fo.cases = o.cases;
        fo.allow_nonclosed = o.allow_nonclosed;
        FuzzReport r;
        if (o.target == "fk2rat")
            r = fuzz_fk_to_rat(fo);
        else if (o.target == "rat2fk")
            r = fuzz_rat_to_fk(fo);
        else if (o.target == "roundtrip")
            r = fuzz_fk_round_trip(fo);
        else if (o.target == "until-frat")
            r = fuzz_until_via_frat(fo);
        else if (o.target == "rewrites")
            r = fuzz_rewrites(fo);
        else
            throw Error("fuzz: unknown target '" + o.target +
                        "' (fk2rat, rat2fk, roundtrip, until-frat, rewrites)");
        if (o.json_out)
            std::cout << json{{"ok", r.ok}, {"cases", r.cases}}.dump() << "\n";
        else
            std::cout << fuzz_report_to_string(r);
        return r.ok ? 0 : 1;
    }
    throw Error("unknown subcommand " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toolkit for timed-word temporal logics"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) {
        c->add_flag("--json", o.json_out, "line-delimited JSON output");
        return c;
    };
    auto add_formula = [&](CLI::App* c, bool required = true) {
        auto* opt = c->add_option("-f,--formula", o.formula_file, "formula file ('-' = stdin)");
        if (required) opt->required();
        return c;
    };
    auto add_machine = [&](CLI::App* c) {
        c->add_option("-m,--machine", o.machine_file, "counter machine file")->required();
        return c;
    };
    auto add_out = [&](CLI::App* c) {
        c->add_option("-o,--out", o.out_file, "output file (default stdout)");
        return c;
    };

    auto* parse_cmd = add_common(app.add_subcommand("parse", "parse and echo canonically"));
    add_formula(parse_cmd, false);
    parse_cmd->add_option("-w,--word", o.word_file, "timed word file");
    parse_cmd->add_option("-a,--automaton", o.automaton_file, "automaton file");
    parse_cmd->add_option("-m,--machine", o.machine_file, "counter machine file");

    add_formula(add_common(app.add_subcommand("classify", "fragment membership report")));

    auto* eval_cmd = add_common(app.add_subcommand("eval", "evaluate at a position"));
    add_formula(eval_cmd);
    eval_cmd->add_option("-w,--word", o.word_file, "timed word file")->required();
    eval_cmd->add_option("--pos", o.pos, "1-based position (default 1)");

    auto* nnf_cmd = add_out(add_formula(add_common(app.add_subcommand("nnf", "negation normal form"))));
    nnf_cmd->add_flag("--embed", o.embed, "embed timed modalities as freeze quantifiers first");

    add_out(add_formula(add_common(app.add_subcommand("desugar", "rewrite sugar into core connectives"))));

    auto* flatten_cmd = add_out(add_formula(add_common(
        app.add_subcommand("flatten", "extract nested modalities into witness definitions"))));
    flatten_cmd->add_option("--sigma", o.sigma_csv, "action propositions, comma separated")
        ->required();

    auto* rel_cmd = add_out(add_formula(add_common(
        app.add_subcommand("relativize", "restrict evaluation to action points"))));
    rel_cmd->add_option("--sigma", o.sigma_csv, "action propositions, comma separated")
        ->required();

    auto* fk_cmd = add_out(add_formula(add_common(
        app.add_subcommand("fk2rat", "rewrite an anchored-automata formula into Rat form"))));
    fk_cmd->add_flag("--allow-nonclosed", o.allow_nonclosed,
                     "accept open and unbounded windows (fuzz-validated extension)");

    add_out(add_formula(add_common(
        app.add_subcommand("rat2fk", "rewrite a Rat formula into anchored-automata form"))));

    auto* eq_cmd = add_common(app.add_subcommand("equisat-check", "bounded equisatisfiability check"));
    add_formula(eq_cmd);
    eq_cmd->add_option("--psi", o.psi_file, "transformed formula file")->required();
    eq_cmd->add_option("--sigma", o.sigma_csv, "action propositions")->required();
    eq_cmd->add_option("--aux", o.aux_csv, "witness/oversampling propositions");
    eq_cmd->add_flag("--oversampled", o.oversampled, "use the deleting projection");
    eq_cmd->add_option("--max-len", o.max_len, "universe word length bound (default 3)");

    auto* run_cmd = add_common(app.add_subcommand("cm-run", "run a counter machine"));
    add_machine(run_cmd);
    run_cmd->add_option("--max-steps", o.max_steps, "step budget (default 10000)");
    run_cmd->add_option("--errors", o.errors_file, "insertion error schedule file");

    auto* enc_cmd = add_out(add_common(app.add_subcommand("cm-encode", "encode a run as a timed word")));
    add_machine(enc_cmd);
    enc_cmd->add_option("--max-steps", o.max_steps, "step budget (default 10000)");
    enc_cmd->add_option("--errors", o.errors_file, "insertion error schedule file");

    auto* form_cmd = add_out(add_common(app.add_subcommand("cm-formula", "emit the run-capturing formula")));
    add_machine(form_cmd);
    form_cmd->add_flag("--exact", o.exact, "exact machines: copies must have sources");
    form_cmd->add_flag("--errors", o.with_errors, "machines with insertion errors");

    auto* fuzz_cmd = add_common(app.add_subcommand("fuzz", "differential fuzz harnesses"));
    fuzz_cmd->add_option("--target", o.target, "fk2rat | rat2fk | roundtrip | until-frat | rewrites")
        ->required();
    fuzz_cmd->add_option("--seed", o.seed, "64-bit replay seed (default 1)");
    fuzz_cmd->add_option("--cases", o.cases, "number of cases (default 300)");
    fuzz_cmd->add_flag("--allow-nonclosed", o.allow_nonclosed,
                       "generate open and unbounded windows for fk2rat");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
