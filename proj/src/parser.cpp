#include "tlkit/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tlkit {

namespace {

const std::set<std::string> keywords = {
    "true", "false", "U",  "S",    "Uns", "Sns", "F",    "G",
    "Fns",  "Gns",   "O",  "Obar", "PG",  "T",   "in",   "Rat",
    "FRat", "PRat",  "Fk", "Pk"};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

// Recognizes an interval literal starting at i ("(1,2]", "[0,inf)", ...);
// returns its length, or 0 if the text there is not an interval. Scanners
// must skip these atomically: a half-open literal like "[0,1)" would
// otherwise unbalance bracket-depth counting.
std::size_t interval_span(const std::string& s, std::size_t i) {
    if (i >= s.size() || (s[i] != '(' && s[i] != '['))
        return 0;
    std::size_t j = i + 1;
    auto ws = [&] {
        while (j < s.size() && (s[j] == ' ' || s[j] == '\t'))
            ++j;
    };
    auto bound = [&]() -> bool {
        if (j < s.size() && (s[j] == '+' || s[j] == '-'))
            ++j;
        if (s.compare(j, 3, "inf") == 0) {
            j += 3;
            return true;
        }
        std::size_t digits = 0;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
            ++j;
            ++digits;
        }
        return digits > 0;
    };
    ws();
    if (!bound())
        return 0;
    ws();
    if (j >= s.size() || s[j] != ',')
        return 0;
    ++j;
    ws();
    if (!bound())
        return 0;
    ws();
    if (j < s.size() && (s[j] == ')' || s[j] == ']'))
        return j - i + 1;
    return 0;
}

// Splits on a separator at bracket depth zero. Interval literals are skipped
// atomically; all other brackets must nest properly.
std::vector<std::string> split_top_level(const std::string& text, char sep,
                                         bool also_newline = false) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (std::size_t n = interval_span(text, i)) {
            cur += text.substr(i, n);
            i += n - 1;
            continue;
        }
        char c = text[i];
        if (c == '(' || c == '[' || c == '{')
            ++depth;
        else if (c == ')' || c == ']' || c == '}')
            --depth;
        if (depth == 0 && (c == sep || (also_newline && c == '\n'))) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

class Cursor {
public:
    explicit Cursor(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool eof() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    // '-' that is not the head of '->'
    bool at_constraint_minus() {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == '-' &&
               (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '>');
    }

    bool accept(const std::string& lit) {
        skip_ws();
        if (text_.compare(pos_, lit.size(), lit) == 0) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    // No whitespace skipping: for the tight 'x.(' and 'P<>' forms.
    bool accept_here(const std::string& lit) {
        if (text_.compare(pos_, lit.size(), lit) == 0) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    void expect(const std::string& lit, const std::string& context) {
        if (!accept(lit))
            fail("expected '" + lit + "' " + context);
    }

    // Identifier with embedded dots; a dot immediately followed by '(' is
    // left in place for the freeze-quantifier syntax.
    std::string ident() {
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_]))
            fail("expected an identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            if (text_[pos_] == '.' && pos_ + 1 < text_.size() &&
                text_[pos_ + 1] == '(')
                break;
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    Interval interval_literal() {
        skip_ws();
        std::size_t n = interval_span(text_, pos_);
        if (n == 0)
            fail("expected an interval");
        std::size_t start = pos_;
        pos_ += n;
        try {
            return parse_interval(text_.substr(start, n));
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    // Balanced group between open/close, interval literals skipped
    // atomically; returns the contents.
    std::string group(char open, char close) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != open)
            fail(std::string("expected '") + open + "'");
        std::size_t depth = 0, start = ++pos_;
        while (pos_ < text_.size()) {
            if (std::size_t n = interval_span(text_, pos_)) {
                pos_ += n;
                continue;
            }
            char c = text_[pos_];
            if (c == open) {
                ++depth;
            } else if (c == close) {
                if (depth == 0) {
                    std::string body = text_.substr(start, pos_ - start);
                    ++pos_;
                    return body;
                }
                --depth;
            }
            ++pos_;
        }
        fail(std::string("unterminated '") + open + "'");
    }

    [[noreturn]] void fail(const std::string& msg) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("parse error at " + std::to_string(line) + ":" +
                    std::to_string(col) + ": " + msg);
    }

    std::size_t save() const { return pos_; }
    void restore(std::size_t p) { pos_ = p; }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

SymbolicNfa parse_automaton_impl(const std::string& text,
                                 const std::vector<Formula>* forced_sset);

class FormulaParser {
public:
    explicit FormulaParser(std::string text)
        : text_(std::move(text)), cur_(text_) {}

    Formula parse_complete() {
        Formula f = parse_iff();
        if (!cur_.eof())
            cur_.fail("unexpected trailing input");
        return f;
    }

private:
    std::string text_;
    Cursor cur_;

    std::optional<Interval> modal_interval() {
        if (cur_.peek() != '[')
            return std::nullopt;
        cur_.expect("[", "before modal interval");
        Interval i = cur_.interval_literal();
        cur_.expect("]", "after modal interval");
        return i;
    }

    Formula parse_iff() {
        Formula a = parse_implies();
        if (cur_.accept("<->"))
            return f_iff(std::move(a), parse_iff());
        return a;
    }

    Formula parse_implies() {
        Formula a = parse_or();
        if (cur_.accept("->"))
            return f_implies(std::move(a), parse_implies());
        return a;
    }

    Formula parse_or() {
        std::vector<Formula> kids{parse_and()};
        while (cur_.peek() == '|') {
            cur_.accept("|");
            kids.push_back(parse_and());
        }
        return f_or(std::move(kids));
    }

    Formula parse_and() {
        std::vector<Formula> kids{parse_until()};
        while (cur_.peek() == '&') {
            cur_.accept("&");
            kids.push_back(parse_until());
        }
        return f_and(std::move(kids));
    }

    Formula parse_until() {
        Formula a = parse_unary();
        std::size_t mark = cur_.save();
        if (ident_start(cur_.peek())) {
            std::string kw = cur_.ident();
            if (kw == "U" || kw == "S" || kw == "Uns" || kw == "Sns") {
                std::optional<Interval> ivl = modal_interval();
                Formula b = parse_until();
                if (kw == "U")
                    return f_until(std::move(a), std::move(b), std::move(ivl));
                if (kw == "S")
                    return f_since(std::move(a), std::move(b), std::move(ivl));
                if (kw == "Uns")
                    return f_until_ns(std::move(a), std::move(b),
                                      std::move(ivl));
                return f_since_ns(std::move(a), std::move(b), std::move(ivl));
            }
            cur_.restore(mark);
        }
        return a;
    }

    Formula prefix_modal(Formula (*make)(Formula, std::optional<Interval>)) {
        std::optional<Interval> ivl = modal_interval();
        Formula a = parse_unary();
        return make(std::move(a), std::move(ivl));
    }

    Formula parse_unary() {
        if (cur_.accept("!"))
            return f_not(parse_unary());
        if (cur_.peek() == '(') {
            cur_.accept("(");
            Formula f = parse_iff();
            cur_.expect(")", "to close '('");
            return f;
        }
        if (!ident_start(cur_.peek()))
            cur_.fail("expected a formula");
        std::string word = cur_.ident();
        if (word == "true")
            return f_true();
        if (word == "false")
            return f_false();
        if (word == "F")
            return prefix_modal(&f_eventually);
        if (word == "G")
            return prefix_modal(&f_box);
        if (word == "O")
            return prefix_modal(&f_next);
        if (word == "Obar")
            return prefix_modal(&f_prev);
        if (word == "PG")
            return prefix_modal(&f_box_past);
        if (word == "P" && cur_.accept_here("<>"))
            return prefix_modal(&f_eventually_past);
        if (word == "Fns" || word == "Gns") {
            if (cur_.peek() == '[')
                cur_.fail("'" + word + "' does not take an interval");
            Formula a = parse_unary();
            return word == "Fns" ? f_eventually_ns(std::move(a))
                                 : f_always_ns(std::move(a));
        }
        if (word == "T") {
            cur_.expect("-", "in constraint 'T-x in I'");
            std::string var = cur_.ident();
            if (keywords.count(var))
                cur_.fail("'" + var + "' is reserved");
            cur_.expect("in", "in constraint");
            return f_tmx(var, cur_.interval_literal());
        }
        if (word == "Rat" || word == "FRat" || word == "PRat")
            return parse_rat(word);
        if (word == "Fk" || word == "Pk")
            return parse_pnueli(word);
        if (keywords.count(word))
            cur_.fail("'" + word + "' cannot start a formula here");
        // freeze, a constraint on this variable, or a plain atom
        if (cur_.accept_here(".(")) {
            Formula body = parse_iff();
            cur_.expect(")", "to close freeze body");
            return f_freeze(word, std::move(body));
        }
        if (cur_.at_constraint_minus()) {
            cur_.accept("-");
            std::string t = cur_.ident();
            if (t != "T")
                cur_.fail("expected 'T' in constraint 'x-T in I'");
            cur_.expect("in", "in constraint");
            return f_xmt(word, cur_.interval_literal());
        }
        {
            std::size_t mark = cur_.save();
            if (ident_start(cur_.peek()) && cur_.ident() == "in")
                return f_tmx(word, cur_.interval_literal());
            cur_.restore(mark);
        }
        return f_atom(word);
    }

    Formula parse_rat(const std::string& word) {
        cur_.expect("[", "before interval of " + word);
        Interval ivl = cur_.interval_literal();
        cur_.expect("]", "after interval of " + word);
        std::string body = cur_.group('{', '}');
        std::vector<Formula> decl = parse_sdecl();
        SymbolicNfa a = automaton_or_regex(body, decl);
        if (word == "Rat")
            return f_rat(ivl, std::move(a));
        if (word == "FRat")
            return f_frat(ivl, std::move(a));
        return f_prat(ivl, std::move(a));
    }

    Formula parse_pnueli(const std::string& word) {
        cur_.expect("[", "before intervals of " + word);
        std::vector<Interval> ivls{cur_.interval_literal()};
        while (cur_.accept(";"))
            ivls.push_back(cur_.interval_literal());
        cur_.expect("]", "after intervals of " + word);
        std::string body = cur_.group('{', '}');
        std::vector<Formula> decl = parse_sdecl();
        std::vector<std::string> slots;
        for (const auto& s : split_top_level(body, '|'))
            slots.push_back(trim(s));
        if (decl.empty()) {
            // shared alphabet: union of letters across every slot
            std::vector<Formula> all;
            for (const auto& s : slots)
                for (auto& f : letters_used(s))
                    all.push_back(std::move(f));
            decl = canonical_sset(std::move(all));
        }
        std::vector<SymbolicNfa> as;
        for (const auto& s : slots)
            as.push_back(automaton_or_regex(s, decl));
        if (word == "Fk")
            return f_fk(std::move(ivls), std::move(as));
        return f_pk(std::move(ivls), std::move(as));
    }

    std::vector<Formula> parse_sdecl() {
        if (cur_.peek() != '(')
            return {};
        std::string body = cur_.group('(', ')');
        std::vector<Formula> out;
        for (const auto& piece : split_top_level(body, ','))
            out.push_back(FormulaParser(trim(piece)).parse_complete());
        return canonical_sset(std::move(out));
    }

    static bool looks_like_automaton(const std::string& body) {
        std::string t = trim(body);
        return t.rfind("S:", 0) == 0 || t.rfind("states:", 0) == 0;
    }

    static std::vector<Formula> letters_used(const std::string& body) {
        if (looks_like_automaton(body))
            return parse_automaton_impl(body, nullptr).sset();
        return regex_letter_formulas(body);
    }

    static SymbolicNfa automaton_or_regex(const std::string& body,
                                          const std::vector<Formula>& decl) {
        if (looks_like_automaton(body))
            return parse_automaton_impl(body, decl.empty() ? nullptr : &decl);
        std::vector<Formula> s = decl;
        if (s.empty())
            s = canonical_sset(regex_letter_formulas(body));
        return compile_regex(body, std::move(s));
    }

public:
    static std::vector<Formula> regex_letter_formulas(const std::string& body);
};

class RegexParser {
public:
    RegexParser(std::string text, std::vector<Formula> sset)
        : text_(std::move(text)), cur_(text_), s_(std::move(sset)) {}

    SymbolicNfa compile() {
        SymbolicNfa a = parse_union();
        if (!cur_.eof())
            cur_.fail("unexpected trailing input in regex");
        return prune_unreachable(a);
    }

private:
    std::string text_;
    Cursor cur_;
    std::vector<Formula> s_;

    SymbolicNfa parse_union() {
        SymbolicNfa a = parse_concat();
        while (cur_.accept("+"))
            a = nfa_union(a, parse_concat());
        return a;
    }

    SymbolicNfa parse_concat() {
        SymbolicNfa a = parse_star();
        while (cur_.accept("."))
            a = nfa_concat(a, parse_star());
        return a;
    }

    SymbolicNfa parse_star() {
        SymbolicNfa a = parse_base();
        while (cur_.accept("*"))
            a = nfa_star(a);
        return a;
    }

    SymbolicNfa parse_base() {
        if (cur_.accept("0"))
            return empty_language(s_);
        if (cur_.accept("1"))
            return epsilon_only(s_);
        if (cur_.peek() == '(') {
            cur_.accept("(");
            SymbolicNfa a = parse_union();
            cur_.expect(")", "to close regex group");
            return a;
        }
        if (cur_.peek() == '{') {
            std::string body = cur_.group('{', '}');
            Letter letter = 0;
            for (const auto& piece : split_top_level(body, ',')) {
                std::string t = trim(piece);
                if (t.empty())
                    continue;
                Formula f = FormulaParser(t).parse_complete();
                auto it = std::find_if(s_.begin(), s_.end(),
                                       [&](const Formula& g) {
                                           return formula_equal(f, g);
                                       });
                if (it == s_.end())
                    cur_.fail("letter formula '" + t +
                              "' is not in the formula set");
                letter |= Letter(1) << (it - s_.begin());
            }
            return letter_nfa(s_, letter);
        }
        cur_.fail("expected a regex atom");
    }
};

std::vector<Formula> FormulaParser::regex_letter_formulas(
    const std::string& body) {
    // collect the {...} letter groups, which sit at brace depth one
    std::vector<Formula> out;
    int brace = 0;
    std::string cur;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (std::size_t n = interval_span(body, i)) {
            if (brace > 0)
                cur += body.substr(i, n);
            i += n - 1;
            continue;
        }
        char c = body[i];
        if (c == '{') {
            if (brace == 0)
                cur.clear();
            else
                cur += c;
            ++brace;
        } else if (c == '}') {
            --brace;
            if (brace == 0) {
                for (const auto& piece : split_top_level(cur, ',')) {
                    std::string t = trim(piece);
                    if (!t.empty())
                        out.push_back(FormulaParser(t).parse_complete());
                }
            } else {
                cur += c;
            }
        } else if (brace > 0) {
            cur += c;
        }
    }
    return out;
}

void check_closed(const Formula& f, std::set<std::string> bound) {
    switch (f->kind) {
    case Kind::TmX:
    case Kind::XmT:
        if (!bound.count(f->name))
            throw Error("clock variable '" + f->name +
                        "' is not bound by any freeze quantifier");
        return;
    case Kind::Freeze:
        bound.insert(f->name);
        check_closed(f->kids[0], std::move(bound));
        return;
    default:
        for (const auto& k : f->kids)
            check_closed(k, bound);
        // formula-set members are independent top-level formulas
        for (const auto& a : f->automata)
            for (const auto& s : a.sset())
                check_closed(s, {});
    }
}

SymbolicNfa parse_automaton_impl(const std::string& text,
                                 const std::vector<Formula>* forced_sset) {
    std::vector<std::string> sections;
    for (const auto& piece : split_top_level(text, ';', true)) {
        std::string t = trim(piece);
        if (!t.empty() && t[0] != '#')
            sections.push_back(t);
    }
    std::string s_line, states_line, init_line, final_line;
    bool have_s = false, have_final = false;
    std::vector<std::string> transition_lines;
    for (const auto& sec : sections) {
        if (sec.rfind("S:", 0) == 0) {
            s_line = trim(sec.substr(2));
            have_s = true;
        } else if (sec.rfind("states:", 0) == 0)
            states_line = trim(sec.substr(7));
        else if (sec.rfind("init:", 0) == 0)
            init_line = trim(sec.substr(5));
        else if (sec.rfind("final:", 0) == 0) {
            final_line = trim(sec.substr(6));
            have_final = true;
        } else
            transition_lines.push_back(sec);
    }
    if (states_line.empty())
        throw Error("automaton needs a 'states:' line");
    if (init_line.empty())
        throw Error("automaton needs an 'init:' line");
    if (!have_final)
        throw Error("automaton needs a 'final:' line");

    std::vector<std::string> names;
    {
        std::istringstream in(states_line);
        std::string w;
        while (in >> w)
            names.push_back(w);
    }
    auto state_index = [&](const std::string& n) -> std::size_t {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end())
            throw Error("unknown state '" + n + "'");
        return std::size_t(it - names.begin());
    };

    struct RawTransition {
        std::string from, letter, to;
    };
    std::vector<RawTransition> raw;
    for (const auto& line : transition_lines) {
        std::size_t arrow_open = line.find("-{");
        std::size_t arrow_close = line.rfind("}->");
        if (arrow_open == std::string::npos ||
            arrow_close == std::string::npos || arrow_close < arrow_open)
            throw Error("malformed transition '" + line +
                        "', expected \"q -{...}-> q'\"");
        raw.push_back(
            {trim(line.substr(0, arrow_open)),
             line.substr(arrow_open + 2, arrow_close - arrow_open - 2),
             trim(line.substr(arrow_close + 3))});
    }

    auto parse_letter_formulas = [&](const std::string& body) {
        std::vector<Formula> fs;
        for (const auto& piece : split_top_level(body, ',')) {
            std::string t = trim(piece);
            if (!t.empty())
                fs.push_back(FormulaParser(t).parse_complete());
        }
        return fs;
    };

    std::vector<Formula> sset;
    if (have_s) {
        sset = canonical_sset(parse_letter_formulas(s_line));
        if (forced_sset && !same_sset(sset, *forced_sset))
            throw Error(
                "automaton formula set differs from the declared formula set");
    } else if (forced_sset) {
        sset = *forced_sset;
    } else {
        std::vector<Formula> all;
        for (const auto& t : raw)
            for (auto& f : parse_letter_formulas(t.letter))
                all.push_back(std::move(f));
        sset = canonical_sset(std::move(all));
    }

    auto resolve_letter = [&](const std::string& body) {
        Letter letter = 0;
        for (const auto& f : parse_letter_formulas(body)) {
            auto it =
                std::find_if(sset.begin(), sset.end(), [&](const Formula& g) {
                    return formula_equal(f, g);
                });
            if (it == sset.end())
                throw Error("letter formula '" + format_formula(f) +
                            "' is not in the formula set");
            letter |= Letter(1) << (it - sset.begin());
        }
        return letter;
    };

    std::vector<Transition> ts;
    for (const auto& t : raw)
        ts.push_back(
            {state_index(t.from), resolve_letter(t.letter), state_index(t.to)});
    std::vector<std::size_t> finals;
    {
        std::istringstream in(final_line);
        std::string w;
        while (in >> w)
            finals.push_back(state_index(w));
    }
    // resolve before the constructor call: the moved-from name list must not
    // be read while the argument list is being evaluated
    std::size_t num_states = names.size();
    std::size_t init = state_index(init_line);
    return SymbolicNfa(std::move(sset), num_states, init, std::move(finals),
                       std::move(ts), std::move(names));
}

} // namespace

Formula parse_formula(const std::string& text) {
    Formula f = FormulaParser(text).parse_complete();
    check_closed(f, {});
    return f;
}

SymbolicNfa compile_regex(const std::string& text, std::vector<Formula> sset) {
    return RegexParser(text, canonical_sset(std::move(sset))).compile();
}

SymbolicNfa parse_automaton(const std::string& text) {
    return parse_automaton_impl(text, nullptr);
}

} // namespace tlkit
