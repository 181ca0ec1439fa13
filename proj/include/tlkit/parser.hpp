#pragma once

#include "tlkit/automaton.hpp"
#include "tlkit/formula.hpp"

#include <string>

namespace tlkit {

// Grammar, loosest binding first:
//   iff     := implies ('<->' iff)?
//   implies := or ('->' implies)?
//   or      := and ('|' and)*
//   and     := until ('&' until)*
//   until   := unary (('U'|'S'|'Uns'|'Sns') ('[' interval ']')? until)?
//   unary   := '!' unary
//            | ('F'|'G'|'O'|'Obar'|'P<>'|'PG') ('[' interval ']')? unary
//            | ('Fns'|'Gns') unary
//            | 'true' | 'false' | '(' iff ')'
//            | 'T' '-' var 'in' interval
//            | var '-' 'T' 'in' interval
//            | var 'in' interval                  (shorthand for T-var in I)
//            | var '.' '(' iff ')'                (freeze)
//            | ('Rat'|'FRat'|'PRat') '[' interval ']' '{' body '}' sdecl?
//            | ('Fk'|'Pk') '[' interval (';' interval)* ']'
//                  '{' slot ('|' slot)* '}' sdecl?
//            | atom
// A body or slot is an automaton description (starts with 'S:' or 'states:')
// or a regular expression: letters '{f,f}' over formulas, '0' (empty
// language), '1' (empty word), '.' concatenation, '+' union, '*' star.
// sdecl := '(' formula (',' formula)* ')' declares the formula set S
// explicitly; otherwise S is the union of the letters used.
// Every clock constraint must sit under a freeze quantifier binding its
// variable; formula-set members are validated as closed formulas themselves.
Formula parse_formula(const std::string& text);

// Text format, sections separated by newlines or top-level ';':
//   S: f1, f2         (optional; default is the union of transition letters)
//   states: q0 q1
//   init: q0
//   final: q0 q1
//   q0 -{f1,f2}-> q1
SymbolicNfa parse_automaton(const std::string& text);

// Standalone regex compiler over an explicit formula set.
SymbolicNfa compile_regex(const std::string& text, std::vector<Formula> sset);

} // namespace tlkit
