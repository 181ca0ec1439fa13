#pragma once

#include <cstddef>
#include <memory>
#include <string>

namespace tlkit {

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

bool formula_equal(const Formula& a, const Formula& b);
bool formula_less(const Formula& a, const Formula& b);
std::size_t formula_hash(const Formula& f);
std::string format_formula(const Formula& f);
// Wraps in parentheses unless the formula is self-delimited (atom, constant,
// freeze, constraint, bracketed modality); used inside automaton letters and
// formula-set lists so commas and bars split unambiguously.
std::string format_formula_atomic(const Formula& f);

} // namespace tlkit
