#pragma once

#include <tcsp/structure.hpp>

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tcsp {

/// Quantifier-free formula over the relations of a base structure and
/// equality, with free variables x1..xk (stored 0-based).
///
/// Text syntax: `xI < xJ`, `xI = xJ`, `xI != xJ`, `part(J)(xI)`,
/// `Name(xI, ...)`, `true`, `false`, combined with `!`, `&`, `|` and
/// parentheses (`!` binds tightest, then `&`, then `|`). `xI < xJ` refers to
/// the base symbol `<` and `part(J)(xI)` to the base symbol `PJ`.
class Formula {
public:
    enum class Kind { True, False, Equal, Atom, Not, And, Or };

    static Formula truth();
    static Formula falsity();
    static Formula equal(std::size_t lhs, std::size_t rhs);
    static Formula atom(std::string symbol, std::vector<std::size_t> variables);
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> parts);
    static Formula disjunction(std::vector<Formula> parts);

    Kind kind() const noexcept { return kind_; }
    const std::string& symbol() const noexcept { return symbol_; }
    const std::vector<std::size_t>& variables() const noexcept { return variables_; }
    const std::vector<Formula>& children() const noexcept { return children_; }

    /// Number of free variables needed, i.e. the largest index used plus one.
    std::size_t variable_bound() const;
    /// Relation symbols mentioned anywhere in the formula.
    std::set<std::string> symbols() const;
    bool uses_only_equality() const { return symbols().empty(); }

    /// Truth value under `values` (values[i] is the element assigned to x(i+1)).
    bool evaluate(std::span<const Element> values, const Structure& base) const;

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    Kind kind_ = Kind::True;
    std::string symbol_;
    std::vector<std::size_t> variables_;
    std::vector<Formula> children_;
};

Formula parse_formula(std::string_view text);
std::string to_string(const Formula& f);

/// All k-tuples over the base domain satisfying `def`. Throws when `def`
/// mentions a symbol the base lacks, uses it with the wrong arity, or refers
/// to a variable beyond x_k.
Relation evaluate_definition(const Formula& def, const Structure& base, std::size_t arity);

} // namespace tcsp
