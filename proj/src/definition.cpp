#include "lexer.hpp"

#include <tcsp/definition.hpp>
#include <tcsp/error.hpp>

#include <algorithm>

namespace tcsp {

Formula Formula::truth()
{
    return Formula();
}

Formula Formula::falsity()
{
    Formula f;
    f.kind_ = Kind::False;
    return f;
}

Formula Formula::equal(std::size_t lhs, std::size_t rhs)
{
    Formula f;
    f.kind_ = Kind::Equal;
    f.variables_ = {lhs, rhs};
    return f;
}

Formula Formula::atom(std::string symbol, std::vector<std::size_t> variables)
{
    if (variables.empty())
        throw Error("atom '" + symbol + "' needs at least one argument");
    Formula f;
    f.kind_ = Kind::Atom;
    f.symbol_ = std::move(symbol);
    f.variables_ = std::move(variables);
    return f;
}

Formula Formula::negation(Formula g)
{
    Formula f;
    f.kind_ = Kind::Not;
    f.children_.push_back(std::move(g));
    return f;
}

Formula Formula::conjunction(std::vector<Formula> parts)
{
    if (parts.size() == 1)
        return std::move(parts.front());
    Formula f;
    f.kind_ = Kind::And;
    f.children_ = std::move(parts);
    return f;
}

Formula Formula::disjunction(std::vector<Formula> parts)
{
    if (parts.size() == 1)
        return std::move(parts.front());
    Formula f;
    f.kind_ = Kind::Or;
    f.children_ = std::move(parts);
    return f;
}

std::size_t Formula::variable_bound() const
{
    std::size_t bound = 0;
    for (auto v : variables_)
        bound = std::max(bound, v + 1);
    for (const auto& c : children_)
        bound = std::max(bound, c.variable_bound());
    return bound;
}

std::set<std::string> Formula::symbols() const
{
    std::set<std::string> out;
    if (kind_ == Kind::Atom)
        out.insert(symbol_);
    for (const auto& c : children_) {
        auto sub = c.symbols();
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

bool Formula::evaluate(std::span<const Element> values, const Structure& base) const
{
    switch (kind_) {
    case Kind::True:
        return true;
    case Kind::False:
        return false;
    case Kind::Equal:
        return values[variables_[0]] == values[variables_[1]];
    case Kind::Atom: {
        Element buffer[8];
        Tuple heap;
        std::span<Element> t;
        if (variables_.size() <= 8) {
            t = std::span<Element>(buffer, variables_.size());
        } else {
            heap.resize(variables_.size());
            t = heap;
        }
        for (std::size_t i = 0; i < variables_.size(); ++i)
            t[i] = values[variables_[i]];
        return base.relation(symbol_).contains(t);
    }
    case Kind::Not:
        return !children_.front().evaluate(values, base);
    case Kind::And:
        return std::all_of(children_.begin(), children_.end(), [&](const Formula& c) { return c.evaluate(values, base); });
    case Kind::Or:
        return std::any_of(children_.begin(), children_.end(), [&](const Formula& c) { return c.evaluate(values, base); });
    }
    return false;
}

// ---------------------------------------------------------------------------
// Text syntax

namespace {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : lex_(text) {}

    Formula parse()
    {
        Formula f = disjunction();
        if (!lex_.at_end())
            lex_.fail("unexpected " + detail::Lexer::describe(lex_.peek()));
        return f;
    }

private:
    Formula disjunction()
    {
        std::vector<Formula> parts{conjunction()};
        while (lex_.accept_symbol("|"))
            parts.push_back(conjunction());
        return Formula::disjunction(std::move(parts));
    }

    Formula conjunction()
    {
        std::vector<Formula> parts{unary()};
        while (lex_.accept_symbol("&"))
            parts.push_back(unary());
        return Formula::conjunction(std::move(parts));
    }

    Formula unary()
    {
        if (lex_.accept_symbol("!"))
            return Formula::negation(unary());
        if (lex_.accept_symbol("(")) {
            Formula f = disjunction();
            lex_.expect_symbol(")");
            return f;
        }
        return atom();
    }

    std::size_t variable()
    {
        const detail::Token t = lex_.peek();
        std::string name = lex_.expect_identifier("variable xI");
        auto index = variable_index(name);
        if (!index)
            detail::Lexer::fail("expected a variable of the form xI (I >= 1), found '" + name + "'", t);
        return *index;
    }

    static std::optional<std::size_t> variable_index(std::string_view name)
    {
        if (name.size() < 2 || name[0] != 'x')
            return std::nullopt;
        std::size_t value = 0;
        for (char c : name.substr(1)) {
            if (c < '0' || c > '9')
                return std::nullopt;
            value = value * 10 + static_cast<std::size_t>(c - '0');
        }
        if (value == 0)
            return std::nullopt;
        return value - 1;
    }

    Formula atom()
    {
        const detail::Token t = lex_.peek();
        if (t.kind != detail::TokenKind::Identifier)
            lex_.fail("expected an atom but found " + detail::Lexer::describe(t));
        if (lex_.accept_identifier("true"))
            return Formula::truth();
        if (lex_.accept_identifier("false"))
            return Formula::falsity();
        if (variable_index(t.text)) {
            std::size_t lhs = variable();
            if (lex_.accept_symbol("<"))
                return Formula::atom("<", {lhs, variable()});
            if (lex_.accept_symbol("="))
                return Formula::equal(lhs, variable());
            if (lex_.accept_symbol("!="))
                return Formula::negation(Formula::equal(lhs, variable()));
            lex_.fail("expected '<', '=' or '!=' after a variable");
        }
        std::string name = lex_.next().text;
        if (name == "part") {
            lex_.expect_symbol("(");
            std::size_t part = lex_.expect_integer("part number");
            if (part == 0)
                detail::Lexer::fail("parts are numbered from 1", t);
            lex_.expect_symbol(")");
            lex_.expect_symbol("(");
            std::size_t v = variable();
            lex_.expect_symbol(")");
            return Formula::atom("P" + std::to_string(part), {v});
        }
        lex_.expect_symbol("(");
        std::vector<std::size_t> args{variable()};
        while (lex_.accept_symbol(","))
            args.push_back(variable());
        lex_.expect_symbol(")");
        return Formula::atom(std::move(name), std::move(args));
    }

    detail::Lexer lex_;
};

std::string var_name(std::size_t v)
{
    return "x" + std::to_string(v + 1);
}

std::string wrapped(const Formula& f)
{
    using K = Formula::Kind;
    if (f.kind() == K::And || f.kind() == K::Or)
        return "(" + to_string(f) + ")";
    return to_string(f);
}

} // namespace

Formula parse_formula(std::string_view text)
{
    return FormulaParser(text).parse();
}

std::string to_string(const Formula& f)
{
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True:
        return "true";
    case K::False:
        return "false";
    case K::Equal:
        return var_name(f.variables()[0]) + "=" + var_name(f.variables()[1]);
    case K::Atom: {
        if (f.symbol() == "<" && f.variables().size() == 2)
            return var_name(f.variables()[0]) + "<" + var_name(f.variables()[1]);
        std::string out = f.symbol() + "(";
        for (std::size_t i = 0; i < f.variables().size(); ++i)
            out += (i ? "," : "") + var_name(f.variables()[i]);
        return out + ")";
    }
    case K::Not: {
        const Formula& c = f.children().front();
        if (c.kind() == K::Atom && c.symbol() == "<")
            return "!(" + to_string(c) + ")";
        if (c.kind() == K::Equal)
            return "!(" + to_string(c) + ")";
        return "!" + wrapped(c);
    }
    case K::And:
    case K::Or: {
        std::string out;
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i)
                out += f.kind() == K::And ? " & " : " | ";
            out += wrapped(f.children()[i]);
        }
        return out;
    }
    }
    return {};
}

namespace {

void check_symbols(const Formula& f, const Signature& sig)
{
    if (f.kind() == Formula::Kind::Atom) {
        auto s = sig.find(f.symbol());
        if (!s)
            throw Error("definition mentions unknown symbol '" + f.symbol() + "'");
        if (sig[*s].arity != f.variables().size())
            throw Error("definition uses '" + f.symbol() + "' with " + std::to_string(f.variables().size()) +
                        " arguments, but its arity is " + std::to_string(sig[*s].arity));
    }
    for (const auto& c : f.children())
        check_symbols(c, sig);
}

} // namespace

Relation evaluate_definition(const Formula& def, const Structure& base, std::size_t arity)
{
    if (arity == 0)
        throw Error("defined relations need arity >= 1");
    if (def.variable_bound() > arity)
        throw Error("definition refers to x" + std::to_string(def.variable_bound()) + " but the arity is " +
                    std::to_string(arity));
    check_symbols(def, base.signature());

    std::vector<Element> flat;
    const std::size_t m = base.domain_size();
    if (m == 0)
        return Relation(arity);
    Tuple t(arity, 0);
    for (;;) {
        if (def.evaluate(t, base))
            flat.insert(flat.end(), t.begin(), t.end());
        // Odometer over domain^arity in lexicographic order.
        std::size_t i = arity;
        while (i > 0 && ++t[i - 1] == m) {
            t[i - 1] = 0;
            --i;
        }
        if (i == 0)
            break;
    }
    return Relation(arity, std::move(flat));
}

} // namespace tcsp
