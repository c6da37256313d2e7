#include "lexer.hpp"

#include <tcsp/error.hpp>
#include <tcsp/text_io.hpp>
#include <tcsp/theory_spec.hpp>

namespace tcsp {

using detail::Lexer;
using detail::Token;
using detail::TokenKind;

bool TheorySpec::contains(std::string_view name) const
{
    return theories_.find(name) != theories_.end();
}

const SampleFamily& TheorySpec::get(std::string_view name) const
{
    auto it = theories_.find(name);
    if (it == theories_.end())
        throw Error("theory '" + std::string(name) + "' is not defined");
    return it->second;
}

const SampleFamily& TheorySpec::last() const
{
    if (names_.empty())
        throw Error("the theory specification defines no theory");
    return get(names_.back());
}

void TheorySpec::define(std::string name, SampleFamily family)
{
    if (contains(name))
        throw Error("theory '" + name + "' is defined twice");
    theories_.emplace(name, family.renamed(name));
    names_.push_back(std::move(name));
}

namespace {

enum class DefBase { Order, Partition, Equality };

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : lex_(text) {}

    TheorySpec parse()
    {
        while (!lex_.at_end()) {
            lex_.expect_keyword("theory");
            const Token at = lex_.peek();
            std::string name = lex_.expect_identifier("theory name");
            if (spec_.contains(name))
                Lexer::fail("theory '" + name + "' is defined twice", at);
            lex_.expect_symbol("=");
            SampleFamily family = expression();
            spec_.define(std::move(name), std::move(family));
            lex_.accept_symbol(";");
        }
        return std::move(spec_);
    }

private:
    template <class F>
    auto at_token(const Token& at, F&& f) -> decltype(f())
    {
        try {
            return f();
        } catch (const Error& e) {
            Lexer::fail(e.what(), at);
        }
    }

    const SampleFamily& reference()
    {
        const Token at = lex_.peek();
        const std::string name = lex_.expect_identifier("theory name");
        if (!spec_.contains(name))
            Lexer::fail("theory '" + name + "' is not defined before use", at);
        return spec_.get(name);
    }

    std::vector<RelationDefinition> definitions(DefBase base, std::size_t parts)
    {
        std::vector<RelationDefinition> defs;
        lex_.expect_symbol("{");
        while (!lex_.accept_symbol("}")) {
            lex_.expect_keyword("rel");
            const Token at = lex_.peek();
            std::string name = lex_.expect_identifier("relation name");
            for (const auto& d : defs)
                if (d.name == name)
                    Lexer::fail("relation '" + name + "' defined twice", at);
            lex_.expect_symbol("/");
            const Token arity_at = lex_.peek();
            const std::size_t arity = lex_.expect_integer("arity");
            if (arity == 0)
                Lexer::fail("arity must be at least 1", arity_at);
            lex_.expect_symbol("=");
            const Token body = lex_.peek();
            RelationDefinition def;
            if (base == DefBase::Order && lex_.accept_identifier("base")) {
                if (arity != 2)
                    Lexer::fail("'base' denotes the binary order; declare it with arity 2", body);
                def = order_relation(name);
            } else if (base == DefBase::Partition && lex_.accept_identifier("part")) {
                lex_.expect_symbol("(");
                const Token j_at = lex_.peek();
                const std::size_t j = lex_.expect_integer("part number");
                lex_.expect_symbol(")");
                if (j == 0 || j > parts)
                    Lexer::fail("part(" + std::to_string(j) + ") is outside 1.." + std::to_string(parts), j_at);
                if (arity != 1)
                    Lexer::fail("part(J) is unary; declare it with arity 1", body);
                def = part_relation(name, j);
            } else {
                const std::string text = lex_.expect_string();
                Formula f = at_token(body, [&] { return parse_formula(text); });
                if (f.variable_bound() > arity)
                    Lexer::fail("definition uses x" + std::to_string(f.variable_bound()) + " but the arity is " +
                                    std::to_string(arity),
                        body);
                for (const auto& s : f.symbols()) {
                    const bool ok = (base == DefBase::Order && s == "<") ||
                                    (base == DefBase::Partition && s.size() > 1 && s[0] == 'P' &&
                                        s.find_first_not_of("0123456789", 1) == std::string::npos &&
                                        std::stoull(s.substr(1)) >= 1 && std::stoull(s.substr(1)) <= parts);
                    if (!ok)
                        Lexer::fail("definition of '" + name + "' may not use '" + s + "' here", body);
                }
                def = RelationDefinition{name, arity, std::move(f)};
            }
            def.name = name;
            def.arity = arity;
            defs.push_back(std::move(def));
            if (!lex_.accept_symbol(";") && !lex_.is_symbol("}"))
                lex_.fail("expected ';' or '}' but found " + Lexer::describe(lex_.peek()));
        }
        return defs;
    }

    SampleFamily explicit_family(const Token& at)
    {
        std::optional<Signature> sig;
        SamplingFlags flags;
        if (lex_.accept_identifier("over"))
            sig = signature_from_text();
        for (;;) {
            if (lex_.accept_identifier("equality_matching"))
                flags.equality_matching = true;
            else if (lex_.accept_identifier("no_pp_algebraicity"))
                flags.no_pp_algebraicity = true;
            else
                break;
        }
        if (!lex_.is_symbol("{"))
            lex_.fail("expected '{' but found " + Lexer::describe(lex_.peek()));
        const auto [raw, first_line] = lex_.raw_until('}');
        std::vector<Structure> structures;
        {
            // Leading newlines keep line numbers pointing into the spec file.
            std::string padded(first_line - 1, '\n');
            padded += " ";
            padded += raw.substr(1);
            for (auto& named : parse_structures(padded))
                structures.push_back(std::move(named.structure));
        }
        if (!sig) {
            if (structures.empty())
                Lexer::fail("an empty explicit sampling needs 'over (signature)'", at);
            sig = structures.front().signature();
        }
        return at_token(at, [&] { return explicit_sampling("explicit", *sig, std::move(structures), flags); });
    }

    Signature signature_from_text()
    {
        const Token open = lex_.peek();
        if (!lex_.is_symbol("("))
            lex_.fail("expected '(' but found " + Lexer::describe(open));
        std::string text;
        // Re-tokenize the parenthesized signature through the text format.
        int depth = 0;
        do {
            const Token t = lex_.next();
            if (t.kind == TokenKind::End)
                Lexer::fail("unterminated signature", open);
            if (t.kind == TokenKind::Symbol && t.text == "(")
                ++depth;
            if (t.kind == TokenKind::Symbol && t.text == ")")
                --depth;
            text += t.text + " ";
        } while (depth > 0);
        return at_token(open, [&] { return parse_signature(text); });
    }

    SampleFamily expression()
    {
        const Token at = lex_.peek();
        const std::string head = lex_.expect_identifier("theory expression");
        if (head == "dense_order") {
            auto defs = definitions(DefBase::Order, 0);
            return at_token(at, [&] { return dense_order_sampling(std::move(defs)); });
        }
        if (head == "partition") {
            lex_.expect_symbol("(");
            const Token m_at = lex_.peek();
            const std::size_t m = lex_.expect_integer("number of parts");
            lex_.expect_symbol(")");
            if (m == 0)
                Lexer::fail("a partition needs at least one part", m_at);
            std::vector<RelationDefinition> defs;
            if (lex_.is_symbol("{"))
                defs = definitions(DefBase::Partition, m);
            return at_token(at, [&] { return colored_partition_sampling(m, std::move(defs)); });
        }
        if (head == "successor")
            return successor_sampling();
        if (head == "alternating_cycles")
            return alternating_cycles_sampling();
        if (head == "succ2col")
            return succ2col_sampling();
        if (head == "no_jhp")
            return no_jhp_sampling();
        if (head == "explicit")
            return explicit_family(at);
        if (head == "from_decider") {
            lex_.expect_symbol("(");
            const Token ref_at = lex_.peek();
            const SampleFamily& base = reference();
            lex_.expect_symbol(",");
            const std::size_t max_n = lex_.expect_integer("bound");
            lex_.expect_symbol(")");
            if (!base.has_decider())
                Lexer::fail("theory '" + base.name() + "' has no reference decider", ref_at);
            return sampling_from_decider("from_decider", base.signature(), base.decider(), max_n);
        }
        if (head == "union") {
            lex_.expect_symbol("(");
            const SampleFamily first = reference();
            lex_.expect_symbol(",");
            const SampleFamily second = reference();
            lex_.expect_symbol(")");
            return at_token(at, [&] { return product_sampling(first, second); });
        }
        if (head == "expand") {
            lex_.expect_symbol("(");
            const SampleFamily base = reference();
            lex_.expect_symbol(")");
            auto defs = definitions(DefBase::Equality, 0);
            return at_token(at, [&] { return equality_expansion(base, std::move(defs)); });
        }
        if (spec_.contains(head))
            return spec_.get(head);
        Lexer::fail("unknown theory or builtin '" + head + "'", at);
    }

    Lexer lex_;
    TheorySpec spec_;
};

} // namespace

TheorySpec parse_theory_spec(std::string_view text)
{
    return SpecParser(text).parse();
}

} // namespace tcsp
