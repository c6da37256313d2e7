#include "lexer.hpp"

#include <tcsp/error.hpp>
#include <tcsp/text_io.hpp>

#include <fstream>
#include <sstream>

namespace tcsp {

using detail::Lexer;
using detail::TokenKind;

namespace {

bool plain_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

std::string symbol_name(Lexer& lex)
{
    if (lex.peek().kind == TokenKind::Symbol && lex.peek().text == "<")
        return lex.next().text;
    return lex.expect_identifier("relation symbol");
}

Signature signature_body(Lexer& lex)
{
    Signature sig;
    lex.expect_symbol("(");
    if (lex.accept_symbol(")"))
        return sig;
    do {
        const auto at = lex.peek();
        std::string name = symbol_name(lex);
        lex.expect_symbol("/");
        const std::size_t arity = lex.expect_integer("arity");
        if (arity == 0)
            Lexer::fail("arity of '" + name + "' must be at least 1", at);
        if (sig.find(name))
            Lexer::fail("duplicate symbol '" + name + "'", at);
        sig.add(std::move(name), arity);
    } while (lex.accept_symbol(","));
    lex.expect_symbol(")");
    return sig;
}

std::string quote(const std::string& label)
{
    if (label.find('"') != std::string::npos || label.find('\n') != std::string::npos)
        throw Error("label '" + label + "' cannot be written: it contains a quote or newline");
    return "\"" + label + "\"";
}

NamedStructure structure_body(Lexer& lex)
{
    lex.expect_keyword("structure");
    std::string name = lex.expect_identifier("structure name");
    lex.expect_keyword("over");
    Signature sig = signature_body(lex);
    lex.expect_keyword("domain");
    const std::size_t size = lex.expect_integer("domain size");

    std::vector<std::string> labels;
    if (lex.accept_identifier("labels")) {
        lex.expect_symbol(":");
        const auto at = lex.peek();
        while (lex.peek().kind == TokenKind::String)
            labels.push_back(lex.next().text);
        if (labels.size() != size)
            Lexer::fail("expected " + std::to_string(size) + " labels, found " + std::to_string(labels.size()), at);
    }

    std::vector<std::vector<Element>> flats(sig.size());
    std::vector<bool> seen(sig.size(), false);
    while (lex.is_identifier("rel")) {
        lex.next();
        const auto at = lex.peek();
        const std::string rel = symbol_name(lex);
        const auto index = sig.find(rel);
        if (!index)
            Lexer::fail("relation '" + rel + "' is not in the signature", at);
        if (seen[*index])
            Lexer::fail("relation '" + rel + "' listed twice", at);
        seen[*index] = true;
        lex.expect_symbol(":");
        const std::size_t arity = sig[*index].arity;
        while (lex.is_symbol("(")) {
            const auto open = lex.next();
            for (std::size_t i = 0; i < arity; ++i) {
                if (i > 0)
                    lex.expect_symbol(",");
                const auto elem_at = lex.peek();
                const std::size_t e = lex.expect_integer("element id");
                if (e >= size)
                    Lexer::fail("element " + std::to_string(e) + " is outside the domain of size " +
                                    std::to_string(size),
                        elem_at);
                flats[*index].push_back(static_cast<Element>(e));
            }
            if (!lex.is_symbol(")"))
                Lexer::fail("tuple of '" + rel + "' must have " + std::to_string(arity) + " entries", open);
            lex.next();
        }
    }
    std::vector<Relation> rels;
    for (std::size_t i = 0; i < sig.size(); ++i)
        rels.emplace_back(sig[i].arity, std::move(flats[i]));
    return {std::move(name), Structure(std::move(sig), size, std::move(rels), std::move(labels))};
}

std::string variable_name(Lexer& lex)
{
    const auto at = lex.peek();
    std::string v = lex.expect_identifier("variable");
    if (v == "true" || v == "false" || v == "var")
        Lexer::fail("'" + v + "' cannot be used as a variable name", at);
    return v;
}

} // namespace

std::string format_signature(const Signature& sig)
{
    std::string out = "(";
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += sig[i].name + "/" + std::to_string(sig[i].arity);
    }
    return out + ")";
}

Signature parse_signature(std::string_view text)
{
    Lexer lex(text);
    Signature sig = signature_body(lex);
    if (!lex.at_end())
        lex.fail("unexpected " + Lexer::describe(lex.peek()));
    return sig;
}

std::string format_structure(const Structure& s, std::string_view name)
{
    if (!plain_identifier(name))
        throw Error("structure name '" + std::string(name) + "' is not an identifier");
    std::ostringstream out;
    out << "structure " << name << " over " << format_signature(s.signature()) << "\n";
    out << "domain " << s.domain_size() << "\n";
    if (s.has_labels()) {
        out << "labels:";
        for (const auto& l : s.labels())
            out << " " << quote(l);
        out << "\n";
    }
    for (std::size_t r = 0; r < s.signature().size(); ++r) {
        out << "rel " << s.signature()[r].name << ":";
        for (auto t : s.relation(r)) {
            out << " (";
            for (std::size_t i = 0; i < t.size(); ++i)
                out << (i ? "," : "") << t[i];
            out << ")";
        }
        out << "\n";
    }
    return out.str();
}

std::string format_structures(std::span<const Structure> structures, std::string_view prefix)
{
    std::string out;
    for (std::size_t i = 0; i < structures.size(); ++i) {
        if (i > 0)
            out += "\n";
        out += format_structure(structures[i], std::string(prefix) + std::to_string(i));
    }
    return out;
}

std::vector<NamedStructure> parse_structures(std::string_view text)
{
    Lexer lex(text);
    std::vector<NamedStructure> out;
    while (!lex.at_end()) {
        if (!lex.is_identifier("structure"))
            lex.fail("expected 'structure' but found " + Lexer::describe(lex.peek()));
        out.push_back(structure_body(lex));
    }
    return out;
}

Structure parse_structure(std::string_view text)
{
    auto all = parse_structures(text);
    if (all.size() != 1)
        throw ParseError("expected exactly one structure, found " + std::to_string(all.size()), 1, 1);
    return std::move(all.front().structure);
}

std::string format_instance(const Instance& inst)
{
    validate(inst);
    const auto& names = inst.variables();
    // Variables in first-occurrence order; a declaration is needed when that
    // order differs from the instance's own.
    std::vector<VarId> order;
    std::vector<bool> seen(names.size(), false);
    auto touch = [&](VarId v) {
        if (!seen[v]) {
            seen[v] = true;
            order.push_back(v);
        }
    };
    std::vector<std::string> parts;
    for (const auto& atom : inst.atoms()) {
        if (const auto* r = std::get_if<RelAtom>(&atom)) {
            std::string s = inst.signature()[r->symbol].name + "(";
            for (std::size_t i = 0; i < r->args.size(); ++i) {
                touch(r->args[i]);
                s += (i ? "," : "") + names[r->args[i]];
            }
            parts.push_back(s + ")");
        } else if (const auto* e = std::get_if<EqAtom>(&atom)) {
            touch(e->lhs);
            touch(e->rhs);
            parts.push_back(names[e->lhs] + " = " + names[e->rhs]);
        } else if (const auto* d = std::get_if<NeqAtom>(&atom)) {
            touch(d->lhs);
            touch(d->rhs);
            parts.push_back(names[d->lhs] + " != " + names[d->rhs]);
        } else {
            parts.push_back("false");
        }
    }
    bool in_order = order.size() == names.size();
    for (std::size_t i = 0; in_order && i < order.size(); ++i)
        in_order = order[i] == i;

    std::string out;
    if (!in_order) {
        out = "var ";
        for (std::size_t i = 0; i < names.size(); ++i)
            out += (i ? ", " : "") + names[i];
        out += ";";
        if (!parts.empty())
            out += " ";
    }
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? "; " : "") + parts[i];
    if (out.empty())
        out = "true";
    return out + "\n";
}

Instance parse_instance(std::string_view text, const Signature& sig)
{
    Lexer lex(text);
    Instance inst(sig);
    if (lex.accept_identifier("var")) {
        do
            inst.variable(variable_name(lex));
        while (lex.accept_symbol(","));
        if (!lex.accept_symbol(";") && !lex.accept_symbol("&") && !lex.at_end())
            lex.fail("expected ';' after the variable declaration but found " + Lexer::describe(lex.peek()));
    }
    while (!lex.at_end()) {
        const auto at = lex.peek();
        if (lex.accept_identifier("false")) {
            inst.bot();
        } else if (lex.accept_identifier("true")) {
        } else {
            if (at.kind != TokenKind::Identifier)
                lex.fail("expected an atom but found " + Lexer::describe(at));
            if (at.text == "var")
                lex.fail("'var' declarations must come first");
            std::string head = lex.next().text;
            if (lex.accept_symbol("(")) {
                const auto index = sig.find(head);
                if (!index)
                    Lexer::fail("unknown relation symbol '" + head + "'", at);
                RelAtom atom{*index, {}};
                if (!lex.is_symbol(")")) {
                    do
                        atom.args.push_back(inst.variable(variable_name(lex)));
                    while (lex.accept_symbol(","));
                }
                lex.expect_symbol(")");
                if (atom.args.size() != sig[*index].arity)
                    Lexer::fail("arity mismatch: '" + head + "' expects " + std::to_string(sig[*index].arity) +
                                    " arguments, got " + std::to_string(atom.args.size()),
                        at);
                inst.add(std::move(atom));
            } else {
                if (head == "true" || head == "false")
                    Lexer::fail("'" + head + "' cannot be used as a variable name", at);
                const VarId x = inst.variable(head);
                if (lex.accept_symbol("=")) {
                    inst.add(EqAtom{x, inst.variable(variable_name(lex))});
                } else if (lex.accept_symbol("!=")) {
                    inst.add(NeqAtom{x, inst.variable(variable_name(lex))});
                } else {
                    lex.fail("expected '(', '=' or '!=' after '" + head + "' but found " + Lexer::describe(lex.peek()));
                }
            }
        }
        if (lex.at_end())
            break;
        if (!lex.accept_symbol(";") && !lex.accept_symbol("&"))
            lex.fail("expected ';' or '&' but found " + Lexer::describe(lex.peek()));
    }
    return inst;
}

std::string format_operation(const OperationTable& f)
{
    f.check();
    std::ostringstream out;
    out << "operation " << f.arity << " " << f.domain_size << "\n";
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        out << f.values[i];
        const bool row_end = (i + 1) % f.domain_size == 0;
        out << (row_end ? "\n" : " ");
    }
    return out.str();
}

OperationTable parse_operation(std::string_view text)
{
    Lexer lex(text);
    lex.expect_keyword("operation");
    OperationTable f;
    const auto arity_at = lex.peek();
    f.arity = lex.expect_integer("arity");
    if (f.arity == 0)
        Lexer::fail("arity must be at least 1", arity_at);
    f.domain_size = lex.expect_integer("domain size");
    while (!lex.at_end()) {
        const auto at = lex.peek();
        const std::size_t v = lex.expect_integer("value");
        if (v >= f.domain_size)
            Lexer::fail("value " + std::to_string(v) + " is outside the domain", at);
        f.values.push_back(static_cast<Element>(v));
    }
    try {
        f.check();
    } catch (const Error& e) {
        throw ParseError(e.what(), 1, 1);
    }
    return f;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace tcsp
