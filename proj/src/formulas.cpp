#include "union_find.hpp"

#include <tcsp/error.hpp>
#include <tcsp/formulas.hpp>

#include <algorithm>
#include <numeric>

namespace tcsp {

VarId Instance::variable(std::string_view name)
{
    if (auto v = find_variable(name))
        return *v;
    variables_.emplace_back(name);
    return variables_.size() - 1;
}

std::optional<VarId> Instance::find_variable(std::string_view name) const
{
    auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end())
        return std::nullopt;
    return static_cast<VarId>(it - variables_.begin());
}

Instance& Instance::add(Atom atom)
{
    atoms_.push_back(std::move(atom));
    return *this;
}

Instance& Instance::rel(std::string_view symbol, std::initializer_list<std::string_view> vars)
{
    RelAtom a{signature_.index_of(symbol), {}};
    for (auto v : vars)
        a.args.push_back(variable(v));
    return add(std::move(a));
}

Instance& Instance::rel(std::string_view symbol, const std::vector<std::string>& vars)
{
    RelAtom a{signature_.index_of(symbol), {}};
    for (const auto& v : vars)
        a.args.push_back(variable(v));
    return add(std::move(a));
}

Instance& Instance::eq(std::string_view x, std::string_view y)
{
    VarId a = variable(x);
    return add(EqAtom{a, variable(y)});
}

Instance& Instance::neq(std::string_view x, std::string_view y)
{
    VarId a = variable(x);
    return add(NeqAtom{a, variable(y)});
}

Instance& Instance::bot()
{
    return add(BotAtom{});
}

bool Instance::has_equalities() const
{
    return std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return std::holds_alternative<EqAtom>(a); });
}

bool Instance::has_disequalities() const
{
    return std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return std::holds_alternative<NeqAtom>(a); });
}

bool Instance::has_bot() const
{
    return std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return std::holds_alternative<BotAtom>(a); });
}

Validity validate(const Instance& inst)
{
    const auto n = inst.variable_count();
    auto check_var = [&](VarId v) {
        if (v >= n)
            throw Error("atom refers to undeclared variable id " + std::to_string(v));
    };
    bool bot = false;
    for (const auto& atom : inst.atoms()) {
        if (const auto* r = std::get_if<RelAtom>(&atom)) {
            if (r->symbol >= inst.signature().size())
                throw Error("atom refers to a symbol outside the signature");
            const Symbol& s = inst.signature()[r->symbol];
            if (r->args.size() != s.arity)
                throw Error("arity mismatch: '" + s.name + "' expects " + std::to_string(s.arity) + " arguments, got " +
                            std::to_string(r->args.size()));
            for (auto v : r->args)
                check_var(v);
        } else if (const auto* e = std::get_if<EqAtom>(&atom)) {
            check_var(e->lhs);
            check_var(e->rhs);
        } else if (const auto* d = std::get_if<NeqAtom>(&atom)) {
            check_var(d->lhs);
            check_var(d->rhs);
        } else {
            bot = true;
        }
    }
    return bot ? Validity::ContainsBot : Validity::WellFormed;
}

using detail::UnionFind;

Contraction contract_equalities(const Instance& inst)
{
    validate(inst);
    const auto n = inst.variable_count();
    UnionFind uf(n);
    for (const auto& atom : inst.atoms())
        if (const auto* e = std::get_if<EqAtom>(&atom))
            uf.unite(e->lhs, e->rhs);

    Contraction out{Instance(inst.signature()), std::vector<VarId>(n)};
    for (VarId v = 0; v < n; ++v)
        if (uf.find(v) == v)
            out.instance.variable(inst.variable_name(v));
    for (VarId v = 0; v < n; ++v)
        out.representative[v] = *out.instance.find_variable(inst.variable_name(uf.find(v)));

    bool contradiction = false;
    std::vector<Atom> atoms;
    for (const auto& atom : inst.atoms()) {
        if (const auto* r = std::get_if<RelAtom>(&atom)) {
            RelAtom mapped{r->symbol, {}};
            for (auto v : r->args)
                mapped.args.push_back(out.representative[v]);
            atoms.emplace_back(std::move(mapped));
        } else if (const auto* d = std::get_if<NeqAtom>(&atom)) {
            VarId a = out.representative[d->lhs];
            VarId b = out.representative[d->rhs];
            if (a == b)
                contradiction = true;
            else
                atoms.emplace_back(NeqAtom{a, b});
        } else if (std::holds_alternative<BotAtom>(atom)) {
            contradiction = true;
        }
    }
    if (contradiction)
        atoms.assign(1, BotAtom{});
    for (auto& a : atoms)
        out.instance.add(std::move(a));
    return out;
}

Structure canonical_database(const Instance& inst)
{
    validate(inst);
    const Signature& sig = inst.signature();
    std::vector<std::vector<Element>> flats(sig.size());
    for (const auto& atom : inst.atoms()) {
        const auto* r = std::get_if<RelAtom>(&atom);
        if (!r)
            throw Error("canonical_database: instance contains =, != or false; run contract_equalities first "
                        "and decide disequalities and false separately");
        for (auto v : r->args)
            flats[r->symbol].push_back(static_cast<Element>(v));
    }
    std::vector<Relation> relations;
    for (std::size_t s = 0; s < sig.size(); ++s)
        relations.emplace_back(sig[s].arity, std::move(flats[s]));
    return Structure(sig, inst.variable_count(), std::move(relations), inst.variables());
}

Instance instance_of(const Structure& s)
{
    Instance inst(s.signature());
    for (Element e = 0; e < s.domain_size(); ++e)
        inst.variable(s.has_labels() ? s.label(e) : "v" + std::to_string(e));
    for (std::size_t r = 0; r < s.signature().size(); ++r)
        for (auto t : s.relation(r))
            inst.add(RelAtom{r, std::vector<VarId>(t.begin(), t.end())});
    return inst;
}

} // namespace tcsp
