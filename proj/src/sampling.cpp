#include "deciders.hpp"
#include "union_find.hpp"

#include <tcsp/error.hpp>
#include <tcsp/sampling.hpp>

#include <algorithm>
#include <map>
#include <mutex>

namespace tcsp {

struct SampleFamily::Cache {
    std::mutex mutex;
    std::map<std::size_t, std::shared_ptr<const std::vector<Structure>>> entries;
};

SampleFamily::SampleFamily(std::string name, Signature signature, SampleGenerator generator, SamplingFlags flags,
    Decider decider)
    : name_(std::move(name)), signature_(std::move(signature)), generator_(std::move(generator)), flags_(flags),
      decider_(std::move(decider)), cache_(std::make_shared<Cache>())
{
    if (!generator_)
        throw Error("sampling '" + name_ + "' has no generator");
}

bool SampleFamily::decide(const Instance& inst) const
{
    if (!decider_)
        throw Error("sampling '" + name_ + "' has no reference decider");
    if (inst.signature() != signature_)
        throw Error("instance signature does not match the signature of sampling '" + name_ + "'");
    return decider_(inst);
}

std::shared_ptr<const std::vector<Structure>> SampleFamily::generate(std::size_t n) const
{
    if (n == 0)
        n = 1;
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->entries.find(n);
    if (it != cache_->entries.end())
        return it->second;
    auto samples = std::make_shared<const std::vector<Structure>>(generator_(n));
    for (const auto& s : *samples)
        if (s.signature() != signature_)
            throw Error("sampling '" + name_ + "' generated a structure over a different signature");
    cache_->entries.emplace(n, samples);
    return samples;
}

SampleFamily SampleFamily::renamed(std::string name) const
{
    SampleFamily copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

std::size_t family_size(const SampleFamily& family, std::size_t n)
{
    std::size_t total = 0;
    for (const auto& s : *family.generate(n))
        total += s.domain_size();
    return total;
}

RelationDefinition order_relation(std::string name)
{
    return {std::move(name), 2, Formula::atom("<", {0, 1})};
}

RelationDefinition part_relation(std::string name, std::size_t part)
{
    if (part == 0)
        throw Error("parts are numbered from 1");
    return {std::move(name), 1, Formula::atom("P" + std::to_string(part), {0})};
}

Structure dense_order_base(std::size_t n)
{
    std::vector<Element> flat;
    std::vector<std::string> labels;
    for (Element a = 0; a < n; ++a) {
        labels.push_back(std::to_string(a + 1));
        for (Element b = a + 1; b < n; ++b)
            flat.insert(flat.end(), {a, b});
    }
    std::vector<Relation> rels;
    rels.emplace_back(2, std::move(flat));
    return Structure(Signature{{"<", 2}}, n, std::move(rels), std::move(labels));
}

Structure partition_base(std::size_t copies, std::size_t parts)
{
    if (parts == 0)
        throw Error("a partition needs at least one part");
    Signature sig;
    std::vector<std::vector<Element>> flats(parts);
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < parts; ++j)
        sig.add("P" + std::to_string(j + 1), 1);
    for (std::size_t i = 0; i < copies; ++i)
        for (std::size_t j = 0; j < parts; ++j) {
            flats[j].push_back(static_cast<Element>(i * parts + j));
            labels.push_back("a" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
        }
    std::vector<Relation> rels;
    for (auto& f : flats)
        rels.emplace_back(1, std::move(f));
    return Structure(std::move(sig), copies * parts, std::move(rels), std::move(labels));
}

namespace detail {

bool satisfiable_over_base(const Instance& inst, const Structure& base, const std::vector<RelationDefinition>& defs)
{
    if (inst.has_bot())
        return false;
    const std::size_t n = inst.variable_count();
    const std::size_t m = base.domain_size();
    // Each atom is checked once its last variable is assigned.
    std::vector<std::vector<const Atom*>> due(n + 1);
    for (const auto& atom : inst.atoms()) {
        std::size_t last = 0;
        std::visit(
            [&](const auto& a) {
                using A = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<A, RelAtom>) {
                    for (auto v : a.args)
                        last = std::max(last, v + 1);
                } else if constexpr (std::is_same_v<A, EqAtom> || std::is_same_v<A, NeqAtom>) {
                    last = std::max(a.lhs, a.rhs) + 1;
                }
            },
            atom);
        due[last].push_back(&atom);
    }
    std::vector<Element> values(n, 0);
    std::vector<Element> args;
    auto holds = [&](const Atom& atom) {
        if (const auto* r = std::get_if<RelAtom>(&atom)) {
            args.clear();
            for (auto v : r->args)
                args.push_back(values[v]);
            return defs[r->symbol].definition.evaluate(args, base);
        }
        if (const auto* e = std::get_if<EqAtom>(&atom))
            return values[e->lhs] == values[e->rhs];
        if (const auto* d = std::get_if<NeqAtom>(&atom))
            return values[d->lhs] != values[d->rhs];
        return false;
    };
    auto all_hold = [&](std::size_t level) {
        return std::all_of(due[level].begin(), due[level].end(), [&](const Atom* a) { return holds(*a); });
    };
    if (!all_hold(0))
        return false;
    if (n == 0)
        return true;
    if (m == 0)
        return false;
    std::size_t level = 0;
    values[0] = 0;
    for (;;) {
        if (all_hold(level + 1)) {
            if (level + 1 == n)
                return true;
            values[++level] = 0;
            continue;
        }
        while (++values[level] == m) {
            if (level == 0)
                return false;
            --level;
        }
    }
}

} // namespace detail

namespace {

Signature signature_of(const std::vector<RelationDefinition>& defs)
{
    Signature sig;
    for (const auto& d : defs)
        sig.add(d.name, d.arity);
    return sig;
}

Structure expand(const Structure& base, const std::vector<RelationDefinition>& defs, const Signature& sig)
{
    std::vector<Relation> rels;
    for (const auto& d : defs)
        rels.push_back(evaluate_definition(d.definition, base, d.arity));
    return Structure(sig, base.domain_size(), std::move(rels), base.labels());
}

bool all_strict_order(const std::vector<RelationDefinition>& defs)
{
    const Formula lt = Formula::atom("<", {0, 1});
    return std::all_of(defs.begin(), defs.end(), [&](const auto& d) { return d.arity == 2 && d.definition == lt; });
}

// Every relation is x1 < x2: satisfiable iff the contracted precedence graph is acyclic.
bool order_graph_satisfiable(const Instance& inst)
{
    const Contraction c = contract_equalities(inst);
    if (c.instance.has_bot())
        return false;
    const std::size_t n = c.instance.variable_count();
    std::vector<std::vector<VarId>> out(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& atom : c.instance.atoms())
        if (const auto* r = std::get_if<RelAtom>(&atom)) {
            if (r->args[0] == r->args[1])
                return false;
            out[r->args[0]].push_back(r->args[1]);
            ++indegree[r->args[1]];
        }
    std::vector<VarId> ready;
    for (VarId v = 0; v < n; ++v)
        if (indegree[v] == 0)
            ready.push_back(v);
    std::size_t seen = 0;
    while (!ready.empty()) {
        VarId v = ready.back();
        ready.pop_back();
        ++seen;
        for (VarId w : out[v])
            if (--indegree[w] == 0)
                ready.push_back(w);
    }
    return seen == n;
}

std::optional<std::size_t> part_of(const RelationDefinition& d, std::size_t parts)
{
    if (d.arity != 1)
        return std::nullopt;
    for (std::size_t j = 1; j <= parts; ++j)
        if (d.definition == Formula::atom("P" + std::to_string(j), {0}))
            return j;
    return std::nullopt;
}

} // namespace

SampleFamily dense_order_sampling(std::vector<RelationDefinition> relations)
{
    Signature sig = signature_of(relations);
    // Surface definition errors now rather than on first generate().
    for (const auto& d : relations)
        evaluate_definition(d.definition, dense_order_base(1), d.arity);

    auto generator = [relations, sig](std::size_t n) {
        return std::vector<Structure>{expand(dense_order_base(n), relations, sig)};
    };
    Decider decider;
    if (all_strict_order(relations)) {
        decider = order_graph_satisfiable;
    } else {
        decider = [relations](const Instance& inst) {
            const Contraction c = contract_equalities(inst);
            const std::size_t v = std::max<std::size_t>(c.instance.variable_count(), 1);
            return detail::satisfiable_over_base(c.instance, dense_order_base(v), relations);
        };
    }
    return SampleFamily("dense_order", std::move(sig), std::move(generator), {true, true}, std::move(decider));
}

SampleFamily colored_partition_sampling(std::size_t parts, std::vector<RelationDefinition> relations)
{
    if (parts == 0)
        throw Error("a partition needs at least one part");
    if (relations.empty())
        for (std::size_t j = 1; j <= parts; ++j)
            relations.push_back(part_relation("P" + std::to_string(j), j));
    Signature sig = signature_of(relations);
    for (const auto& d : relations)
        evaluate_definition(d.definition, partition_base(1, parts), d.arity);

    auto generator = [relations, sig, parts](std::size_t n) {
        return std::vector<Structure>{expand(partition_base(n, parts), relations, sig)};
    };

    std::vector<std::size_t> colour_of;
    for (const auto& d : relations) {
        auto j = part_of(d, parts);
        if (!j) {
            colour_of.clear();
            break;
        }
        colour_of.push_back(*j);
    }
    Decider decider;
    if (colour_of.size() == relations.size()) {
        decider = [colour_of](const Instance& inst) {
            const Contraction c = contract_equalities(inst);
            if (c.instance.has_bot())
                return false;
            std::vector<std::size_t> colour(c.instance.variable_count(), 0);
            for (const auto& atom : c.instance.atoms())
                if (const auto* r = std::get_if<RelAtom>(&atom)) {
                    std::size_t& slot = colour[r->args[0]];
                    const std::size_t want = colour_of[r->symbol];
                    if (slot != 0 && slot != want)
                        return false;
                    slot = want;
                }
            return true;
        };
    } else {
        decider = [relations, parts](const Instance& inst) {
            const Contraction c = contract_equalities(inst);
            const std::size_t v = std::max<std::size_t>(c.instance.variable_count(), 1);
            return detail::satisfiable_over_base(c.instance, partition_base(v, parts), relations);
        };
    }
    return SampleFamily("partition", std::move(sig), std::move(generator), {true, true}, std::move(decider));
}

SampleFamily explicit_sampling(std::string name, Signature signature, SampleGenerator samples, SamplingFlags flags,
    Decider decider)
{
    return SampleFamily(std::move(name), std::move(signature), std::move(samples), flags, std::move(decider));
}

SampleFamily explicit_sampling(std::string name, Signature signature, std::vector<Structure> samples,
    SamplingFlags flags, Decider decider)
{
    for (const auto& s : samples)
        if (s.signature() != signature)
            throw Error("explicit sampling '" + name + "': structure signature does not match");
    auto generator = [samples = std::move(samples)](std::size_t) { return samples; };
    return SampleFamily(std::move(name), std::move(signature), std::move(generator), flags, std::move(decider));
}

} // namespace tcsp
