#include <tcsp/error.hpp>
#include <tcsp/sampling.hpp>

#include <algorithm>
#include <functional>

namespace tcsp {

namespace {

struct Lifter {
    std::span<const Element> t;
    std::vector<std::size_t> cls;
    std::vector<Element> pick;
    std::vector<bool> used;
    bool own_first;
    std::size_t second_size;
    std::vector<Element>* out;

    void emit() const
    {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Element own = t[i], other = pick[cls[i]];
            out->push_back(own_first ? static_cast<Element>(own * second_size + other)
                                     : static_cast<Element>(other * second_size + own));
        }
    }

    void extend(std::size_t depth)
    {
        if (depth == pick.size()) {
            emit();
            return;
        }
        for (std::size_t v = 0; v < used.size(); ++v) {
            if (used[v])
                continue;
            used[v] = true;
            pick[depth] = static_cast<Element>(v);
            extend(depth + 1);
            used[v] = false;
        }
    }
};

// Appends every combined tuple whose own coordinates are `t` and whose other
// coordinates repeat exactly where t repeats.
void lift_tuple(std::span<const Element> t, std::size_t other_size, bool own_first, std::size_t second_size,
    std::vector<Element>& out)
{
    const std::size_t k = t.size();
    std::vector<std::size_t> cls(k);
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = 0;
        while (j < i && t[j] != t[i])
            ++j;
        cls[i] = j < i ? cls[j] : distinct++;
    }
    if (distinct > other_size)
        return;
    Lifter lifter{t, std::move(cls), std::vector<Element>(distinct), std::vector<bool>(other_size, false), own_first,
        second_size, &out};
    lifter.extend(0);
}

Structure combine(const Structure& a, const Structure& b, const Signature& sig)
{
    const std::size_t na = a.domain_size(), nb = b.domain_size();
    std::vector<Relation> rels;
    for (const auto& r : a.relations()) {
        std::vector<Element> flat;
        for (auto t : r)
            lift_tuple(t, nb, true, nb, flat);
        rels.emplace_back(r.arity(), std::move(flat));
    }
    for (const auto& r : b.relations()) {
        std::vector<Element> flat;
        for (auto t : r)
            lift_tuple(t, na, false, nb, flat);
        rels.emplace_back(r.arity(), std::move(flat));
    }
    std::vector<std::string> labels;
    labels.reserve(na * nb);
    for (Element x = 0; x < na; ++x)
        for (Element y = 0; y < nb; ++y)
            labels.push_back("(" + a.label(x) + "," + b.label(y) + ")");
    return Structure(sig, na * nb, std::move(rels), std::move(labels));
}

} // namespace

SampleFamily product_sampling(const SampleFamily& first, const SampleFamily& second)
{
    if (!first.signature().disjoint_with(second.signature()))
        throw Error("product_sampling: signatures of '" + first.name() + "' and '" + second.name() + "' overlap");
    for (const SampleFamily* f : {&first, &second}) {
        if (!f->flags().equality_matching)
            throw Error("product_sampling: '" + f->name() + "' is not marked equality-matching");
        if (!f->flags().no_pp_algebraicity)
            throw Error("product_sampling: '" + f->name() + "' is not marked free of pp-algebraicity");
    }
    Signature sig = concat(first.signature(), second.signature());
    auto generator = [first, second, sig](std::size_t n) {
        const auto left = first.generate(n);
        const auto right = second.generate(n);
        std::vector<Structure> out;
        out.reserve(left->size() * right->size());
        for (const auto& a : *left)
            for (const auto& b : *right)
                out.push_back(combine(a, b, sig));
        return out;
    };
    return SampleFamily(
        "union(" + first.name() + "," + second.name() + ")", std::move(sig), std::move(generator), {true, true});
}

namespace {

// Calls `visit` with every set partition of {0..n-1} as a block index per
// element (restricted growth strings).
template <class Visit>
bool for_each_partition(std::size_t n, Visit&& visit)
{
    std::vector<Element> block(n, 0);
    std::vector<Element> top(n + 1, 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == n)
            return visit(std::span<const Element>(block));
        const Element limit = i == 0 ? 0 : top[i] + 1;
        for (Element b = 0; b <= limit; ++b) {
            block[i] = b;
            top[i + 1] = std::max(i == 0 ? Element{0} : top[i], b);
            if (rec(i + 1))
                return true;
        }
        return false;
    };
    return rec(0);
}

} // namespace

SampleFamily equality_expansion(const SampleFamily& family, std::vector<RelationDefinition> definitions)
{
    if (!family.flags().equality_matching)
        throw Error("equality_expansion: '" + family.name() + "' is not marked equality-matching");
    Signature sig = family.signature();
    for (const auto& d : definitions) {
        if (!d.definition.uses_only_equality())
            throw Error("equality_expansion: definition of '" + d.name + "' mentions relation symbols");
        if (d.definition.variable_bound() > d.arity)
            throw Error("equality_expansion: definition of '" + d.name + "' uses more variables than its arity");
        sig.add(d.name, d.arity);
    }
    const std::size_t base_symbols = family.signature().size();

    auto generator = [family, definitions, sig](std::size_t n) {
        std::vector<Structure> out;
        for (const auto& s : *family.generate(n)) {
            std::vector<Relation> rels = s.relations();
            for (const auto& d : definitions)
                rels.push_back(evaluate_definition(d.definition, s, d.arity));
            out.emplace_back(sig, s.domain_size(), std::move(rels), s.labels());
        }
        return out;
    };

    Decider decider;
    if (family.has_decider()) {
        // The defined atoms only depend on which variables are equal, so try
        // every equality type and hand the base atoms to the base decider.
        decider = [family, definitions, base_symbols](const Instance& inst) {
            const Contraction c = contract_equalities(inst);
            if (c.instance.has_bot())
                return false;
            const Instance& flat = c.instance;
            const std::size_t n = flat.variable_count();
            const Structure empty;
            return for_each_partition(n, [&](std::span<const Element> block) {
                Instance probe(family.signature());
                for (const auto& name : flat.variables())
                    probe.variable(name);
                std::vector<Element> args;
                for (const auto& atom : flat.atoms()) {
                    if (const auto* r = std::get_if<RelAtom>(&atom)) {
                        if (r->symbol < base_symbols) {
                            probe.add(*r);
                            continue;
                        }
                        args.clear();
                        for (auto v : r->args)
                            args.push_back(block[v]);
                        if (!definitions[r->symbol - base_symbols].definition.evaluate(args, empty))
                            return false;
                    } else if (const auto* d = std::get_if<NeqAtom>(&atom)) {
                        if (block[d->lhs] == block[d->rhs])
                            return false;
                    }
                }
                for (VarId x = 0; x < n; ++x)
                    for (VarId y = x + 1; y < n; ++y) {
                        if (block[x] == block[y])
                            probe.add(EqAtom{x, y});
                        else
                            probe.add(NeqAtom{x, y});
                    }
                return family.decide(probe);
            });
        };
    }
    return SampleFamily(family.name() + "+eq", std::move(sig), std::move(generator), family.flags(),
        std::move(decider));
}

} // namespace tcsp
