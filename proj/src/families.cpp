#include "deciders.hpp"
#include "union_find.hpp"

#include <tcsp/error.hpp>
#include <tcsp/sampling.hpp>

#include <functional>

namespace tcsp {

namespace detail {

bool successor_satisfiable(const Instance& inst, std::size_t succ, const std::vector<std::size_t>& colours)
{
    const Contraction c = contract_equalities(inst);
    if (c.instance.has_bot())
        return false;
    const std::size_t n = c.instance.variable_count();
    std::vector<std::pair<VarId, VarId>> edges;
    for (const auto& atom : c.instance.atoms())
        if (const auto* r = std::get_if<RelAtom>(&atom); r && r->symbol == succ)
            edges.emplace_back(r->args[0], r->args[1]);

    UnionFind uf(n);
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::size_t> next(n, none), prev(n, none);
        for (auto [a, b] : edges) {
            const std::size_t ra = uf.find(a), rb = uf.find(b);
            if (next[ra] == none)
                next[ra] = rb;
            else
                changed = uf.unite(next[ra], rb) || changed;
            if (prev[rb] == none)
                prev[rb] = ra;
            else
                changed = uf.unite(prev[rb], ra) || changed;
        }
    }

    std::vector<std::size_t> next(n, none);
    for (auto [a, b] : edges) {
        const std::size_t ra = uf.find(a), rb = uf.find(b);
        if (ra == rb)
            return false;
        next[ra] = rb;
    }
    // Each class has at most one successor class, so a cycle is a closed walk along next.
    std::vector<int> state(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        std::size_t v = start;
        while (v != none && state[v] == 0) {
            state[v] = 1;
            v = next[v];
        }
        if (v != none && state[v] == 1)
            return false;
        for (v = start; v != none && state[v] == 1; v = next[v])
            state[v] = 2;
    }

    std::vector<std::size_t> colour(n, none);
    for (const auto& atom : c.instance.atoms()) {
        if (const auto* d = std::get_if<NeqAtom>(&atom)) {
            if (uf.find(d->lhs) == uf.find(d->rhs))
                return false;
        } else if (const auto* r = std::get_if<RelAtom>(&atom)) {
            for (std::size_t k = 0; k < colours.size(); ++k) {
                if (r->symbol != colours[k])
                    continue;
                std::size_t& slot = colour[uf.find(r->args[0])];
                if (slot != none && slot != k)
                    return false;
                slot = k;
            }
        }
    }
    return true;
}

} // namespace detail

namespace {

Relation relation_of(std::size_t arity, std::vector<Element> flat)
{
    return Relation(arity, std::move(flat));
}

} // namespace

SampleFamily successor_sampling()
{
    Signature sig{{"succ", 2}};
    auto generator = [sig](std::size_t n) {
        std::vector<Element> flat;
        const std::size_t length = n + 1;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t i = 0; i + 1 < length; ++i) {
                const auto a = static_cast<Element>(c * length + i);
                flat.insert(flat.end(), {a, a + 1});
            }
        std::vector<Relation> rels;
        rels.push_back(relation_of(2, std::move(flat)));
        return std::vector<Structure>{Structure(sig, n * length, std::move(rels))};
    };
    auto decider = [](const Instance& inst) { return detail::successor_satisfiable(inst, 0, {}); };
    return SampleFamily("successor", sig, generator, {true, false}, decider);
}

SampleFamily no_jhp_sampling()
{
    Signature sig{{"O", 1}, {"P", 1}, {"Q", 1}, {"I", 2}};
    auto generator = [sig](std::size_t n) {
        const std::size_t size = 2 * n;
        std::vector<Element> p, q, inequality;
        std::vector<std::string> labels;
        for (Element a = 0; a < size; ++a) {
            labels.push_back(std::to_string(a + 1));
            (a < n ? p : q).push_back(a);
            for (Element b = 0; b < size; ++b)
                if (a != b)
                    inequality.insert(inequality.end(), {a, b});
        }
        std::vector<Structure> out;
        for (Element o : {Element{0}, static_cast<Element>(n)}) {
            std::vector<Relation> rels{
                relation_of(1, {o}), relation_of(1, p), relation_of(1, q), relation_of(2, inequality)};
            out.emplace_back(sig, size, std::move(rels), labels);
        }
        return out;
    };
    auto decider = [](const Instance& inst) {
        enum { O, P, Q, I };
        const Contraction c = contract_equalities(inst);
        if (c.instance.has_bot())
            return false;
        const std::size_t n = c.instance.variable_count();
        detail::UnionFind uf(n);
        std::optional<VarId> unique;
        for (const auto& atom : c.instance.atoms())
            if (const auto* r = std::get_if<RelAtom>(&atom); r && r->symbol == O) {
                if (unique)
                    uf.unite(*unique, r->args[0]);
                else
                    unique = r->args[0];
            }
        std::vector<bool> in_p(n, false), in_q(n, false);
        for (const auto& atom : c.instance.atoms()) {
            if (const auto* d = std::get_if<NeqAtom>(&atom)) {
                if (uf.find(d->lhs) == uf.find(d->rhs))
                    return false;
            } else if (const auto* r = std::get_if<RelAtom>(&atom)) {
                if (r->symbol == I && uf.find(r->args[0]) == uf.find(r->args[1]))
                    return false;
                if (r->symbol == P)
                    in_p[uf.find(r->args[0])] = true;
                if (r->symbol == Q)
                    in_q[uf.find(r->args[0])] = true;
            }
        }
        for (std::size_t v = 0; v < n; ++v)
            if (in_p[v] && in_q[v])
                return false;
        return true;
    };
    return SampleFamily("no_jhp", sig, generator, {true, false}, decider);
}

SampleFamily alternating_cycles_sampling()
{
    Signature sig{{"E1", 2}, {"E2", 2}};
    auto generator = [sig](std::size_t n) {
        std::vector<Element> e1, e2;
        Element next = 0;
        const std::size_t kmax = (n + 1) / 2;
        for (std::size_t k = 1; k <= kmax; ++k) {
            const std::size_t copies = (n + 2 * k - 1) / (2 * k);
            for (std::size_t c = 0; c < copies; ++c) {
                const Element base = next;
                const auto length = static_cast<Element>(2 * k);
                for (Element i = 0; i < length; ++i) {
                    const Element a = base + i;
                    const Element b = base + (i + 1) % length;
                    auto& rel = i % 2 == 0 ? e1 : e2;
                    rel.insert(rel.end(), {a, b, b, a});
                }
                next += length;
            }
        }
        std::vector<Relation> rels{relation_of(2, std::move(e1)), relation_of(2, std::move(e2))};
        return std::vector<Structure>{Structure(sig, next, std::move(rels))};
    };
    auto decider = [](const Instance& inst) {
        const Contraction c = contract_equalities(inst);
        if (c.instance.has_bot())
            return false;
        const std::size_t n = c.instance.variable_count();
        detail::UnionFind uf(n);
        constexpr std::size_t none = static_cast<std::size_t>(-1);
        // E1 and E2 are perfect matchings: all E_i-neighbours of a class coincide.
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::size_t> partner(2 * n, none);
            for (const auto& atom : c.instance.atoms()) {
                const auto* r = std::get_if<RelAtom>(&atom);
                if (!r)
                    continue;
                const std::size_t a = uf.find(r->args[0]), b = uf.find(r->args[1]);
                for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
                    std::size_t& slot = partner[2 * x + r->symbol];
                    if (slot == none)
                        slot = y;
                    else
                        changed = uf.unite(slot, y) || changed;
                }
            }
        }
        for (const auto& atom : c.instance.atoms()) {
            if (const auto* r = std::get_if<RelAtom>(&atom)) {
                if (uf.find(r->args[0]) == uf.find(r->args[1]))
                    return false;
            } else if (const auto* d = std::get_if<NeqAtom>(&atom)) {
                if (uf.find(d->lhs) == uf.find(d->rhs))
                    return false;
            }
        }
        return true;
    };
    return SampleFamily("alternating_cycles", sig, generator, {true, false}, decider);
}

std::vector<int> de_bruijn_sequence(std::size_t order)
{
    if (order == 0)
        throw Error("de Bruijn sequences need order >= 1");
    if (order > 30)
        throw Error("de Bruijn order too large");
    std::vector<int> word(order + 1, 0);
    std::vector<int> sequence;
    sequence.reserve(std::size_t{1} << order);
    std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t t, std::size_t p) {
        if (t > order) {
            if (order % p == 0)
                sequence.insert(sequence.end(), word.begin() + 1, word.begin() + static_cast<std::ptrdiff_t>(p) + 1);
            return;
        }
        word[t] = word[t - p];
        extend(t + 1, p);
        for (int j = word[t - p] + 1; j < 2; ++j) {
            word[t] = j;
            extend(t + 1, t);
        }
    };
    extend(1, 1);
    return sequence;
}

SampleFamily succ2col_sampling()
{
    Signature sig{{"succ", 2}, {"p0", 1}, {"p1", 1}};
    auto generator = [sig](std::size_t n) {
        if (n > 24)
            throw Error("succ2col: index " + std::to_string(n) + " exceeds the cap of 24");
        const auto word = de_bruijn_sequence(n);
        const auto size = static_cast<Element>(word.size());
        std::vector<Element> succ, p0, p1;
        for (Element a = 0; a < size; ++a) {
            succ.insert(succ.end(), {a, (a + 1) % size});
            (word[a] == 0 ? p0 : p1).push_back(a);
        }
        std::vector<Relation> rels{
            relation_of(2, std::move(succ)), relation_of(1, std::move(p0)), relation_of(1, std::move(p1))};
        return std::vector<Structure>{Structure(sig, size, std::move(rels))};
    };
    auto decider = [](const Instance& inst) { return detail::successor_satisfiable(inst, 0, {1, 2}); };
    return SampleFamily("succ2col", sig, generator, {true, false}, decider);
}

} // namespace tcsp
