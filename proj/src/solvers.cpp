#include "propagator.hpp"

#include <tcsp/error.hpp>
#include <tcsp/sampling.hpp>
#include <tcsp/solvers.hpp>

#include <algorithm>
#include <numeric>

namespace tcsp {

std::vector<Element> ACState::values(VarId v) const
{
    std::vector<Element> out;
    const Domain& d = candidates.at(v);
    for (auto e = d.find_first(); e != Domain::npos; e = d.find_next(e))
        out.push_back(static_cast<Element>(e));
    return out;
}

namespace {

class HomSearch {
public:
    HomSearch(const Instance& inst, const Structure& target)
        : inst_(inst), propagator_(inst, target), assigned_(inst.variable_count(), false),
          neighbours_(inst.variable_count()), name_rank_(inst.variable_count())
    {
        for (const auto& atom : inst.atoms())
            if (const auto* d = std::get_if<NeqAtom>(&atom)) {
                neighbours_[d->lhs].push_back(d->rhs);
                neighbours_[d->rhs].push_back(d->lhs);
            }
        std::vector<VarId> by_name(inst.variable_count());
        std::iota(by_name.begin(), by_name.end(), 0);
        std::stable_sort(by_name.begin(), by_name.end(),
            [&](VarId a, VarId b) { return inst.variable_name(a) < inst.variable_name(b); });
        for (std::size_t i = 0; i < by_name.size(); ++i)
            name_rank_[by_name[i]] = i;
    }

    std::optional<std::vector<Element>> run()
    {
        auto domains = propagator_.full_domains();
        if (!propagator_.establish(domains))
            return std::nullopt;
        if (!search(domains))
            return std::nullopt;
        return solution_;
    }

private:
    std::optional<VarId> choose(const std::vector<Domain>& domains) const
    {
        std::optional<VarId> best;
        std::size_t best_size = 0;
        for (VarId v = 0; v < domains.size(); ++v) {
            if (assigned_[v])
                continue;
            const std::size_t size = domains[v].count();
            if (!best || size < best_size || (size == best_size && name_rank_[v] < name_rank_[*best])) {
                best = v;
                best_size = size;
            }
        }
        return best;
    }

    bool search(std::vector<Domain>& domains)
    {
        const auto var = choose(domains);
        if (!var) {
            solution_.assign(domains.size(), 0);
            for (VarId v = 0; v < domains.size(); ++v)
                solution_[v] = static_cast<Element>(domains[v].find_first());
            return true;
        }
        const VarId x = *var;
        assigned_[x] = true;
        const Domain& candidates = domains[x];
        for (auto value = candidates.find_first(); value != Domain::npos; value = candidates.find_next(value)) {
            std::vector<Domain> next = domains;
            next[x].reset();
            next[x].set(value);
            propagator_.clear();
            propagator_.notify(x);
            bool dead = false;
            for (VarId y : neighbours_[x]) {
                if (next[y].test(value)) {
                    next[y].reset(value);
                    if (next[y].none()) {
                        dead = true;
                        break;
                    }
                    propagator_.notify(y);
                }
            }
            if (dead) {
                propagator_.clear();
                continue;
            }
            if (propagator_.propagate(next) && search(next))
                return true;
        }
        assigned_[x] = false;
        return false;
    }

    const Instance& inst_;
    detail::Propagator propagator_;
    std::vector<bool> assigned_;
    std::vector<std::vector<VarId>> neighbours_;
    std::vector<std::size_t> name_rank_;
    std::vector<Element> solution_;
};

void reject_disequalities(const Instance& inst, const char* who)
{
    if (inst.has_disequalities())
        throw Error(std::string(who) + " does not support != atoms; use hom_search");
}

void check_signature(const SampleFamily& family, const Instance& inst)
{
    if (inst.signature() != family.signature())
        throw Error("instance signature does not match the signature of sampling '" + family.name() + "'");
}

} // namespace

SolveResult hom_search(const Instance& inst, const Structure& target)
{
    if (inst.signature() != target.signature())
        throw Error("hom_search: instance and target have different signatures");
    const Contraction c = contract_equalities(inst);
    if (c.instance.has_bot())
        return {};
    HomSearch search(c.instance, target);
    auto solution = search.run();
    if (!solution)
        return {};
    Witness w;
    w.assignment.resize(inst.variable_count());
    for (VarId v = 0; v < inst.variable_count(); ++v)
        w.assignment[v] = (*solution)[c.representative[v]];
    return {true, std::move(w)};
}

std::optional<ACState> arc_consistency(const Instance& inst, const Structure& target)
{
    if (inst.signature() != target.signature())
        throw Error("arc_consistency: instance and target have different signatures");
    reject_disequalities(inst, "arc_consistency");
    const Contraction c = contract_equalities(inst);
    if (c.instance.has_bot())
        return std::nullopt;
    detail::Propagator propagator(c.instance, target);
    auto domains = propagator.full_domains();
    if (!propagator.establish(domains))
        return std::nullopt;
    if (std::any_of(domains.begin(), domains.end(), [](const Domain& d) { return d.none(); }))
        return std::nullopt;
    ACState state;
    for (VarId v = 0; v < inst.variable_count(); ++v)
        state.candidates.push_back(domains[c.representative[v]]);
    return state;
}

Consistency establish_23_consistency(const Instance& inst, const Structure& target)
{
    if (inst.signature() != target.signature())
        throw Error("establish_23_consistency: instance and target have different signatures");
    reject_disequalities(inst, "establish_23_consistency");
    const Contraction c = contract_equalities(inst);
    if (c.instance.has_bot())
        return Consistency::Inconsistent;
    const Instance& flat = c.instance;
    const std::size_t n = flat.variable_count();
    const std::size_t m = target.domain_size();
    if (n == 0)
        return Consistency::Consistent;
    if (m == 0)
        return Consistency::Inconsistent;

    // pairs[x][y][a] = { b : (a,b) still allowed for (x,y) }, kept symmetric.
    std::vector<std::vector<std::vector<Domain>>> pairs(n, std::vector<std::vector<Domain>>(n));
    for (VarId x = 0; x < n; ++x)
        for (VarId y = 0; y < n; ++y) {
            pairs[x][y].assign(m, Domain(m));
            for (std::size_t a = 0; a < m; ++a) {
                if (x == y)
                    pairs[x][y][a].set(a);
                else
                    pairs[x][y][a].set();
            }
        }
    auto remove = [&](VarId x, VarId y, std::size_t a, std::size_t b) {
        pairs[x][y][a].reset(b);
        pairs[y][x][b].reset(a);
    };

    bool changed = true;
    while (changed) {
        changed = false;
        // Every allowed pair of values on two positions of an atom needs a
        // supporting tuple that is pairwise allowed everywhere.
        for (const auto& atom : flat.atoms()) {
            const auto* r = std::get_if<RelAtom>(&atom);
            if (!r)
                continue;
            const auto& args = r->args;
            const std::size_t k = args.size();
            std::vector<std::vector<std::vector<Domain>>> support(k, std::vector<std::vector<Domain>>(k));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i; j < k; ++j)
                    support[i][j].assign(m, Domain(m));
            for (auto t : target.relation(r->symbol)) {
                bool fits = true;
                for (std::size_t i = 0; i < k && fits; ++i)
                    for (std::size_t j = i; j < k && fits; ++j)
                        fits = pairs[args[i]][args[j]][t[i]].test(t[j]);
                if (!fits)
                    continue;
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = i; j < k; ++j)
                        support[i][j][t[i]].set(t[j]);
            }
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i; j < k; ++j) {
                    const VarId x = args[i], y = args[j];
                    for (std::size_t a = 0; a < m; ++a) {
                        Domain gone = pairs[x][y][a] - support[i][j][a];
                        for (auto b = gone.find_first(); b != Domain::npos; b = gone.find_next(b)) {
                            remove(x, y, a, b);
                            changed = true;
                        }
                    }
                }
        }
        // Path consistency: (a,b) on (x,y) needs a common witness on every z.
        for (VarId x = 0; x < n; ++x)
            for (VarId y = 0; y < n; ++y)
                for (VarId z = 0; z < n; ++z)
                    for (std::size_t a = 0; a < m; ++a) {
                        Domain& row = pairs[x][y][a];
                        for (auto b = row.find_first(); b != Domain::npos; b = row.find_next(b)) {
                            if (!pairs[x][z][a].intersects(pairs[y][z][b])) {
                                remove(x, y, a, b);
                                changed = true;
                            }
                        }
                    }
        for (VarId x = 0; x < n; ++x)
            if (std::none_of(pairs[x][x].begin(), pairs[x][x].end(), [](const Domain& d) { return d.any(); }))
                return Consistency::Inconsistent;
    }
    return Consistency::Consistent;
}

std::size_t sampling_index(const Instance& inst)
{
    return contract_equalities(inst).instance.variable_count();
}

SolveResult solve_via_sampling(const SampleFamily& family, const Instance& inst)
{
    check_signature(family, inst);
    if (inst.has_disequalities() && !family.flags().equality_matching)
        throw Error("sampling '" + family.name() + "' is not equality-matching; != atoms are not supported");
    const Contraction c = contract_equalities(inst);
    if (c.instance.has_bot())
        return {};
    const auto samples = family.generate(c.instance.variable_count());
    for (std::size_t i = 0; i < samples->size(); ++i) {
        SolveResult r = hom_search(inst, (*samples)[i]);
        if (r.satisfiable) {
            r.witness->sample_index = i;
            return r;
        }
    }
    return {};
}

SolveResult solve_ac_over_sampling(const SampleFamily& family, const Instance& inst)
{
    check_signature(family, inst);
    reject_disequalities(inst, "solve_ac_over_sampling");
    const std::size_t n = sampling_index(inst);
    const auto samples = family.generate(n);
    for (const auto& sample : *samples)
        if (arc_consistency(inst, sample))
            return {true, std::nullopt};
    return {};
}

SolveResult solve_nu_over_sampling(const SampleFamily& family, const Instance& inst)
{
    check_signature(family, inst);
    reject_disequalities(inst, "solve_nu_over_sampling");
    const std::size_t n = sampling_index(inst);
    const auto samples = family.generate(n);
    for (const auto& sample : *samples)
        if (establish_23_consistency(inst, sample) == Consistency::Consistent)
            return {true, std::nullopt};
    return {};
}

} // namespace tcsp
