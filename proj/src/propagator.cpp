#include "propagator.hpp"

#include <tcsp/error.hpp>

#include <algorithm>

namespace tcsp::detail {

Propagator::Propagator(const Instance& inst, const Structure& target)
    : domain_size_(target.domain_size()), atoms_of_var_(inst.variable_count())
{
    if (inst.signature() != target.signature())
        throw Error("instance and target structure have different signatures");
    const TargetIndex& index = target.index();
    for (const auto& atom : inst.atoms()) {
        const auto* r = std::get_if<RelAtom>(&atom);
        if (!r)
            continue;
        AtomInfo a;
        a.index = &index.relation(r->symbol);
        a.relation = &target.relation(r->symbol);
        a.args = r->args;
        for (std::size_t p = 0; p < a.args.size(); ++p) {
            auto it = std::find(a.vars.begin(), a.vars.end(), a.args[p]);
            if (it == a.vars.end()) {
                a.vars.push_back(a.args[p]);
                a.repeats.push_back(false);
            } else {
                a.repeats[static_cast<std::size_t>(it - a.vars.begin())] = true;
            }
            for (std::size_t q = 0; q < p; ++q)
                if (a.args[q] == a.args[p])
                    a.equal_positions.emplace_back(q, p);
        }
        a.cheap = a.index->has_matrix || a.args.size() < 2;
        if (!a.cheap)
            a.residues.assign(a.args.size(), std::vector<std::uint32_t>(domain_size_, kNoResidue));
        const std::size_t id = atoms_.size();
        for (std::size_t k = 0; k < a.vars.size(); ++k)
            atoms_of_var_[a.vars[k]].emplace_back(id, k);
        queued_.emplace_back(a.vars.size(), false);
        atoms_.push_back(std::move(a));
    }
}

std::vector<Domain> Propagator::full_domains() const
{
    std::vector<Domain> domains(variable_count(), Domain(domain_size_));
    for (auto& d : domains)
        d.set();
    return domains;
}

bool Propagator::establish(std::vector<Domain>& domains)
{
    clear();
    for (std::size_t a = 0; a < atoms_.size(); ++a)
        for (std::size_t k = 0; k < atoms_[a].vars.size(); ++k)
            enqueue(a, k);
    return propagate(domains);
}

void Propagator::enqueue(std::size_t atom, std::size_t k)
{
    if (queued_[atom][k])
        return;
    queued_[atom][k] = true;
    queue_[atoms_[atom].cheap ? 0 : 1].emplace_back(atom, k);
}

void Propagator::notify(VarId var)
{
    for (auto [atom, k] : atoms_of_var_[var]) {
        const AtomInfo& a = atoms_[atom];
        for (std::size_t j = 0; j < a.vars.size(); ++j)
            if (j != k || a.repeats[k])
                enqueue(atom, j);
    }
}

void Propagator::clear()
{
    for (auto& q : queue_) {
        for (auto [atom, k] : q)
            queued_[atom][k] = false;
        q.clear();
    }
}

bool Propagator::propagate(std::vector<Domain>& domains)
{
    for (;;) {
        auto& q = queue_[0].empty() ? queue_[1] : queue_[0];
        if (q.empty())
            return true;
        auto [atom, k] = q.front();
        q.pop_front();
        queued_[atom][k] = false;
        const VarId var = atoms_[atom].vars[k];
        if (revise(atom, k, domains)) {
            if (domains[var].none()) {
                clear();
                return false;
            }
            notify(var);
        }
    }
}

bool Propagator::revise(std::size_t atom, std::size_t k, std::vector<Domain>& domains)
{
    AtomInfo& a = atoms_[atom];
    const VarId var = a.vars[k];
    bool changed = false;
    for (std::size_t p = 0; p < a.args.size(); ++p) {
        if (a.args[p] != var)
            continue;
        changed = revise_position(a, p, domains) || changed;
        if (domains[var].none())
            break;
    }
    return changed;
}

std::size_t Propagator::find_support(const AtomInfo& a, std::size_t position, std::span<const std::uint32_t> list,
    std::size_t from, std::size_t to, const std::vector<Domain>& domains) const
{
    // With `position` fixed the list is sorted by the remaining positions, so
    // misses on the first two of them are skipped by leapfrogging.
    const std::size_t lead = position == 0 ? 1 : 0;
    std::size_t second = lead + 1 == position ? lead + 2 : lead + 1;
    const bool two = second < a.args.size();
    if (!two)
        second = lead;
    const Domain& lead_dom = domains[a.args[lead]];
    const Domain& second_dom = domains[a.args[second]];
    auto at = [&](std::size_t i) { return a.relation->tuple(list[i]); };
    // First index after i that is not below; i itself is below.
    auto gallop = [&](std::size_t i, auto&& below) {
        std::size_t step = 1;
        std::size_t lo = i;
        while (lo + step < to && below(lo + step)) {
            lo += step;
            step *= 2;
        }
        std::size_t hi = std::min(lo + step, to);
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            (below(mid) ? lo : hi) = mid;
        }
        return hi;
    };
    std::size_t i = from;
    while (i < to) {
        const auto t = at(i);
        const Element x = t[lead];
        if (!lead_dom.test(x)) {
            const auto next = lead_dom.find_next(x);
            if (next == Domain::npos)
                break;
            i = gallop(i, [&](std::size_t j) { return at(j)[lead] < next; });
            continue;
        }
        if (two && !second_dom.test(t[second])) {
            const auto next = second_dom.find_next(t[second]);
            if (next == Domain::npos)
                i = gallop(i, [&](std::size_t j) { return at(j)[lead] == x; });
            else
                i = gallop(i, [&](std::size_t j) {
                    const auto u = at(j);
                    return u[lead] < x || (u[lead] == x && u[second] < next);
                });
            continue;
        }
        if (tuple_fits(a, list[i], domains))
            return i;
        ++i;
    }
    return list.size();
}

bool Propagator::tuple_fits(const AtomInfo& a, std::uint32_t id, const std::vector<Domain>& domains) const
{
    auto t = a.relation->tuple(id);
    for (std::size_t q = 0; q < t.size(); ++q)
        if (!domains[a.args[q]].test(t[q]))
            return false;
    for (auto [p, q] : a.equal_positions)
        if (t[p] != t[q])
            return false;
    return true;
}

bool Propagator::revise_position(AtomInfo& a, std::size_t position, std::vector<Domain>& domains)
{
    const VarId var = a.args[position];
    Domain& dom = domains[var];
    const RelationIndex& idx = *a.index;

    if (a.args.size() == 1 || (a.args.size() == 2 && idx.has_matrix && a.args[0] == a.args[1])) {
        const Domain& allowed = a.args.size() == 1 ? idx.projection[0] : idx.diagonal;
        if (dom.is_subset_of(allowed))
            return false;
        dom &= allowed;
        return true;
    }

    if (idx.has_matrix) {
        const Domain& other = domains[a.args[1 - position]];
        const auto& cols = position == 0 ? idx.backward : idx.forward;
        const std::size_t here = dom.count();
        const std::size_t there = other.count();
        if (there < here) {
            // Union of the supports of the other side's candidates.
            Domain supported(domain_size_);
            for (auto w = other.find_first(); w != Domain::npos; w = other.find_next(w))
                supported |= cols[w];
            if (dom.is_subset_of(supported))
                return false;
            dom &= supported;
            return true;
        }
        const auto& rows = position == 0 ? idx.forward : idx.backward;
        bool changed = false;
        for (auto v = dom.find_first(); v != Domain::npos; v = dom.find_next(v)) {
            if (!rows[v].intersects(other)) {
                dom.reset(v);
                changed = true;
            }
        }
        return changed;
    }

    auto& residue = a.residues[position];
    bool changed = false;
    for (auto v = dom.find_first(); v != Domain::npos; v = dom.find_next(v)) {
        const auto list = idx.tuples_with(position, static_cast<Element>(v));
        const std::size_t start = residue[v] == kNoResidue ? 0 : residue[v];
        std::size_t at = find_support(a, position, list, start, list.size(), domains);
        if (at == list.size() && start > 0)
            at = find_support(a, position, list, 0, start, domains);
        if (at < list.size()) {
            residue[v] = static_cast<std::uint32_t>(at);
        } else {
            dom.reset(v);
            changed = true;
        }
    }
    return changed;
}

} // namespace tcsp::detail
