#pragma once

#include <tcsp/detail/target_index.hpp>
#include <tcsp/formulas.hpp>
#include <tcsp/solvers.hpp>

#include <deque>
#include <limits>
#include <span>
#include <vector>

namespace tcsp::detail {

/// Generalized arc-consistency over the Rel atoms of an (Eq-free) instance.
/// The worklist is a FIFO of (atom, variable) pairs; pairs of atoms backed
/// by a bitset matrix or of arity one are drained first.
class Propagator {
public:
    Propagator(const Instance& inst, const Structure& target);

    std::size_t variable_count() const noexcept { return atoms_of_var_.size(); }
    std::size_t domain_size() const noexcept { return domain_size_; }

    /// Full candidate sets for every variable.
    std::vector<Domain> full_domains() const;

    /// Queues every (atom, variable) pair and runs to a fixpoint.
    bool establish(std::vector<Domain>& domains);

    /// Queues the pairs affected by a change of `var`'s candidate set.
    void notify(VarId var);
    bool propagate(std::vector<Domain>& domains);
    void clear();

private:
    struct AtomInfo {
        const RelationIndex* index = nullptr;
        const Relation* relation = nullptr;
        std::vector<VarId> args;
        std::vector<VarId> vars; // distinct, in order of first position
        std::vector<bool> repeats; // repeats[k]: vars[k] occurs more than once
        std::vector<std::pair<std::size_t, std::size_t>> equal_positions;
        std::vector<std::vector<std::uint32_t>> residues; // per position, per element: offset of the last support
        bool cheap = false;
    };

    void enqueue(std::size_t atom, std::size_t k);
    bool revise(std::size_t atom, std::size_t k, std::vector<Domain>& domains);
    bool revise_position(AtomInfo& a, std::size_t position, std::vector<Domain>& domains);
    /// Offset in [from, to) of the first tuple of `list` inside the domains,
    /// or list.size().
    std::size_t find_support(const AtomInfo& a, std::size_t position, std::span<const std::uint32_t> list,
        std::size_t from, std::size_t to, const std::vector<Domain>& domains) const;
    bool tuple_fits(const AtomInfo& a, std::uint32_t id, const std::vector<Domain>& domains) const;

    static constexpr std::uint32_t kNoResidue = std::numeric_limits<std::uint32_t>::max();

    std::size_t domain_size_;
    std::vector<AtomInfo> atoms_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> atoms_of_var_; // (atom, k)
    std::deque<std::pair<std::size_t, std::size_t>> queue_[2]; // cheap, scanned
    std::vector<std::vector<bool>> queued_;
};

} // namespace tcsp::detail
