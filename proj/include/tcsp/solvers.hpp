#pragma once

#include <tcsp/formulas.hpp>
#include <tcsp/structure.hpp>

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace tcsp {

class SampleFamily;

/// Candidate set of one variable over a target domain.
using Domain = boost::dynamic_bitset<std::uint64_t>;

struct Witness {
    /// Position of the satisfying sample within generate(n).
    std::size_t sample_index = 0;
    /// assignment[v] = element of that sample for variable v of the instance.
    std::vector<Element> assignment;
};

struct SolveResult {
    bool satisfiable = false;
    /// Present for witness-producing methods when satisfiable.
    std::optional<Witness> witness;
};

/// Fixpoint of arc-consistency: one candidate set per instance variable.
struct ACState {
    std::vector<Domain> candidates;

    std::vector<Element> values(VarId v) const;
};

/// Exact satisfiability of `inst` in `target` by backtracking search with
/// maintained arc-consistency. Eq atoms are contracted first, Neq atoms are
/// enforced on the assignment, Bot makes the instance unsatisfiable.
SolveResult hom_search(const Instance& inst, const Structure& target);

/// Generalized arc-consistency over the Rel atoms. Returns nullopt when some
/// candidate set empties. Eq atoms are contracted first (merged variables
/// share a candidate set); Neq atoms are rejected with an error.
std::optional<ACState> arc_consistency(const Instance& inst, const Structure& target);

enum class Consistency { Inconsistent, Consistent };

/// (2,3)-consistency over pairs of variables. Decides satisfiability on targets
/// with a ternary near-unanimity polymorphism; otherwise a sound filter.
/// Neq atoms are rejected with an error.
Consistency establish_23_consistency(const Instance& inst, const Structure& target);

/// Index of the sampling to consult: the number of variables left after
/// contracting equalities.
std::size_t sampling_index(const Instance& inst);

/// Satisfiable iff hom_search succeeds on some sample of generate(n).
SolveResult solve_via_sampling(const SampleFamily& family, const Instance& inst);

/// Satisfiable iff arc-consistency does not fail on some sample. Complete only
/// when every sample maps homomorphically into a model of the theory whose
/// image has totally symmetric polymorphisms of all arities.
SolveResult solve_ac_over_sampling(const SampleFamily& family, const Instance& inst);

/// Satisfiable iff (2,3)-consistency holds on some sample. Complete only when
/// every sample has a ternary near-unanimity polymorphism.
SolveResult solve_nu_over_sampling(const SampleFamily& family, const Instance& inst);

} // namespace tcsp
