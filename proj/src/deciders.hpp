#pragma once

#include <tcsp/formulas.hpp>
#include <tcsp/sampling.hpp>

#include <vector>

namespace tcsp::detail {

/// Brute-force satisfiability of `inst` in `base`, reading symbol i of the
/// instance as defs[i] evaluated over the base.
bool satisfiable_over_base(const Instance& inst, const Structure& base, const std::vector<RelationDefinition>& defs);

/// Successor reasoning shared by the successor and succ2col theories.
/// Contracts functionality of `succ` in both directions, then rejects
/// self-loops, directed cycles, disequalities inside a class and, when
/// colour symbols are given, classes carrying two different colours.
bool successor_satisfiable(const Instance& inst, std::size_t succ, const std::vector<std::size_t>& colours);

} // namespace tcsp::detail
