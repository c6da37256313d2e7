#pragma once

#include <tcsp/sampling.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tcsp {

/// Named samplings defined by a theory specification:
///
///   theory A = dense_order { rel lt/2 = base; rel min3/3 = "(x1=x2 & !(x3<x2)) | (x1=x3 & !(x2<x3))" }
///   theory B = partition(2) { rel p0/1 = part(1); rel p1/1 = part(2) }
///   theory T = union(A, B)
///
/// Expressions:
///   dense_order { defs }         relations defined over `<` (`base` means x1 < x2)
///   partition(m) [{ defs }]      relations defined over part(1)..part(m)
///   successor | alternating_cycles | succ2col | no_jhp
///   explicit [over (sig)] [equality_matching] [no_pp_algebraicity] { structures }
///   from_decider(A, max_n)       canonical databases of A's satisfiable conjunctions
///   union(A, B)                  product sampling
///   expand(A) { defs }           relations defined from equality alone
///   A                            another name for A
/// where defs are `rel name/arity = "formula"` entries separated by `;`.
class TheorySpec {
public:
    const std::vector<std::string>& names() const noexcept { return names_; }
    bool contains(std::string_view name) const;
    /// Throws when the theory is not defined.
    const SampleFamily& get(std::string_view name) const;
    /// The theory defined last.
    const SampleFamily& last() const;

    void define(std::string name, SampleFamily family);

private:
    std::vector<std::string> names_;
    std::map<std::string, SampleFamily, std::less<>> theories_;
};

TheorySpec parse_theory_spec(std::string_view text);

} // namespace tcsp
