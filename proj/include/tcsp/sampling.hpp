#pragma once

#include <tcsp/definition.hpp>
#include <tcsp/formulas.hpp>
#include <tcsp/structure.hpp>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tcsp {

/// Properties of a sampling that are asserted by whoever builds it. Neither
/// can be decided in general; verify_equality_matching gives bounded evidence
/// for the first.
struct SamplingFlags {
    bool equality_matching = false;
    bool no_pp_algebraicity = false;
};

/// Reference decision procedure for CSP(T): is the instance (Eq/Neq allowed)
/// satisfiable in some model of T?
using Decider = std::function<bool(const Instance&)>;
using SampleGenerator = std::function<std::vector<Structure>(std::size_t n)>;

/// An indexed family n -> L_n of finite structures. generate() is
/// deterministic and memoized; index 0 is served by index 1.
class SampleFamily {
public:
    SampleFamily(std::string name, Signature signature, SampleGenerator generator, SamplingFlags flags,
        Decider decider = {});

    const std::string& name() const noexcept { return name_; }
    const Signature& signature() const noexcept { return signature_; }
    const SamplingFlags& flags() const noexcept { return flags_; }
    bool has_decider() const noexcept { return static_cast<bool>(decider_); }
    const Decider& decider() const noexcept { return decider_; }
    /// Runs the reference decider; throws when the family has none.
    bool decide(const Instance& inst) const;

    std::shared_ptr<const std::vector<Structure>> generate(std::size_t n) const;

    /// The same family (sharing its cache) under another name.
    SampleFamily renamed(std::string name) const;

private:
    struct Cache;

    std::string name_;
    Signature signature_;
    SampleGenerator generator_;
    SamplingFlags flags_;
    Decider decider_;
    std::shared_ptr<Cache> cache_;
};

/// |L_n|: the summed domain sizes of generate(n).
std::size_t family_size(const SampleFamily& family, std::size_t n);

/// A named relation given by a quantifier-free definition over a base structure.
struct RelationDefinition {
    std::string name;
    std::size_t arity = 1;
    Formula definition;
};

/// `name` := x1 < x2.
RelationDefinition order_relation(std::string name);
/// `name` := part(J)(x1).
RelationDefinition part_relation(std::string name, std::size_t part);

/// The chain 1 < 2 < ... < n over the base symbol `<` (labels "1".."n").
Structure dense_order_base(std::size_t n);
/// n copies of each of `parts` colours over base symbols P1..Pm; element
/// a_{i,j} (copy i, part j, both 1-based) has id (i-1)*parts + (j-1).
Structure partition_base(std::size_t copies, std::size_t parts);

/// Samples of (Q;<) and its first-order expansions: generate(n) is the chain on
/// {1..n} with every relation materialized from its definition.
SampleFamily dense_order_sampling(std::vector<RelationDefinition> relations = {order_relation("lt")});

/// Samples of (Q;P1..Pm): generate(n) has n elements in each part. Without
/// relations the signature is P1..Pm themselves.
SampleFamily colored_partition_sampling(std::size_t parts, std::vector<RelationDefinition> relations = {});

/// Successor on the naturals (symbol `succ`): n disjoint directed paths of
/// n+1 elements each.
SampleFamily successor_sampling();

/// Wraps caller-provided structures verbatim.
SampleFamily explicit_sampling(std::string name, Signature signature, SampleGenerator samples, SamplingFlags flags,
    Decider decider = {});
/// The same structures at every index.
SampleFamily explicit_sampling(std::string name, Signature signature, std::vector<Structure> samples,
    SamplingFlags flags, Decider decider = {});

/// Two-sample family over O/1, P/1, Q/1, I/2 for the theory "O has at most one
/// element, P and Q are disjoint, I is inequality", which has no single-sample
/// sampling.
SampleFamily no_jhp_sampling();

/// Two perfect matchings E1, E2: generate(n) is a disjoint union of
/// ceil(n/2k) alternating cycles of length 2k for k = 1..ceil(n/2).
SampleFamily alternating_cycles_sampling();

/// Successor plus two colours p0/p1: generate(n) is a succ-cycle of length 2^n
/// coloured along a binary de Bruijn sequence of order n.
SampleFamily succ2col_sampling();

/// Binary de Bruijn sequence of the given order (length 2^order), built by
/// concatenating Lyndon words in lexicographic order.
std::vector<int> de_bruijn_sequence(std::size_t order);

/// Generic sampling from a decider: generate(n) is the set of canonical
/// databases of the decider-satisfiable conjunctions of Rel atoms over n
/// variables, one per renaming class. Throws when n > max_n.
SampleFamily sampling_from_decider(std::string name, Signature signature, Decider decider, std::size_t max_n,
    SamplingFlags flags = {});

/// Sampling of the union of two theories with disjoint signatures. Requires
/// both families to be equality-matching and without pp-algebraicity.
SampleFamily product_sampling(const SampleFamily& first, const SampleFamily& second);

/// Expands every sample with relations defined from equality alone.
SampleFamily equality_expansion(const SampleFamily& family, std::vector<RelationDefinition> definitions);

struct EqualityMatchingCounterexample {
    std::size_t n = 0;
    /// phi and psi joined into one instance.
    Instance instance;
    bool decider_verdict = false;
    bool sample_verdict = false;
};

struct EqualityMatchingReport {
    bool ok = true;
    std::size_t checked = 0;
    std::optional<EqualityMatchingCounterexample> counterexample;
};

/// Bounded check of the equality-matching property: for n = 1..n_max, every
/// conjunction phi of at most atoms_max Rel atoms over at most
/// min(n, vars_max) variables (one per renaming class) and every pattern psi of
/// =, != or nothing on each variable pair, the decider and the samples agree.
/// Stops at the first disagreement.
EqualityMatchingReport verify_equality_matching(const SampleFamily& family, std::size_t n_max, std::size_t vars_max,
    std::size_t atoms_max);

} // namespace tcsp
