#include <tcsp/error.hpp>
#include <tcsp/sampling.hpp>
#include <tcsp/solvers.hpp>

#include <algorithm>
#include <numeric>

namespace tcsp {

namespace {

// All Rel atoms over variables 0..vars-1, and how each permutation of the
// variables acts on them. Conjunctions are bitmasks over the atom list; the
// canonical member of a renaming class is the one with the smallest mask.
class AtomSpace {
public:
    AtomSpace(const Signature& sig, std::size_t vars) : vars_(vars)
    {
        for (std::size_t s = 0; s < sig.size(); ++s) {
            std::vector<VarId> args(sig[s].arity, 0);
            for (;;) {
                atoms_.push_back({s, args});
                std::size_t i = args.size();
                while (i > 0 && ++args[i - 1] == vars) {
                    args[i - 1] = 0;
                    --i;
                }
                if (i == 0)
                    break;
            }
        }
        if (atoms_.size() > 64)
            throw Error("too many atoms to enumerate (" + std::to_string(atoms_.size()) + ")");
        std::vector<VarId> perm(vars);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            if (std::is_sorted(perm.begin(), perm.end()))
                continue;
            std::vector<std::size_t> image(atoms_.size());
            for (std::size_t i = 0; i < atoms_.size(); ++i) {
                RelAtom mapped{atoms_[i].symbol, {}};
                for (auto v : atoms_[i].args)
                    mapped.args.push_back(perm[v]);
                image[i] = index_of(mapped);
            }
            images_.push_back(std::move(image));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    std::size_t size() const noexcept { return atoms_.size(); }

    bool canonical(std::uint64_t mask) const
    {
        for (const auto& image : images_) {
            std::uint64_t mapped = 0;
            for (std::size_t i = 0; i < atoms_.size(); ++i)
                if (mask >> i & 1)
                    mapped |= std::uint64_t{1} << image[i];
            if (mapped < mask)
                return false;
        }
        return true;
    }

    Instance instance(const Signature& sig, std::uint64_t mask) const
    {
        Instance inst(sig);
        for (std::size_t v = 0; v < vars_; ++v)
            inst.variable("x" + std::to_string(v + 1));
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (mask >> i & 1)
                inst.add(atoms_[i]);
        return inst;
    }

private:
    std::size_t index_of(const RelAtom& a) const
    {
        return static_cast<std::size_t>(std::find(atoms_.begin(), atoms_.end(), a) - atoms_.begin());
    }

    std::size_t vars_;
    std::vector<RelAtom> atoms_;
    std::vector<std::vector<std::size_t>> images_;
};

// Canonical conjunctions of at most `max_atoms` atoms, by size, then by
// lexicographic choice of atoms.
std::vector<std::uint64_t> canonical_conjunctions(const AtomSpace& space, std::size_t max_atoms)
{
    std::vector<std::uint64_t> out;
    const std::size_t total = space.size();
    for (std::size_t k = 0; k <= std::min(max_atoms, total); ++k) {
        std::vector<std::size_t> pick(k);
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
            std::uint64_t mask = 0;
            for (auto i : pick)
                mask |= std::uint64_t{1} << i;
            if (space.canonical(mask))
                out.push_back(mask);
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == total - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j)
                pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

} // namespace

SampleFamily sampling_from_decider(std::string name, Signature signature, Decider decider, std::size_t max_n,
    SamplingFlags flags)
{
    if (!decider)
        throw Error("sampling_from_decider needs a decider");
    auto generator = [signature, decider, max_n](std::size_t n) {
        if (n > max_n)
            throw Error("sampling_from_decider: index " + std::to_string(n) + " exceeds the bound " +
                        std::to_string(max_n));
        AtomSpace space(signature, n);
        if (space.size() > 20)
            throw Error("sampling_from_decider: " + std::to_string(space.size()) + " atoms at index " +
                        std::to_string(n) + " is beyond the enumeration limit of 20");
        std::vector<Structure> out;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << space.size()); ++mask) {
            if (!space.canonical(mask))
                continue;
            Instance inst = space.instance(signature, mask);
            if (decider(inst))
                out.push_back(canonical_database(inst));
        }
        return out;
    };
    return SampleFamily(std::move(name), signature, std::move(generator), flags, decider);
}

EqualityMatchingReport verify_equality_matching(const SampleFamily& family, std::size_t n_max, std::size_t vars_max,
    std::size_t atoms_max)
{
    if (!family.has_decider())
        throw Error("verify_equality_matching: sampling '" + family.name() + "' has no reference decider");
    EqualityMatchingReport report;
    const Signature& sig = family.signature();
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto samples = family.generate(n);
        for (std::size_t v = 1; v <= std::min(n, vars_max); ++v) {
            AtomSpace space(sig, v);
            const auto phis = canonical_conjunctions(space, atoms_max);
            std::vector<std::pair<VarId, VarId>> pairs;
            for (VarId x = 0; x < v; ++x)
                for (VarId y = x + 1; y < v; ++y)
                    pairs.emplace_back(x, y);
            std::size_t patterns = 1;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                patterns *= 3;
            // The unconstrained pattern runs over all phi before any other.
            for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
                for (auto mask : phis) {
                    Instance inst = space.instance(sig, mask);
                    std::size_t code = pattern;
                    for (auto [x, y] : pairs) {
                        if (code % 3 == 1)
                            inst.add(EqAtom{x, y});
                        else if (code % 3 == 2)
                            inst.add(NeqAtom{x, y});
                        code /= 3;
                    }
                    const bool expected = family.decide(inst);
                    const bool found = std::any_of(samples->begin(), samples->end(),
                        [&](const Structure& s) { return hom_search(inst, s).satisfiable; });
                    ++report.checked;
                    if (expected != found) {
                        report.ok = false;
                        report.counterexample = EqualityMatchingCounterexample{n, std::move(inst), expected, found};
                        return report;
                    }
                }
            }
        }
    }
    return report;
}

} // namespace tcsp
