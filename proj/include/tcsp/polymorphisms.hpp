#pragma once

#include <tcsp/structure.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tcsp {

/// A total k-ary operation on {0..domain_size-1}. values holds f(t) for every
/// t in domain^arity in lexicographic order of t.
struct OperationTable {
    std::size_t domain_size = 0;
    std::size_t arity = 1;
    std::vector<Element> values;

    /// Throws when `values` has the wrong length or an entry out of range.
    void check() const;
    Element operator()(std::span<const Element> args) const;
    Element operator()(std::initializer_list<Element> args) const
    {
        return (*this)(std::span<const Element>(args.begin(), args.size()));
    }

    friend bool operator==(const OperationTable&, const OperationTable&) = default;
};

/// Builds a table by calling f on every argument tuple.
template <class F>
OperationTable tabulate(std::size_t domain_size, std::size_t arity, F&& f);

bool check_polymorphism(const OperationTable& f, const Structure& s);
bool is_totally_symmetric(const OperationTable& f);
/// Throws when f.arity < 3.
bool is_near_unanimity(const OperationTable& f);

OperationTable projection(std::size_t domain_size, std::size_t arity, std::size_t position);
/// k-ary minimum with respect to `ascending` (a permutation of the domain
/// listing elements from smallest to largest).
OperationTable min_operation(std::span<const Element> ascending, std::size_t arity);
/// k-ary minimum with respect to the order of element ids.
OperationTable min_operation(std::size_t domain_size, std::size_t arity);
/// f(x,y,z) = y if y = z, x otherwise.
OperationTable majority_eq_operation(std::size_t domain_size);

/// Searches for a totally symmetric polymorphism of arity k, represented by its
/// value on each nonempty support set of size <= k. Throws when the number of
/// support sets or generated constraints exceeds the cap.
std::optional<OperationTable> find_totally_symmetric_polymorphism(const Structure& s, std::size_t k,
    std::size_t constraint_cap = 200000);

template <class F>
OperationTable tabulate(std::size_t domain_size, std::size_t arity, F&& f)
{
    OperationTable table{domain_size, arity, {}};
    if (domain_size == 0)
        return table;
    std::vector<Element> t(arity, 0);
    for (;;) {
        table.values.push_back(static_cast<Element>(f(std::span<const Element>(t))));
        std::size_t i = arity;
        while (i > 0 && ++t[i - 1] == domain_size) {
            t[i - 1] = 0;
            --i;
        }
        if (i == 0)
            break;
    }
    return table;
}

} // namespace tcsp
