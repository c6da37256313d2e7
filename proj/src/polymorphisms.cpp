#include <tcsp/error.hpp>
#include <tcsp/formulas.hpp>
#include <tcsp/polymorphisms.hpp>
#include <tcsp/solvers.hpp>

#include <algorithm>
#include <bit>
#include <functional>
#include <map>

namespace tcsp {

namespace {

std::size_t power(std::size_t base, std::size_t exp)
{
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i)
        r *= base;
    return r;
}

// Calls visit(t) for every t in domain^arity, lexicographically.
template <class Visit>
void for_each_tuple(std::size_t domain_size, std::size_t arity, Visit&& visit)
{
    if (domain_size == 0 && arity > 0)
        return;
    std::vector<Element> t(arity, 0);
    for (;;) {
        visit(std::span<const Element>(t));
        std::size_t i = arity;
        while (i > 0 && ++t[i - 1] == domain_size) {
            t[i - 1] = 0;
            --i;
        }
        if (i == 0)
            return;
    }
}

} // namespace

void OperationTable::check() const
{
    if (arity == 0)
        throw Error("operations need arity >= 1");
    const std::size_t expected = domain_size == 0 ? 0 : power(domain_size, arity);
    if (values.size() != expected)
        throw Error("operation table has " + std::to_string(values.size()) + " entries, expected " +
                    std::to_string(expected));
    for (auto v : values)
        if (v >= domain_size)
            throw Error("operation table value " + std::to_string(v) + " is outside the domain");
}

Element OperationTable::operator()(std::span<const Element> args) const
{
    if (args.size() != arity)
        throw Error("operation of arity " + std::to_string(arity) + " applied to " + std::to_string(args.size()) +
                    " arguments");
    std::size_t index = 0;
    for (auto a : args) {
        if (a >= domain_size)
            throw Error("operation argument " + std::to_string(a) + " is outside the domain");
        index = index * domain_size + a;
    }
    return values.at(index);
}

bool check_polymorphism(const OperationTable& f, const Structure& s)
{
    f.check();
    if (f.domain_size != s.domain_size())
        throw Error("operation domain size " + std::to_string(f.domain_size) + " differs from structure size " +
                    std::to_string(s.domain_size()));
    const std::size_t k = f.arity;
    std::vector<Element> column(k);
    std::vector<Element> image;
    for (const auto& rel : s.relations()) {
        const std::size_t count = rel.size();
        if (count == 0)
            continue;
        image.resize(rel.arity());
        bool ok = true;
        // Odometer over count^k choices of rows.
        for_each_tuple(count, k, [&](std::span<const Element> rows) {
            if (!ok)
                return;
            for (std::size_t p = 0; p < rel.arity(); ++p) {
                for (std::size_t j = 0; j < k; ++j)
                    column[j] = rel.tuple(rows[j])[p];
                image[p] = f(column);
            }
            ok = rel.contains(image);
        });
        if (!ok)
            return false;
    }
    return true;
}

bool is_totally_symmetric(const OperationTable& f)
{
    f.check();
    std::map<std::vector<Element>, Element> by_support;
    bool ok = true;
    for_each_tuple(f.domain_size, f.arity, [&](std::span<const Element> t) {
        if (!ok)
            return;
        std::vector<Element> support(t.begin(), t.end());
        std::sort(support.begin(), support.end());
        support.erase(std::unique(support.begin(), support.end()), support.end());
        const Element value = f(t);
        auto [it, fresh] = by_support.emplace(std::move(support), value);
        ok = fresh || it->second == value;
    });
    return ok;
}

bool is_near_unanimity(const OperationTable& f)
{
    f.check();
    if (f.arity < 3)
        throw Error("near-unanimity needs arity >= 3");
    std::vector<Element> t(f.arity);
    for (Element a = 0; a < f.domain_size; ++a)
        for (Element b = 0; b < f.domain_size; ++b)
            for (std::size_t i = 0; i < f.arity; ++i) {
                std::fill(t.begin(), t.end(), b);
                t[i] = a;
                if (f(t) != b)
                    return false;
            }
    return true;
}

OperationTable projection(std::size_t domain_size, std::size_t arity, std::size_t position)
{
    if (position >= arity)
        throw Error("projection position out of range");
    return tabulate(domain_size, arity, [&](std::span<const Element> t) { return t[position]; });
}

OperationTable min_operation(std::span<const Element> ascending, std::size_t arity)
{
    const std::size_t m = ascending.size();
    std::vector<std::size_t> rank(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (ascending[i] >= m || rank[ascending[i]] != m)
            throw Error("min_operation: the order must list every element exactly once");
        rank[ascending[i]] = i;
    }
    if (arity == 0)
        throw Error("operations need arity >= 1");
    return tabulate(m, arity, [&](std::span<const Element> t) {
        return *std::min_element(t.begin(), t.end(), [&](Element a, Element b) { return rank[a] < rank[b]; });
    });
}

OperationTable min_operation(std::size_t domain_size, std::size_t arity)
{
    std::vector<Element> order(domain_size);
    for (std::size_t i = 0; i < domain_size; ++i)
        order[i] = static_cast<Element>(i);
    return min_operation(order, arity);
}

OperationTable majority_eq_operation(std::size_t domain_size)
{
    return tabulate(domain_size, 3, [](std::span<const Element> t) { return t[1] == t[2] ? t[1] : t[0]; });
}

std::optional<OperationTable> find_totally_symmetric_polymorphism(const Structure& s, std::size_t k,
    std::size_t constraint_cap)
{
    if (k == 0)
        throw Error("operations need arity >= 1");
    const std::size_t m = s.domain_size();
    if (m == 0)
        return OperationTable{0, k, {}};
    if (m > 20)
        throw Error("find_totally_symmetric_polymorphism: domain of size " + std::to_string(m) +
                    " exceeds the cap of 20");
    if (power(m, k) > 1000000)
        throw Error("find_totally_symmetric_polymorphism: table of arity " + std::to_string(k) + " is too large");

    // One variable per nonempty support set of size <= k.
    using Mask = std::uint32_t;
    Instance inst(s.signature());
    std::map<Mask, VarId> var_of;
    for (Mask mask = 1; mask < (Mask{1} << m); ++mask)
        if (static_cast<std::size_t>(std::popcount(mask)) <= k)
            var_of.emplace(mask, inst.variable("S" + std::to_string(mask)));
    if (var_of.size() > 5000)
        throw Error("find_totally_symmetric_polymorphism: too many support sets");

    // Any k rows of R, taken columnwise, give support sets S_1..S_r with
    // R(g(S_1), ..., g(S_r)) required. Repeated rows add nothing new, so
    // sets of at most k distinct rows suffice.
    std::size_t constraints = 0;
    for (std::size_t r = 0; r < s.signature().size(); ++r) {
        const Relation& rel = s.relation(r);
        const std::size_t count = rel.size();
        const std::size_t arity = rel.arity();
        std::vector<std::vector<VarId>> seen;
        std::vector<std::size_t> pick;
        std::vector<Mask> cols(arity);
        auto emit = [&]() {
            std::fill(cols.begin(), cols.end(), 0);
            for (auto row : pick)
                for (std::size_t p = 0; p < arity; ++p)
                    cols[p] |= Mask{1} << rel.tuple(row)[p];
            std::vector<VarId> args;
            for (auto c : cols)
                args.push_back(var_of.at(c));
            seen.push_back(std::move(args));
            if (++constraints > constraint_cap)
                throw Error("find_totally_symmetric_polymorphism: more than " + std::to_string(constraint_cap) +
                            " constraints");
        };
        std::function<void(std::size_t)> choose = [&](std::size_t from) {
            if (!pick.empty())
                emit();
            if (pick.size() == k)
                return;
            for (std::size_t row = from; row < count; ++row) {
                pick.push_back(row);
                choose(row + 1);
                pick.pop_back();
            }
        };
        choose(0);
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (auto& args : seen)
            inst.add(RelAtom{r, std::move(args)});
    }

    const SolveResult result = hom_search(inst, s);
    if (!result.satisfiable)
        return std::nullopt;
    const auto& g = result.witness->assignment;
    return tabulate(m, k, [&](std::span<const Element> t) {
        Mask support = 0;
        for (auto e : t)
            support |= Mask{1} << e;
        return g[var_of.at(support)];
    });
}

} // namespace tcsp
