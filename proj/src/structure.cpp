#include <tcsp/detail/target_index.hpp>
#include <tcsp/error.hpp>
#include <tcsp/structure.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <unordered_map>

namespace tcsp {

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::initializer_list<Symbol> symbols)
{
    for (const auto& s : symbols)
        add(s.name, s.arity);
}

Signature::Signature(std::vector<Symbol> symbols)
{
    for (auto& s : symbols)
        add(std::move(s.name), s.arity);
}

std::size_t Signature::add(std::string name, std::size_t arity)
{
    if (arity == 0)
        throw Error("relation symbol '" + name + "' must have arity >= 1");
    if (find(name))
        throw Error("duplicate relation symbol '" + name + "'");
    symbols_.push_back({std::move(name), arity});
    return symbols_.size() - 1;
}

std::optional<std::size_t> Signature::find(std::string_view name) const
{
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name)
            return i;
    return std::nullopt;
}

std::size_t Signature::index_of(std::string_view name) const
{
    if (auto i = find(name))
        return *i;
    throw Error("unknown relation symbol '" + std::string(name) + "'");
}

bool Signature::disjoint_with(const Signature& other) const
{
    return std::none_of(symbols_.begin(), symbols_.end(), [&](const Symbol& s) { return other.find(s.name).has_value(); });
}

Signature concat(const Signature& a, const Signature& b)
{
    Signature result = a;
    for (const auto& s : b.symbols()) {
        if (result.find(s.name))
            throw Error("signatures are not disjoint: '" + s.name + "' occurs in both");
        result.add(s.name, s.arity);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Relation

namespace {

// Sorts tuples lexicographically and drops duplicates. Small tuples are packed
// into one 64-bit key so the sort runs over plain integers.
void normalize(std::size_t arity, std::vector<Element>& flat)
{
    const std::size_t count = flat.size() / arity;
    if (count <= 1)
        return;
    Element max_value = *std::max_element(flat.begin(), flat.end());
    const unsigned bits = std::max(1u, static_cast<unsigned>(std::bit_width(max_value)));
    if (bits * arity <= 64) {
        std::vector<std::uint64_t> keys(count);
        for (std::size_t t = 0; t < count; ++t) {
            std::uint64_t key = 0;
            for (std::size_t i = 0; i < arity; ++i)
                key = (key << bits) | flat[t * arity + i];
            keys[t] = key;
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        flat.resize(keys.size() * arity);
        const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
        for (std::size_t t = 0; t < keys.size(); ++t) {
            std::uint64_t key = keys[t];
            for (std::size_t i = arity; i-- > 0;) {
                flat[t * arity + i] = static_cast<Element>(key & mask);
                key >>= bits;
            }
        }
        return;
    }
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(flat.begin() + a * arity, flat.begin() + (a + 1) * arity,
            flat.begin() + b * arity, flat.begin() + (b + 1) * arity);
    };
    auto equal = [&](std::size_t a, std::size_t b) {
        return std::equal(flat.begin() + a * arity, flat.begin() + (a + 1) * arity, flat.begin() + b * arity);
    };
    std::sort(order.begin(), order.end(), less);
    order.erase(std::unique(order.begin(), order.end(), equal), order.end());
    std::vector<Element> sorted;
    sorted.reserve(order.size() * arity);
    for (auto t : order)
        sorted.insert(sorted.end(), flat.begin() + t * arity, flat.begin() + (t + 1) * arity);
    flat = std::move(sorted);
}

} // namespace

Relation::Relation(std::size_t arity) : arity_(arity)
{
    if (arity == 0)
        throw Error("relation arity must be >= 1");
}

Relation::Relation(std::size_t arity, std::vector<Element> flat) : arity_(arity), flat_(std::move(flat))
{
    if (arity == 0)
        throw Error("relation arity must be >= 1");
    if (flat_.size() % arity != 0)
        throw Error("flat tuple data is not a multiple of the arity");
    normalize(arity_, flat_);
}

Relation Relation::from_tuples(std::size_t arity, const std::vector<Tuple>& tuples)
{
    std::vector<Element> flat;
    flat.reserve(tuples.size() * arity);
    for (const auto& t : tuples) {
        if (t.size() != arity)
            throw Error("tuple length " + std::to_string(t.size()) + " does not match arity " + std::to_string(arity));
        flat.insert(flat.end(), t.begin(), t.end());
    }
    return Relation(arity, std::move(flat));
}

bool Relation::contains(std::span<const Element> t) const
{
    if (t.size() != arity_)
        return false;
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        auto row = tuple(mid);
        if (std::lexicographical_compare(row.begin(), row.end(), t.begin(), t.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < size() && std::equal(t.begin(), t.end(), tuple(lo).begin());
}

std::vector<Tuple> Relation::tuples() const
{
    std::vector<Tuple> out;
    out.reserve(size());
    for (auto t : *this)
        out.emplace_back(t.begin(), t.end());
    return out;
}

// ---------------------------------------------------------------------------
// Structure

Structure::Structure() : index_(std::make_shared<detail::IndexSlot>()) {}

Structure::Structure(Signature signature, std::size_t domain_size)
    : signature_(std::move(signature)), domain_size_(domain_size), index_(std::make_shared<detail::IndexSlot>())
{
    for (const auto& s : signature_.symbols())
        relations_.emplace_back(s.arity);
}

Structure::Structure(Signature signature, std::size_t domain_size, std::vector<Relation> relations,
    std::vector<std::string> labels)
    : signature_(std::move(signature)),
      domain_size_(domain_size),
      relations_(std::move(relations)),
      labels_(std::move(labels)),
      index_(std::make_shared<detail::IndexSlot>())
{
    if (relations_.size() != signature_.size())
        throw Error("structure needs exactly one relation per signature symbol");
    for (std::size_t r = 0; r < relations_.size(); ++r) {
        if (relations_[r].arity() != signature_[r].arity)
            throw Error("relation '" + signature_[r].name + "' has the wrong arity");
        for (Element e : relations_[r].flat())
            if (e >= domain_size_)
                throw Error("relation '" + signature_[r].name + "' mentions element " + std::to_string(e) +
                            " outside the domain of size " + std::to_string(domain_size_));
    }
    if (!labels_.empty() && labels_.size() != domain_size_)
        throw Error("label count does not match the domain size");
}

const Relation& Structure::relation(std::string_view name) const
{
    return relations_[signature_.index_of(name)];
}

std::string Structure::label(Element e) const
{
    if (labels_.empty())
        return std::to_string(e);
    return labels_.at(e);
}

const detail::TargetIndex& Structure::index() const
{
    std::call_once(index_->once, [&] { index_->index = std::make_unique<detail::TargetIndex>(*this); });
    return *index_->index;
}

bool operator==(const Structure& a, const Structure& b)
{
    return a.signature_ == b.signature_ && a.domain_size_ == b.domain_size_ && a.relations_ == b.relations_ &&
           a.labels_ == b.labels_;
}

// ---------------------------------------------------------------------------
// Operations

Structure disjoint_union(std::span<const Structure> structures)
{
    if (structures.empty())
        return Structure();
    const Signature& sig = structures.front().signature();
    std::size_t total = 0;
    bool any_labels = false;
    for (const auto& s : structures) {
        if (s.signature() != sig)
            throw Error("disjoint_union: all structures must share one signature");
        total += s.domain_size();
        any_labels = any_labels || s.has_labels();
    }
    std::vector<std::vector<Element>> flats(sig.size());
    std::vector<std::string> labels;
    Element offset = 0;
    for (std::size_t part = 0; part < structures.size(); ++part) {
        const auto& s = structures[part];
        for (std::size_t r = 0; r < sig.size(); ++r)
            for (Element e : s.relation(r).flat())
                flats[r].push_back(e + offset);
        if (any_labels)
            for (Element e = 0; e < s.domain_size(); ++e)
                labels.push_back(s.has_labels() ? s.label(e) : std::to_string(part) + ":" + std::to_string(e));
        offset += static_cast<Element>(s.domain_size());
    }
    std::vector<Relation> relations;
    for (std::size_t r = 0; r < sig.size(); ++r)
        relations.emplace_back(sig[r].arity, std::move(flats[r]));
    return Structure(sig, total, std::move(relations), std::move(labels));
}

bool is_homomorphism(std::span<const Element> map, const Structure& from, const Structure& to)
{
    if (from.signature() != to.signature())
        throw Error("is_homomorphism: structures have different signatures");
    if (map.size() != from.domain_size())
        throw Error("is_homomorphism: map is not total on the source domain");
    for (Element image : map)
        if (image >= to.domain_size())
            throw Error("is_homomorphism: map leaves the target domain");
    Tuple mapped;
    for (std::size_t r = 0; r < from.signature().size(); ++r) {
        const Relation& target = to.relation(r);
        for (auto t : from.relation(r)) {
            mapped.assign(t.size(), 0);
            for (std::size_t i = 0; i < t.size(); ++i)
                mapped[i] = map[t[i]];
            if (!target.contains(mapped))
                return false;
        }
    }
    return true;
}

Structure induced_substructure(const Structure& s, std::span<const Element> elements)
{
    std::unordered_map<Element, Element> position;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i] >= s.domain_size())
            throw Error("induced_substructure: element outside the domain");
        if (!position.emplace(elements[i], static_cast<Element>(i)).second)
            throw Error("induced_substructure: repeated element");
    }
    std::vector<Relation> relations;
    for (std::size_t r = 0; r < s.signature().size(); ++r) {
        std::vector<Element> flat;
        for (auto t : s.relation(r)) {
            bool inside = std::all_of(t.begin(), t.end(), [&](Element e) { return position.count(e) > 0; });
            if (!inside)
                continue;
            for (Element e : t)
                flat.push_back(position.at(e));
        }
        relations.emplace_back(s.signature()[r].arity, std::move(flat));
    }
    std::vector<std::string> labels;
    if (s.has_labels())
        for (Element e : elements)
            labels.push_back(s.label(e));
    return Structure(s.signature(), elements.size(), std::move(relations), std::move(labels));
}

Structure image_structure(std::span<const Element> map, const Structure& from, const Structure& to)
{
    if (!is_homomorphism(map, from, to))
        throw Error("image_structure: map is not a homomorphism");
    std::set<Element> image(map.begin(), map.end());
    std::vector<Element> elements(image.begin(), image.end());
    return induced_substructure(to, elements);
}

Structure reduct(const Structure& s, std::span<const std::string> symbols)
{
    Signature sig;
    std::vector<Relation> relations;
    for (const auto& name : symbols) {
        std::size_t r = s.signature().index_of(name);
        sig.add(name, s.signature()[r].arity);
        relations.push_back(s.relation(r));
    }
    return Structure(std::move(sig), s.domain_size(), std::move(relations), s.labels());
}

} // namespace tcsp
