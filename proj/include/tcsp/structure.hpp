#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tcsp {

/// Element ids of a finite structure are dense: 0 .. domain_size-1.
using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Symbol {
    std::string name;
    std::size_t arity = 1;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// A finite relational signature. Symbol order is insertion order and is
/// significant: relations of a Structure are stored by symbol index.
class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<Symbol> symbols);
    explicit Signature(std::vector<Symbol> symbols);

    /// Appends a symbol and returns its index. Throws on duplicate names or arity 0.
    std::size_t add(std::string name, std::size_t arity);

    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

    std::optional<std::size_t> find(std::string_view name) const;
    /// Like find() but throws when the symbol is unknown.
    std::size_t index_of(std::string_view name) const;

    bool disjoint_with(const Signature& other) const;

    friend bool operator==(const Signature&, const Signature&) = default;

private:
    std::vector<Symbol> symbols_;
};

/// Symbols of `a` followed by those of `b`. Throws if a name occurs in both.
Signature concat(const Signature& a, const Signature& b);

/// A set of equal-length tuples, stored flat in sorted lexicographic order
/// without duplicates.
class Relation {
public:
    class const_iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = std::span<const Element>;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = std::span<const Element>;

        const_iterator() = default;
        const_iterator(const Element* pos, std::size_t arity) : pos_(pos), arity_(arity) {}

        std::span<const Element> operator*() const { return {pos_, arity_}; }
        const_iterator& operator++()
        {
            pos_ += arity_;
            return *this;
        }
        const_iterator operator++(int)
        {
            auto copy = *this;
            ++*this;
            return copy;
        }
        friend bool operator==(const const_iterator& a, const const_iterator& b) { return a.pos_ == b.pos_; }

    private:
        const Element* pos_ = nullptr;
        std::size_t arity_ = 1;
    };

    explicit Relation(std::size_t arity = 1);
    /// `flat` holds tuples back to back; it is sorted and deduplicated here.
    Relation(std::size_t arity, std::vector<Element> flat);
    static Relation from_tuples(std::size_t arity, const std::vector<Tuple>& tuples);

    std::size_t arity() const noexcept { return arity_; }
    std::size_t size() const noexcept { return flat_.size() / arity_; }
    bool empty() const noexcept { return flat_.empty(); }
    std::span<const Element> tuple(std::size_t i) const { return {flat_.data() + i * arity_, arity_}; }
    const std::vector<Element>& flat() const noexcept { return flat_; }
    bool contains(std::span<const Element> t) const;
    bool contains(std::initializer_list<Element> t) const { return contains(std::span<const Element>(t.begin(), t.size())); }
    std::vector<Tuple> tuples() const;

    const_iterator begin() const { return {flat_.data(), arity_}; }
    const_iterator end() const { return {flat_.data() + flat_.size(), arity_}; }

    friend bool operator==(const Relation&, const Relation&) = default;

private:
    std::size_t arity_;
    std::vector<Element> flat_;
};

namespace detail {
class TargetIndex;
struct IndexSlot;
} // namespace detail

/// A finite relational structure. Immutable once constructed; solver indexes
/// are built lazily on first use and shared between copies.
class Structure {
public:
    Structure();
    /// A structure whose relations are all empty.
    Structure(Signature signature, std::size_t domain_size);
    Structure(Signature signature, std::size_t domain_size, std::vector<Relation> relations,
        std::vector<std::string> labels = {});

    const Signature& signature() const noexcept { return signature_; }
    std::size_t domain_size() const noexcept { return domain_size_; }
    const Relation& relation(std::size_t symbol) const { return relations_[symbol]; }
    const Relation& relation(std::string_view name) const;
    const std::vector<Relation>& relations() const noexcept { return relations_; }

    bool has_labels() const noexcept { return !labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    /// Display name of an element; its id when the structure carries no labels.
    std::string label(Element e) const;

    const detail::TargetIndex& index() const;

    /// Compares signature, domain, relations and labels.
    friend bool operator==(const Structure& a, const Structure& b);

private:
    Signature signature_;
    std::size_t domain_size_ = 0;
    std::vector<Relation> relations_;
    std::vector<std::string> labels_;
    std::shared_ptr<detail::IndexSlot> index_;
};

/// Maps every element of a source structure to an element of a target.
using ElementMap = std::vector<Element>;

/// Disjoint union with offset renumbering. Throws on signature mismatch.
Structure disjoint_union(std::span<const Structure> structures);

bool is_homomorphism(std::span<const Element> map, const Structure& from, const Structure& to);

/// The substructure of `to` induced on the image of `map`. Image elements are
/// renumbered in increasing order of their id in `to`.
Structure image_structure(std::span<const Element> map, const Structure& from, const Structure& to);

/// Substructure induced on `elements` (renumbered in the given order).
Structure induced_substructure(const Structure& s, std::span<const Element> elements);

/// Keeps only the named relations, in the given order.
Structure reduct(const Structure& s, std::span<const std::string> symbols);

} // namespace tcsp
