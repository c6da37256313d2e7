#pragma once

#include <tcsp/structure.hpp>

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <mutex>
#include <vector>

namespace tcsp::detail {

using Bits = boost::dynamic_bitset<std::uint64_t>;

/// Lookup tables for one relation of a target structure.
struct RelationIndex {
    std::size_t arity = 0;
    /// projection[i] = elements occurring at position i of some tuple.
    std::vector<Bits> projection;

    /// Binary relations on small domains: adjacency rows in both directions.
    bool has_matrix = false;
    std::vector<Bits> forward;
    std::vector<Bits> backward;
    Bits diagonal;

    /// Everything else: per position, tuple ids grouped by the element at
    /// that position (CSR layout).
    std::vector<std::vector<std::uint32_t>> offsets;
    std::vector<std::vector<std::uint32_t>> tuple_ids;

    std::span<const std::uint32_t> tuples_with(std::size_t position, Element e) const
    {
        const auto& off = offsets[position];
        return {tuple_ids[position].data() + off[e], off[e + 1] - off[e]};
    }
};

class TargetIndex {
public:
    /// Binary relations get adjacency matrices up to this domain size.
    static constexpr std::size_t kMatrixLimit = 8192;

    explicit TargetIndex(const Structure& s);

    std::size_t domain_size() const noexcept { return domain_size_; }
    const RelationIndex& relation(std::size_t symbol) const { return relations_[symbol]; }

private:
    std::size_t domain_size_;
    std::vector<RelationIndex> relations_;
};

struct IndexSlot {
    std::once_flag once;
    std::unique_ptr<TargetIndex> index;
};

} // namespace tcsp::detail
