#include <tcsp/detail/target_index.hpp>

namespace tcsp::detail {

TargetIndex::TargetIndex(const Structure& s) : domain_size_(s.domain_size())
{
    const std::size_t m = domain_size_;
    relations_.reserve(s.signature().size());
    for (std::size_t r = 0; r < s.signature().size(); ++r) {
        const Relation& rel = s.relation(r);
        RelationIndex idx;
        idx.arity = rel.arity();
        idx.projection.assign(idx.arity, Bits(m));
        for (auto t : rel)
            for (std::size_t i = 0; i < idx.arity; ++i)
                idx.projection[i].set(t[i]);

        if (idx.arity == 2 && m <= kMatrixLimit) {
            idx.has_matrix = true;
            idx.forward.assign(m, Bits(m));
            idx.backward.assign(m, Bits(m));
            idx.diagonal = Bits(m);
            for (auto t : rel) {
                idx.forward[t[0]].set(t[1]);
                idx.backward[t[1]].set(t[0]);
                if (t[0] == t[1])
                    idx.diagonal.set(t[0]);
            }
        } else if (idx.arity >= 2) {
            idx.offsets.assign(idx.arity, std::vector<std::uint32_t>(m + 1, 0));
            idx.tuple_ids.assign(idx.arity, std::vector<std::uint32_t>(rel.size()));
            for (std::size_t i = 0; i < idx.arity; ++i) {
                auto& off = idx.offsets[i];
                for (auto t : rel)
                    ++off[t[i] + 1];
                for (std::size_t e = 0; e < m; ++e)
                    off[e + 1] += off[e];
                std::vector<std::uint32_t> cursor(off.begin(), off.end() - 1);
                for (std::uint32_t id = 0; id < rel.size(); ++id)
                    idx.tuple_ids[i][cursor[rel.tuple(id)[i]]++] = id;
            }
        }
        relations_.push_back(std::move(idx));
    }
}

} // namespace tcsp::detail
