#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "coarse/space.hpp"

namespace coarse {

struct SliceOptions {
    uint32_t scale = 1;      // ladder index
    uint32_t comp = 1;       // composition power of E_scale used to control tuples
    uint32_t margin = 1;     // collar margin k
    uint32_t max_degree = 2; // d
    uint32_t m_factor = 0;   // collar width = margin * m_factor; 0 = max_degree
    uint64_t cap = 80'000'000; // SliceTooLarge beyond this many stored entries
};

// Enumerated basis of controlled tuples of a windowed space at one scale:
// degree m holds all ordered (m+1)-tuples whose entries are pairwise related
// under R = E_scale^comp, in lexicographic order. Markers are derived from
// point sets (collar, A, B) on demand.
class TupleComplexSlice {
public:
    TupleComplexSlice(const WindowedCoarseSpace& space, SliceOptions opt,
                      std::vector<uint32_t> set_a, std::vector<uint32_t> set_b);

    const WindowedCoarseSpace& space() const { return *space_; }
    const SliceOptions& options() const { return opt_; }
    const Relation& relation() const { return rel_; }
    uint32_t collar_steps() const { return collar_steps_; }

    const std::vector<uint32_t>& collar_set() const { return collar_; }
    const std::vector<uint32_t>& set_a() const { return set_a_; }
    const std::vector<uint32_t>& set_b() const { return set_b_; }
    const std::vector<uint32_t>& set_aub() const { return set_aub_; }

    size_t count(uint32_t degree) const { return counts_.at(degree); }
    std::span<const uint32_t> tuple(uint32_t degree, size_t idx) const {
        const auto& v = tuples_[degree];
        return {v.data() + idx * (degree + 1), degree + 1};
    }
    // index of a raw tuple in the slice; -1 when absent (zero extension)
    ptrdiff_t index_of(uint32_t degree, std::span<const uint32_t> t) const;
    bool controlled(std::span<const uint32_t> t) const; // pairwise related

    bool in_set(std::span<const uint32_t> t, const std::vector<uint32_t>& set) const {
        for (uint32_t p : t)
            if (!sorted_contains(set, p)) return false;
        return !t.empty();
    }
    bool in_collar(std::span<const uint32_t> t) const { return in_set(t, collar_); }
    bool in_a(std::span<const uint32_t> t) const { return in_set(t, set_a_); }
    bool in_b(std::span<const uint32_t> t) const { return in_set(t, set_b_); }
    bool in_aub(std::span<const uint32_t> t) const { return in_set(t, set_aub_); }

private:
    const WindowedCoarseSpace* space_;
    SliceOptions opt_;
    Relation rel_;
    uint32_t collar_steps_;
    std::vector<uint32_t> collar_, set_a_, set_b_, set_aub_;
    std::vector<std::vector<uint32_t>> tuples_; // per degree, flat
    std::vector<size_t> counts_;
};

using SlicePtr = std::shared_ptr<const TupleComplexSlice>;

SlicePtr enumerate_slice(const WindowedCoarseSpace& space, SliceOptions opt,
                         std::vector<uint32_t> set_a = {},
                         std::vector<uint32_t> set_b = {});

// Relativity flags: a cochain vanishes on tuples carrying any flagged marker;
// a chain is taken modulo coefficients on flagged tuples.
enum RelFlag : uint32_t {
    REL_NONE = 0,
    REL_COLLAR = 1,
    REL_A = 2,
    REL_B = 4,
    REL_AUB = 8,
};

inline bool tuple_flagged(const TupleComplexSlice& s, std::span<const uint32_t> t,
                          uint32_t flags) {
    if ((flags & REL_COLLAR) && s.in_collar(t)) return true;
    if ((flags & REL_A) && s.in_a(t)) return true;
    if ((flags & REL_B) && s.in_b(t)) return true;
    if ((flags & REL_AUB) && s.in_aub(t)) return true;
    return false;
}

} // namespace coarse
