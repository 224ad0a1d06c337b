#include "coarse/slice.hpp"

#include <algorithm>

#include "coarse/error.hpp"

namespace coarse {

TupleComplexSlice::TupleComplexSlice(const WindowedCoarseSpace& space, SliceOptions opt,
                                     std::vector<uint32_t> set_a,
                                     std::vector<uint32_t> set_b)
    : space_(&space), opt_(opt) {
    require(space.valid_scale(opt.scale), "BadIndex",
            "scale " + std::to_string(opt.scale));
    require(opt.comp >= 1, "BadIndex", "composition power must be >= 1");
    rel_ = space.ladder.at(opt.scale).power(opt.comp);

    uint32_t mf = opt.m_factor == 0 ? opt.max_degree : opt.m_factor;
    collar_steps_ = opt.margin * std::max<uint32_t>(mf, 1);
    // collar width measured at the finest ladder entry so that margins stay
    // commensurable across (scale, margin) refinements
    collar_ = penumbra_of(space.ladder.at(1), collar_steps_, space.frontier);

    std::sort(set_a.begin(), set_a.end());
    std::sort(set_b.begin(), set_b.end());
    set_a_ = std::move(set_a);
    set_b_ = std::move(set_b);
    set_aub_ = sorted_union(set_a_, set_b_);

    tuples_.resize(opt.max_degree + 1);
    counts_.assign(opt.max_degree + 1, 0);

    // degree 0
    auto& deg0 = tuples_[0];
    deg0.reserve(space.n_points);
    for (uint32_t p = 0; p < space.n_points; ++p) deg0.push_back(p);
    counts_[0] = space.n_points;

    uint64_t stored = space.n_points;
    // extend degree by degree: tuple (x_0..x_m, y) controlled iff y related to
    // every x_i; candidates = intersection of neighbor lists
    for (uint32_t m = 1; m <= opt.max_degree; ++m) {
        const auto& prev = tuples_[m - 1];
        auto& cur = tuples_[m];
        size_t prev_count = counts_[m - 1];
        std::vector<uint32_t> cand;
        for (size_t i = 0; i < prev_count; ++i) {
            const uint32_t* t = prev.data() + i * m;
            auto first = rel_.nbrs(t[0]);
            cand.assign(first.begin(), first.end());
            for (uint32_t j = 1; j < m; ++j) {
                auto nb = rel_.nbrs(t[j]);
                std::vector<uint32_t> next(std::min(cand.size(), nb.size()));
                auto end = std::set_intersection(cand.begin(), cand.end(), nb.begin(),
                                                 nb.end(), next.begin());
                next.resize(end - next.begin());
                cand.swap(next);
                if (cand.empty()) break;
            }
            for (uint32_t y : cand) {
                cur.insert(cur.end(), t, t + m);
                cur.push_back(y);
            }
            stored += cand.size() * (m + 1);
            require(stored <= opt.cap, "SliceTooLarge",
                    "projected basis exceeds cap " + std::to_string(opt.cap));
        }
        counts_[m] = cur.size() / (m + 1);
    }
}

ptrdiff_t TupleComplexSlice::index_of(uint32_t degree, std::span<const uint32_t> t) const {
    if (degree >= tuples_.size()) return -1;
    const auto& v = tuples_[degree];
    const size_t w = degree + 1;
    size_t lo = 0, hi = counts_[degree];
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        const uint32_t* mt = v.data() + mid * w;
        int cmp = 0;
        for (size_t i = 0; i < w; ++i) {
            if (mt[i] < t[i]) { cmp = -1; break; }
            if (mt[i] > t[i]) { cmp = 1; break; }
        }
        if (cmp < 0)
            lo = mid + 1;
        else if (cmp > 0)
            hi = mid;
        else
            return static_cast<ptrdiff_t>(mid);
    }
    return -1;
}

bool TupleComplexSlice::controlled(std::span<const uint32_t> t) const {
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j)
            if (!rel_.related(t[i], t[j])) return false;
    return true;
}

SlicePtr enumerate_slice(const WindowedCoarseSpace& space, SliceOptions opt,
                         std::vector<uint32_t> set_a, std::vector<uint32_t> set_b) {
    return std::make_shared<TupleComplexSlice>(space, opt, std::move(set_a),
                                               std::move(set_b));
}

} // namespace coarse
