#include "coarse/complex_ops.hpp"

#include <algorithm>

#include "coarse/error.hpp"

namespace coarse {

SubdivisionContext::SubdivisionContext(const WindowedCoarseSpace& space,
                                       std::vector<uint32_t> a, std::vector<uint32_t> b)
    : space_(&space) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    a_ = std::move(a);
    b_ = std::move(b);
    ab_ = sorted_intersection(a_, b_);

    const Relation& top = space.ladder.top();
    const uint32_t cap = space.n_points + 1;
    for (size_t n = 1; n <= space.ladder.size(); ++n) {
        auto pa = penumbra_of(space.ladder.at(n), 1, a_);
        auto pb = penumbra_of(space.ladder.at(n), 1, b_);
        auto both = sorted_intersection(pa, pb);
        uint32_t c = 0;
        std::vector<uint32_t> pen = ab_;
        bool ok = false;
        for (; c <= cap; ++c) {
            if (std::includes(pen.begin(), pen.end(), both.begin(), both.end())) {
                ok = true;
                break;
            }
            auto next = penumbra_of(top, 1, pen);
            if (next.size() == pen.size() && c > 0) break; // closure reached
            pen = std::move(next);
        }
        require(ok, "NotExcisive", "ladder index " + std::to_string(n));
        witness_comp_.push_back(c);
    }
}

uint32_t SubdivisionContext::barycenter(const std::vector<uint32_t>& q) const {
    require(!q.empty(), "BadIndex", "barycenter of empty set");
    if (q.size() == 1) return q[0];
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(q);
        if (it != memo_.end()) return it->second;
    }

    uint32_t result;
    bool in_aub = true, meets_a = false, meets_b = false;
    for (uint32_t p : q) {
        bool ia = sorted_contains(a_, p), ib = sorted_contains(b_, p);
        if (!ia && !ib) in_aub = false;
        meets_a |= ia;
        meets_b |= ib;
    }
    if (in_aub && meets_a && meets_b) {
        // smallest ladder index controlling Q, then composition extension
        size_t n = 1;
        auto controlled_at = [&](const Relation& r) {
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = i + 1; j < q.size(); ++j)
                    if (!r.related(q[i], q[j])) return false;
            return true;
        };
        uint32_t wit = 0;
        bool found = false;
        for (; n <= space_->ladder.size(); ++n)
            if (controlled_at(space_->ladder.at(n))) {
                wit = witness_comp_[n - 1];
                found = true;
                break;
            }
        if (!found) {
            // composed top scale: witness grows with the composition power
            const Relation& top = space_->ladder.top();
            Relation r = top;
            uint32_t c = 1;
            while (!controlled_at(r) && c <= space_->n_points) {
                r = r.compose(top);
                ++c;
            }
            require(controlled_at(r), "NotExcisive", "tuple never controlled");
            wit = witness_comp_.back() * c + c;
        }
        // candidates: points of A∩B whose witness-penumbra meets Q
        auto ball = penumbra_of(space_->ladder.top(), wit,
                                std::vector<uint32_t>(q.begin(), q.end()));
        auto cand = sorted_intersection(ab_, ball);
        require(!cand.empty(), "NotExcisive",
                "no barycenter candidate in A∩B near tuple");
        result = cand.front();
    } else {
        result = *std::min_element(q.begin(), q.end());
    }
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.emplace(q, result);
    return result;
}

std::vector<uint32_t> grid_index_path(const WarpedSpace& w, Rat64 from, Rat64 to) {
    ptrdiff_t i0 = w.grid.index_of(from);
    ptrdiff_t i1 = w.grid.index_of(to);
    require(i0 >= 0 && i1 >= 0, "GridTooCoarse",
            "endpoint " + from.str() + " or " + to.str() + " not on grid");
    std::vector<uint32_t> path;
    if (i0 <= i1)
        for (ptrdiff_t i = i0; i <= i1; ++i) path.push_back(static_cast<uint32_t>(i));
    else
        for (ptrdiff_t i = i0; i >= i1; --i) path.push_back(static_cast<uint32_t>(i));
    return path;
}

} // namespace coarse
