#include "coarse/relation.hpp"

#include <algorithm>
#include <limits>

namespace coarse {

Relation Relation::from_sorted_lists(uint32_t n,
                                     std::vector<std::vector<uint32_t>>& lists) {
    Relation r;
    r.n_ = n;
    r.off_.assign(n + 1, 0);
    size_t total = 0;
    for (uint32_t i = 0; i < n; ++i) total += lists[i].size();
    r.adj_.reserve(total);
    for (uint32_t i = 0; i < n; ++i) {
        r.off_[i] = static_cast<uint32_t>(r.adj_.size());
        r.adj_.insert(r.adj_.end(), lists[i].begin(), lists[i].end());
    }
    r.off_[n] = static_cast<uint32_t>(r.adj_.size());
    return r;
}

Relation Relation::from_lists(uint32_t n, std::vector<std::vector<uint32_t>> lists) {
    lists.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
        lists[i].push_back(i);
        std::sort(lists[i].begin(), lists[i].end());
        lists[i].erase(std::unique(lists[i].begin(), lists[i].end()), lists[i].end());
    }
    return from_sorted_lists(n, lists);
}

Relation Relation::identity(uint32_t n) {
    std::vector<std::vector<uint32_t>> lists(n);
    return from_lists(n, std::move(lists));
}

Relation Relation::from_pairs(uint32_t n,
                              const std::vector<std::pair<uint32_t, uint32_t>>& pairs) {
    std::vector<std::vector<uint32_t>> lists(n);
    for (auto [a, b] : pairs) {
        lists[a].push_back(b);
        lists[b].push_back(a);
    }
    return from_lists(n, std::move(lists));
}

bool Relation::related(uint32_t a, uint32_t b) const {
    auto s = nbrs(a);
    return std::binary_search(s.begin(), s.end(), b);
}

Relation Relation::compose(const Relation& other) const {
    // (a,c) iff exists b with (a,b) in this and (b,c) in other
    std::vector<std::vector<uint32_t>> lists(n_);
    std::vector<uint8_t> mark(n_, 0);
    for (uint32_t a = 0; a < n_; ++a) {
        auto& out = lists[a];
        for (uint32_t b : nbrs(a))
            for (uint32_t c : other.nbrs(b))
                if (!mark[c]) { mark[c] = 1; out.push_back(c); }
        for (uint32_t c : out) mark[c] = 0;
        std::sort(out.begin(), out.end());
    }
    return from_sorted_lists(n_, lists);
}

Relation Relation::unite(const Relation& other) const {
    std::vector<std::vector<uint32_t>> lists(n_);
    for (uint32_t a = 0; a < n_; ++a) {
        auto s1 = nbrs(a), s2 = other.nbrs(a);
        lists[a].resize(s1.size() + s2.size());
        auto end = std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(),
                                  lists[a].begin());
        lists[a].resize(end - lists[a].begin());
    }
    return from_sorted_lists(n_, lists);
}

Relation Relation::power(uint32_t k) const {
    Relation r = *this;
    for (uint32_t i = 1; i < k; ++i) r = r.compose(*this);
    return r;
}

bool Relation::subset_of(const Relation& other) const {
    for (uint32_t a = 0; a < n_; ++a) {
        auto s1 = nbrs(a), s2 = other.nbrs(a);
        if (!std::includes(s2.begin(), s2.end(), s1.begin(), s1.end())) return false;
    }
    return true;
}

bool Relation::is_symmetric() const {
    for (uint32_t a = 0; a < n_; ++a)
        for (uint32_t b : nbrs(a))
            if (!related(b, a)) return false;
    return true;
}

bool Relation::contains_diagonal() const {
    for (uint32_t a = 0; a < n_; ++a)
        if (!related(a, a)) return false;
    return true;
}

std::vector<uint32_t> penumbra_of(const Relation& r, uint32_t k,
                                  std::vector<uint32_t> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (uint32_t step = 0; step < k; ++step) {
        std::vector<uint8_t> mark(r.points(), 0);
        for (uint32_t x : s) mark[x] = 1;
        std::vector<uint32_t> next = s;
        for (uint32_t x : s)
            for (uint32_t y : r.nbrs(x))
                if (!mark[y]) { mark[y] = 1; next.push_back(y); }
        std::sort(next.begin(), next.end());
        if (next.size() == s.size()) break; // closure reached
        s = std::move(next);
    }
    return s;
}

std::vector<uint32_t> hop_layers(const Relation& r, const std::vector<uint32_t>& s) {
    std::vector<uint32_t> layer(r.points(), std::numeric_limits<uint32_t>::max());
    std::vector<uint32_t> frontier;
    for (uint32_t x : s) { layer[x] = 0; frontier.push_back(x); }
    uint32_t d = 0;
    while (!frontier.empty()) {
        ++d;
        std::vector<uint32_t> next;
        for (uint32_t x : frontier)
            for (uint32_t y : r.nbrs(x))
                if (layer[y] == std::numeric_limits<uint32_t>::max()) {
                    layer[y] = d;
                    next.push_back(y);
                }
        frontier = std::move(next);
    }
    return layer;
}

bool sorted_contains(const std::vector<uint32_t>& sorted, uint32_t x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::vector<uint32_t> sorted_union(const std::vector<uint32_t>& a,
                                   const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out(a.size() + b.size());
    auto end = std::set_union(a.begin(), a.end(), b.begin(), b.end(), out.begin());
    out.resize(end - out.begin());
    return out;
}

std::vector<uint32_t> sorted_intersection(const std::vector<uint32_t>& a,
                                          const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out(std::min(a.size(), b.size()));
    auto end = std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), out.begin());
    out.resize(end - out.begin());
    return out;
}

} // namespace coarse
