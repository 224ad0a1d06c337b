#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace coarse {

// Symmetric reflexive relation on points {0..n-1}, stored as sorted CSR
// adjacency (diagonal included). All entourages are of this shape.
class Relation {
public:
    Relation() : n_(0) {}

    static Relation identity(uint32_t n);
    // Builds from ordered pairs; symmetrizes and adds the diagonal.
    static Relation from_pairs(uint32_t n,
                               const std::vector<std::pair<uint32_t, uint32_t>>& pairs);
    // Builds from per-point neighbor lists (will be sorted/deduped; diagonal added).
    static Relation from_lists(uint32_t n, std::vector<std::vector<uint32_t>> lists);

    uint32_t points() const { return n_; }
    bool related(uint32_t a, uint32_t b) const;
    std::span<const uint32_t> nbrs(uint32_t a) const {
        return {adj_.data() + off_[a], adj_.data() + off_[a + 1]};
    }
    size_t pair_count() const { return adj_.size(); } // ordered pairs incl. diagonal

    Relation compose(const Relation& other) const; // this ∘ other
    Relation unite(const Relation& other) const;
    Relation power(uint32_t k) const; // k-fold composition, k >= 1
    bool subset_of(const Relation& other) const;
    bool is_symmetric() const;
    bool contains_diagonal() const;

private:
    static Relation from_sorted_lists(uint32_t n,
                                      std::vector<std::vector<uint32_t>>& lists);
    uint32_t n_;
    std::vector<uint32_t> off_;
    std::vector<uint32_t> adj_;
};

// Pen_{R∘…∘R}(S) with k factors; k = 0 returns S. S sorted.
std::vector<uint32_t> penumbra_of(const Relation& r, uint32_t k,
                                  std::vector<uint32_t> s);

// Hop layers from a set: layer 0 = S, layer j = reachable in j compositions,
// unreachable = UINT32_MAX. Empty S gives all-unreachable.
std::vector<uint32_t> hop_layers(const Relation& r, const std::vector<uint32_t>& s);

bool sorted_contains(const std::vector<uint32_t>& sorted, uint32_t x);
std::vector<uint32_t> sorted_union(const std::vector<uint32_t>& a,
                                   const std::vector<uint32_t>& b);
std::vector<uint32_t> sorted_intersection(const std::vector<uint32_t>& a,
                                          const std::vector<uint32_t>& b);

} // namespace coarse
