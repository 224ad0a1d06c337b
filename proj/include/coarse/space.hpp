#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coarse/relation.hpp"

namespace coarse {

// Nested generating sequence E_1 ⊆ … ⊆ E_N of symmetric reflexive relations.
struct EntourageLadder {
    enum class Source { metric_thresholds, explicit_pairs };
    Source source = Source::explicit_pairs;
    std::vector<Relation> rel;              // 1-based via at()
    std::vector<double> thresholds;         // when metric-sourced

    size_t size() const { return rel.size(); }
    const Relation& at(size_t n) const { return rel.at(n - 1); }
    const Relation& top() const { return rel.back(); }
    void validate() const; // nesting, symmetry, diagonal
};

// Finite model of a coarse space: points, entourage ladder, frontier marking
// the direction of infinity, and named subspaces.
struct WindowedCoarseSpace {
    std::string label;
    uint32_t n_points = 0;
    EntourageLadder ladder;
    std::vector<uint32_t> frontier;                         // sorted
    std::map<std::string, std::vector<uint32_t>> subspaces; // sorted sets

    const std::vector<uint32_t>& subspace(const std::string& name) const;
    bool valid_scale(size_t n) const { return n >= 1 && n <= ladder.size(); }
};

struct SpaceConfig {
    std::string label = "space";
    // either a symmetric distance matrix or explicit per-scale pairs
    std::optional<std::vector<std::vector<double>>> metric;
    std::optional<std::vector<std::vector<std::pair<uint32_t, uint32_t>>>> scale_pairs;
    uint32_t n_points = 0; // required with scale_pairs; inferred from metric
    std::vector<double> thresholds;
    std::vector<uint32_t> frontier;
    std::map<std::string, std::vector<uint32_t>> subspaces;
};

// Deterministic construction; throws NonNestedLadder / AsymmetricDistance /
// FrontierNotSubset.
WindowedCoarseSpace build_space(const SpaceConfig& config);

// Pen_{E_n ∘ … ∘ E_n}(S), k factors.
std::vector<uint32_t> penumbra(const WindowedCoarseSpace& x, size_t n, uint32_t k,
                               const std::vector<uint32_t>& s);

// X × Y with ladder E_n ×̄ F_n (shorter ladder padded by its top), frontier
// X.frontier × Y ∪ X × Y.frontier, and synthesized product subspaces.
WindowedCoarseSpace product_space(const WindowedCoarseSpace& x,
                                  const WindowedCoarseSpace& y);

inline uint32_t product_id(uint32_t x, uint32_t y, uint32_t ny) { return x * ny + y; }

} // namespace coarse
