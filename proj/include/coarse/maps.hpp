#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarse/warped.hpp"

namespace coarse {

struct CoarseVerdict {
    bool controlled = false;
    bool proper = false;
    std::vector<uint32_t> expansion_profile; // per source ladder index, target index
    uint32_t proper_n0 = 0, proper_k0 = 0;
    std::string witness; // set on failure
    bool coarse() const { return controlled && proper; }
};

// Finite tabulated map between windowed spaces.
struct CoarseMapTable {
    const WindowedCoarseSpace* source = nullptr;
    const WindowedCoarseSpace* target = nullptr;
    std::vector<uint32_t> table;
    std::optional<CoarseVerdict> verdict;

    uint32_t operator()(uint32_t x) const { return table[x]; }
};

// controlled: every (f×f)(E_n) lands in some ladder entry E'_m (smallest m
// recorded); proper-in-model: frontier hop-layer comparison (see spec).
CoarseVerdict check_coarse_map(const CoarseMapTable& f);

// Tabulated generalized controlled homotopy H : X ×_U [0,1] → X.
struct ControlledHomotopy {
    const WindowedCoarseSpace* space = nullptr;
    std::vector<uint32_t> target; // subspace A, sorted
    TimeGrid grid;                // 0 = s_0 < … < s_p = 1
    std::vector<std::vector<uint32_t>> tables; // per grid time, X → X
    NeighborhoodProfile profile;

    uint32_t at(uint32_t x, uint32_t j) const { return tables[j][x]; }
    // value at the largest tabulated time <= s (step reparametrization)
    uint32_t at_time(uint32_t x, Rat64 s) const;
    ControlledHomotopy refined_double() const; // doubled grid, repeated rows
};

struct HomotopyCertificate {
    CoarseVerdict map_verdict;       // of the induced map on the warped product
    bool endpoint_identity = false;  // H_0 = id
    bool endpoint_in_target = false; // H_1(X) ⊆ A
    bool preserves_target = false;   // H(A × grid) ⊆ A
    bool suspension_ok = false;      // profile satisfies the condition for A
    std::string witness;
    bool wgcdr() const {
        return map_verdict.controlled && endpoint_identity && endpoint_in_target &&
               preserves_target && suspension_ok;
    }
};

HomotopyCertificate check_generalized_controlled_homotopy(const ControlledHomotopy& h);

// Γ^{X,A,B}: warped_product(X, grid on [-1,1], u) → X × X,
// (x,t) ↦ (H^A(x,t⁻), H^B(x,t⁺)). Retries with halved profiles (cap 8), else
// throws ProfileTooCoarse.
struct GammaData {
    WarpedSpace warped;                  // suspension domain
    WindowedCoarseSpace product;         // X × X with product ladder
    std::vector<uint32_t> table;         // warped point -> product point
    CoarseVerdict verdict;
    ControlledHomotopy ha, hb;           // the (possibly refined) homotopies
    NeighborhoodProfile profile;         // final profile on X
    uint32_t halvings = 0;

    uint32_t operator()(uint32_t w) const { return table[w]; }
};

GammaData gamma_map(const WindowedCoarseSpace& x, const std::vector<uint32_t>& a,
                    const std::vector<uint32_t>& b, const ControlledHomotopy& ha,
                    const ControlledHomotopy& hb);

} // namespace coarse
