#pragma once

#include "coarse/linalg.hpp"
#include "coarse/maps.hpp"
#include "coarse/products.hpp"

namespace coarse {

// [-N..N]^dim with the sup-norm metric, frontier = outer shell, halfspace
// subspaces A = {x_0 ≤ 0}, B = {x_0 ≥ 0}. Thresholds default to
// [1.5, 2.5, diameter].
WindowedCoarseSpace build_lattice_window(uint32_t dim, int radius,
                                         std::vector<double> thresholds = {});

// finite metric spaces used as cone bases
std::vector<std::vector<double>> cycle_metric(uint32_t n);
std::vector<std::vector<double>> torus_grid_metric(uint32_t w, uint32_t h); // l1 wrap
// sup-metric wraparound grid: its 1.1-Rips complex carries the torus type
// (b1 = 2, b2 = 1), which the l1 version does not
std::vector<std::vector<double>> torus_grid_linf_metric(uint32_t w, uint32_t h);
std::vector<std::vector<double>> point_metric();

// Open cone over a finite metric space: apex at level 0,
// d((v,ℓ),(w,ℓ)) = ℓ·d_K(v,w), radial steps cost 1, shortest-path closure.
struct ConeModel {
    WindowedCoarseSpace space;
    uint32_t base_size = 0;
    uint32_t levels = 0;
    std::vector<std::vector<double>> base_dist;
    std::vector<uint32_t> set_l, set_m; // base subsets L, M

    uint32_t apex() const { return 0; }
    uint32_t vid(uint32_t v, uint32_t level) const {
        return level == 0 ? 0 : 1 + (level - 1) * base_size + v;
    }
    uint32_t level_of(uint32_t id) const {
        return id == 0 ? 0 : 1 + (id - 1) / base_size;
    }
    uint32_t vertex_of(uint32_t id) const { return id == 0 ? 0 : (id - 1) % base_size; }
    std::vector<uint32_t> cone_over(const std::vector<uint32_t>& base_subset) const;

    // radial contraction onto the cone over `target ∪ {apex}` (the apex lies
    // in every subcone, so level decrement contracts onto any of them).
    // schedule 1 is linear, 2 quadratic in the time parameter.
    ControlledHomotopy contraction(const std::vector<uint32_t>& target_cone,
                                   uint32_t steps, Rat64 profile_c,
                                   int schedule = 1) const;
    NeighborhoodProfile radial_profile(Rat64 c) const; // u(v,ℓ) = c/(1+ℓ)
};

ConeModel build_cone(const std::vector<std::vector<double>>& base_dist,
                     const std::vector<uint32_t>& subset_l,
                     const std::vector<uint32_t>& subset_m, uint32_t levels,
                     std::vector<double> thresholds = {});

// Alexander–Spanier cohomology of a finite metric space at resolution eps
// (frontier = ∅, so no collar relativity), relative to an optional subset.
struct BaseCohomologyResult {
    SlicePtr slice;
    std::vector<size_t> betti;                     // per degree in range
    std::vector<std::vector<uint64_t>> rep_index;  // representative supports
};

template <class F> struct BaseClass {
    SlicePtr slice;   // base slice at resolution eps
    uint32_t degree = 0;
    uint32_t rel = REL_NONE; // REL_A when relative to L
    std::unordered_map<uint64_t, F> val;

    Cochain<F> as_cochain() const {
        Cochain<F> c;
        c.slice = slice;
        c.degree = degree;
        c.rel = rel;
        c.val = val;
        return c;
    }
};

// base space as a windowed model: ladder [eps, eps'], empty frontier
WindowedCoarseSpace base_space_model(const std::vector<std::vector<double>>& dist,
                                     double eps, double eps2,
                                     const std::vector<uint32_t>& subset_l,
                                     const std::vector<uint32_t>& subset_m);

// Radial extension of a base cochain: e(tuple) = κ(base projection), zero on
// apex-touching tuples. T^*κ = [δe]; throws ExtensionNotCocycleAtTop when δe
// touches the collar.
template <class F>
Cochain<F> transgression_pull(const BaseClass<F>& kappa, const ConeModel& cone,
                              SlicePtr cone_slice) {
    const auto& cs = *cone_slice;
    Cochain<F> e;
    e.slice = cone_slice;
    e.degree = kappa.degree;
    e.rel = REL_NONE;
    size_t n = cs.count(kappa.degree);
    const auto& base_slice = *kappa.slice;
    for (size_t i = 0; i < n; ++i) {
        auto t = cs.tuple(kappa.degree, i);
        SmallTuple proj;
        proj.len = static_cast<uint8_t>(t.size());
        bool apex = false;
        for (size_t j = 0; j < t.size(); ++j) {
            if (t[j] == cone.apex()) { apex = true; break; }
            proj.v[j] = cone.vertex_of(t[j]);
        }
        if (apex) continue;
        ptrdiff_t bidx = base_slice.index_of(kappa.degree, proj.span());
        if (bidx < 0) continue;
        auto it = kappa.val.find(static_cast<uint64_t>(bidx));
        if (it != kappa.val.end() && !is_zero(it->second)) e.val.emplace(i, it->second);
    }
    Cochain<F> de = coboundary_sparse(e);
    for (const auto& [idx, v] : de.val) {
        if (is_zero(v)) continue;
        require(!cs.in_collar(cs.tuple(de.degree, idx)), "ExtensionNotCocycleAtTop",
                "δe reaches the collar; add levels or refine the base class");
    }
    de.rel = REL_COLLAR | (kappa.rel != REL_NONE ? REL_A : REL_NONE);
    require(de.satisfies_relativity(), "ExtensionNotCocycleAtTop",
            "transgression image fails relativity");
    return de;
}

// Restrict a relative cycle to levels ≤ shell, take ∂, project radially to the
// base. Lands in the base chain complex relative to L.
template <class F>
Chain<F> transgression_push(const Chain<F>& x, const ConeModel& cone,
                            uint32_t shell_level, SlicePtr base_slice) {
    const auto& cs = *x.slice;
    Chain<F> trunc;
    trunc.slice = x.slice;
    trunc.degree = x.degree;
    trunc.rel_quotient = REL_NONE;
    for (const auto& [idx, v] : x.val) {
        auto t = cs.tuple(x.degree, idx);
        bool inside = true;
        for (uint32_t p : t)
            if (cone.level_of(p) > shell_level) { inside = false; break; }
        if (inside) trunc.add(idx, v);
    }
    Chain<F> bd = boundary(trunc);
    Chain<F> out;
    out.slice = std::move(base_slice);
    out.degree = x.degree - 1;
    out.rel_quotient = (x.rel_quotient & REL_A) ? REL_A : REL_NONE;
    for (const auto& [idx, v] : bd.val) {
        auto t = cs.tuple(bd.degree, idx);
        SmallTuple proj;
        proj.len = static_cast<uint8_t>(t.size());
        bool apex = false;
        bool at_shell = true;
        for (size_t j = 0; j < t.size(); ++j) {
            uint32_t lvl = cone.level_of(t[j]);
            if (t[j] == cone.apex()) apex = true;
            if (lvl + 2 < shell_level) at_shell = false;
            proj.v[j] = cone.vertex_of(t[j]);
        }
        require(!apex, "RepresentativeTouchesApexCollar",
                "boundary of the truncation reaches the apex");
        if (!at_shell) {
            // below the shell only ∂x itself survives, and x is a cycle
            // relative to the cone over L: those terms must project into L
            require(out.slice->in_set(proj.span(), out.slice->set_a()),
                    "RepresentativeTouchesApexCollar",
                    "interior boundary term outside the cone over L");
            continue;
        }
        out.add_tuple(proj.span(), v);
    }
    out.normalize();
    return out;
}

} // namespace coarse
