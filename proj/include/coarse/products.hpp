#pragma once

#include <functional>
#include <memory>
#include <mutex>

#include "coarse/complex_ops.hpp"
#include "coarse/linalg.hpp"
#include "coarse/maps.hpp"
#include "coarse/util.hpp"

namespace coarse {

// ---------------------------------------------------------------------------
// primary products
// ---------------------------------------------------------------------------

// (φ∪ψ)(x_0..x_{m+n}) = φ(x_0..x_m)·ψ(x_m..x_{m+n})
template <class F>
Cochain<F> cup(const Cochain<F>& phi, const Cochain<F>& psi) {
    require(phi.slice.get() == psi.slice.get(), "SliceMismatch", "cup across slices");
    const auto& s = *phi.slice;
    const uint32_t m = phi.degree, n = psi.degree;
    require(m + n <= s.options().max_degree, "DegreeOverflow", "cup degree");
    Cochain<F> out;
    out.slice = phi.slice;
    out.degree = m + n;
    out.rel = (phi.rel & (REL_A | REL_AUB)) | (psi.rel & (REL_B | REL_AUB)) |
              (phi.rel & psi.rel & REL_COLLAR);
    // hinge join of the sparse supports
    std::unordered_map<uint32_t, std::vector<uint64_t>> by_front; // hinge -> ψ tuples
    for (const auto& [idx, v] : psi.val) {
        auto t = s.tuple(n, idx);
        by_front[t[0]].push_back(idx);
    }
    for (const auto& [pidx, pv] : phi.val) {
        auto tp = s.tuple(m, pidx);
        auto it = by_front.find(tp[m]);
        if (it == by_front.end()) continue;
        for (uint64_t qidx : it->second) {
            auto tq = s.tuple(n, qidx);
            SmallTuple joined;
            joined.len = static_cast<uint8_t>(m + n + 1);
            for (uint32_t i = 0; i <= m; ++i) joined.v[i] = tp[i];
            for (uint32_t i = 1; i <= n; ++i) joined.v[m + i] = tq[i];
            ptrdiff_t idx = s.index_of(m + n, joined.span());
            if (idx < 0) continue; // joined tuple not controlled at this scale
            out.add(static_cast<uint64_t>(idx), pv * psi.val.at(qidx));
        }
    }
    out.normalize();
    return out;
}

// cross product evaluated on a tuple of product-space ids
template <class F>
F cross_eval(const Cochain<F>& phi, const Cochain<F>& psi, uint32_t ny,
             std::span<const uint32_t> product_tuple) {
    const uint32_t m = phi.degree, n = psi.degree;
    if (product_tuple.size() != m + n + 1) return F(0);
    SmallTuple xs, ys;
    xs.len = static_cast<uint8_t>(m + 1);
    ys.len = static_cast<uint8_t>(n + 1);
    for (uint32_t i = 0; i <= m; ++i) xs.v[i] = product_tuple[i] / ny;
    for (uint32_t i = 0; i <= n; ++i) ys.v[i] = product_tuple[m + i] % ny;
    F a = phi.eval(xs.span());
    if (is_zero(a)) return F(0);
    return a * psi.eval(ys.span());
}

// c∩φ = Σ m_x̄ · φ(x_m, x_{m-1}, …, x_{m-n}) · (x_0..x_{m-n})
template <class F>
Chain<F> cap(const Chain<F>& c, const Cochain<F>& phi) {
    require(c.slice.get() == phi.slice.get(), "SliceMismatch", "cap across slices");
    const uint32_t m = c.degree, n = phi.degree;
    require(n <= m, "DegreeError", "cap needs deg φ ≤ deg c");
    const auto& s = *c.slice;
    Chain<F> out;
    out.slice = c.slice;
    out.degree = m - n;
    out.rel_quotient = c.rel_quotient;
    for (const auto& [idx, v] : c.val) {
        auto t = s.tuple(m, idx);
        SmallTuple tail;
        tail.len = static_cast<uint8_t>(n + 1);
        for (uint32_t i = 0; i <= n; ++i) tail.v[i] = t[m - i];
        F f = phi.eval(tail.span());
        if (is_zero(f)) continue;
        SmallTuple head;
        head.len = static_cast<uint8_t>(m - n + 1);
        for (uint32_t i = 0; i <= m - n; ++i) head.v[i] = t[i];
        ptrdiff_t hidx = s.index_of(m - n, head.span());
        require(hidx >= 0, "BadIndex", "cap head escaped slice");
        out.add(static_cast<uint64_t>(hidx), v * f);
    }
    out.normalize();
    return out;
}

// slant of a formal product chain: (m₁·((x_0,y_0)..(x_m,y_m)))/φ =
// m₁·φ(y_m,…,y_{m-n})·(x_0..x_{m-n}); lands on the given X slice.
template <class F>
Chain<F> slant(const FormalChain<F>& c, uint32_t degree_c, const Cochain<F>& phi,
               uint32_t ny, SlicePtr slice_x, uint32_t rel_quotient) {
    const uint32_t m = degree_c, n = phi.degree;
    require(n <= m, "DegreeError", "slant needs deg φ ≤ deg c");
    Chain<F> out;
    out.slice = std::move(slice_x);
    out.degree = m - n;
    out.rel_quotient = rel_quotient;
    for (const auto& [t, v] : c.val) {
        if (is_zero(v)) continue;
        SmallTuple tail;
        tail.len = static_cast<uint8_t>(n + 1);
        for (uint32_t i = 0; i <= n; ++i) tail.v[i] = t.v[m - i] % ny;
        F f = phi.eval(tail.span());
        if (is_zero(f)) continue;
        SmallTuple head;
        head.len = static_cast<uint8_t>(m - n + 1);
        for (uint32_t i = 0; i <= m - n; ++i) head.v[i] = t.v[i] / ny;
        // quotiented heads never need to be controlled
        if (tuple_flagged(*out.slice, head.span(), rel_quotient)) continue;
        out.add_tuple(head.span(), v * f);
    }
    out.normalize();
    return out;
}

// s_oφ(x_0..x_{m-1}) = φ(o, x_0..x_{m-1})
template <class F>
Cochain<F> s_op(const Cochain<F>& phi, uint32_t o) {
    require(phi.degree >= 1, "DegreeUnderflow", "s_o needs degree ≥ 1");
    const auto& s = *phi.slice;
    Cochain<F> out;
    out.slice = phi.slice;
    out.degree = phi.degree - 1;
    out.rel = REL_NONE;
    for (const auto& [idx, v] : phi.val) {
        auto t = s.tuple(phi.degree, idx);
        if (t[0] != o) continue;
        SmallTuple rest;
        rest.len = static_cast<uint8_t>(phi.degree);
        for (uint32_t i = 1; i <= phi.degree; ++i) rest.v[i - 1] = t[i];
        ptrdiff_t ridx = s.index_of(phi.degree - 1, rest.span());
        require(ridx >= 0, "BadIndex", "face missing");
        out.add(static_cast<uint64_t>(ridx), v);
    }
    out.normalize();
    return out;
}

// r_o c = Σ m_x̄ (o, x̄)
template <class F>
Chain<F> r_op(const Chain<F>& c, uint32_t o) {
    const auto& s = *c.slice;
    require(c.degree + 1 <= s.options().max_degree, "DegreeOverflow", "r_o degree");
    Chain<F> out;
    out.slice = c.slice;
    out.degree = c.degree + 1;
    out.rel_quotient = c.rel_quotient;
    for (const auto& [idx, v] : c.val) {
        SmallTuple t(s.tuple(c.degree, idx));
        SmallTuple ext = t.insert(0, o);
        ptrdiff_t eidx = s.index_of(c.degree + 1, ext.span());
        require(eidx >= 0, "UncontrolledProlongation",
                "(o, x̄) not controlled at working scale");
        out.add(static_cast<uint64_t>(eidx), v);
    }
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// Roe secondary products
// ---------------------------------------------------------------------------

// φ*ψ = (−1)^{m+1}(s_aφ)∪ψ + φ∪(s_bψ), subdivided into the A∪B-relative
// complex. Inputs must be cocycles rel A (resp. B) and collar.
template <class F>
Cochain<F> roe_secondary_cup(const Cochain<F>& phi, const Cochain<F>& psi, uint32_t a,
                             uint32_t b, const SubdivisionContext& ctx) {
    require(!phi.slice->set_a().empty() && !psi.slice->set_b().empty(), "EmptySubset",
            "Roe product needs nonempty A and B");
    require(coboundary_sparse(phi).zero(), "NotCocycle", "φ");
    require(coboundary_sparse(psi).zero(), "NotCocycle", "ψ");
    const uint32_t m = phi.degree;
    Cochain<F> first = cup(s_op(phi, a), psi);
    Cochain<F> second = cup(phi, s_op(psi, b));
    F sign = (m % 2 == 0) ? F(-1) : F(1); // (−1)^{m+1}
    Cochain<F> star = first.scaled(sign) + second;
    star.rel = REL_COLLAR | REL_A | REL_B;
    require(star.satisfies_relativity(), "NotCocycle", "φ*ψ fails A+B relativity");
    require(coboundary_sparse(star).zero(), "NotCocycle", "δ(φ*ψ) ≠ 0 in model");
    Cochain<F> out = subdivision(star, ctx);
    out.rel = REL_COLLAR | REL_AUB;
    require(out.satisfies_relativity(), "NotCocycle", "S(φ*ψ) fails A∪B relativity");
    require(coboundary_sparse(out).zero(), "NotCocycle", "δS(φ*ψ) ≠ 0");
    return out;
}

// c⋇φ = −r_a(c∩φ) − (−1)^m c∩(s_bφ); lands rel A.
template <class F>
Chain<F> roe_secondary_cap(const Chain<F>& c, const Cochain<F>& phi, uint32_t a,
                           uint32_t b) {
    const uint32_t m = c.degree, n = phi.degree;
    Chain<F> work = c;
    work.rel_quotient = REL_COLLAR | REL_A | REL_B;
    work.normalize(); // canonical representative of the A+B quotient
    require(boundary(work).zero_mod_quotient(), "NotCycle", "∂c ≠ 0 rel A+B");
    require(coboundary_sparse(phi).zero(), "NotCocycle", "φ");

    Chain<F> capped = cap(work, phi);
    capped.rel_quotient = REL_COLLAR | REL_A;
    capped.normalize();
    Chain<F> first = r_op(capped, a);

    Chain<F> out;
    if (n >= 1) {
        Chain<F> second = cap(work, s_op(phi, b));
        second.rel_quotient = REL_COLLAR | REL_A;
        F sign = (m % 2 == 0) ? F(-1) : F(1); // −(−1)^m
        out = first.scaled(F(-1)) + second.scaled(sign);
    } else {
        out = first.scaled(F(-1));
    }
    out.rel_quotient = REL_COLLAR | REL_A;
    out.normalize();
    require(boundary(out).zero_mod_quotient(), "NotCycle", "∂(c⋇φ) ≠ 0 rel A");
    return out;
}

// ---------------------------------------------------------------------------
// suspension
// ---------------------------------------------------------------------------

// Warped suspension of (X, S) over a symmetric grid on [-1,1]; e1 = -1 is the
// distinguished end, C = X×{+1} ∪ S×I.
template <class F> struct SuspensionSetup {
    const WindowedCoarseSpace* space = nullptr;
    std::vector<uint32_t> set_s; // A∪B
    WarpedSpace warped;
    SlicePtr slice_x;  // carries set_a/set_b of the triad (or S twice)
    SlicePtr slice_w;  // markers: set_a = Z_A, set_b = Z_B (may be null: lazy ops)
    Relation rel_w;    // controlledness relation for warped tuples
    std::vector<uint32_t> z_a, z_b, z_all, c_set; // point sets on W
    uint32_t e1_index = 0, e2_index = 0, zero_index = 0;

    uint32_t wid(uint32_t x, uint32_t ti) const { return warped.wid(x, ti); }
};

template <class F>
SuspensionSetup<F> make_suspension(const WindowedCoarseSpace& x,
                                   const std::vector<uint32_t>& set_a,
                                   const std::vector<uint32_t>& set_b, SlicePtr slice_x,
                                   const TimeGrid& grid, const NeighborhoodProfile& u,
                                   bool enumerate_w, SliceOptions wopts) {
    SuspensionSetup<F> s;
    s.space = &x;
    s.set_s = sorted_union(set_a, set_b);
    {
        std::string wit;
        require(satisfies_suspension_condition(x, s.set_s, u, &wit),
                "ProfileViolatesSuspension", wit);
    }
    s.warped = warped_product(x, grid, u);
    s.slice_x = std::move(slice_x);
    s.e1_index = 0;
    s.e2_index = static_cast<uint32_t>(grid.size() - 1);
    ptrdiff_t zi = grid.index_of(Rat64(0));
    require(zi >= 0, "GridTooCoarse", "grid must contain 0");
    s.zero_index = static_cast<uint32_t>(zi);
    require(grid.t.front() == Rat64(-1) && grid.t.back() == Rat64(1), "GridTooCoarse",
            "suspension grid must span [-1,1]");

    auto e1 = s.warped.slice_set(s.e1_index);
    auto e2 = s.warped.slice_set(s.e2_index);
    auto a_i = s.warped.lift_set(set_a);
    auto b_i = s.warped.lift_set(set_b);
    s.z_a = sorted_union(e1, a_i);
    s.z_b = sorted_union(e2, b_i);
    s.z_all = sorted_union(s.z_a, s.z_b);
    s.c_set = sorted_union(e2, s.warped.lift_set(s.set_s));

    s.rel_w = s.warped.derived.ladder.at(wopts.scale).power(wopts.comp);
    if (enumerate_w)
        s.slice_w = enumerate_slice(s.warped.derived, wopts, s.z_a, s.z_b);
    return s;
}

// σ_* c = P⁺c − P⁻c with P^± = −(prism from slice 0 to slice ±1).
// Returns the formal chain on warped tuples; checks the prism contract
// ∂P^± + P^±∂ = ι_± exactly modulo tuples inside the far-end slice.
template <class F>
FormalChain<F> sigma_push_formal(const SuspensionSetup<F>& s, const Chain<F>& c) {
    const auto& sl = *c.slice;
    const uint32_t m = c.degree;
    FormalChain<F> total;
    total.width = m + 2;
    for (int half = 0; half < 2; ++half) {
        Rat64 target = half == 0 ? Rat64(1) : Rat64(-1);
        auto path = grid_index_path(s.warped, Rat64(0), target);
        FormalChain<F> prism;
        prism.width = m + 2;
        F outer = half == 0 ? F(-1) : F(1); // P^± = −prism; total = P⁺ − P⁻
        for (const auto& [idx, v] : c.val) {
            if (is_zero(v)) continue;
            accumulate_prism(s.warped, sl.tuple(m, idx), path, outer * v, prism);
        }
        // contract: ∂(P^±c) + P^±(∂c) − ι_0 c ≡ 0 mod far-end tuples
        FormalChain<F> check = formal_boundary(prism);
        if (m >= 1) {
            Chain<F> bc = c;
            bc.rel_quotient = REL_NONE; // the identity is formal
            bc = boundary(bc);
            for (const auto& [idx, v] : bc.val)
                accumulate_prism(s.warped, sl.tuple(m - 1, idx), path,
                                 (half == 0 ? F(-1) : F(1)) * v, check);
        }
        for (const auto& [idx, v] : c.val) {
            SmallTuple t(sl.tuple(m, idx));
            SmallTuple emb;
            emb.len = t.len;
            for (uint32_t i = 0; i < t.len; ++i) emb.v[i] = s.wid(t.v[i], s.zero_index);
            check.add(emb, F(0) - v);
        }
        uint32_t far = half == 0 ? s.e2_index : s.e1_index;
        for (const auto& [t, v] : check.val) {
            if (is_zero(v)) continue;
            bool far_slice = true;
            for (uint32_t i = 0; i < t.len; ++i)
                if (s.warped.time_of(t.v[i]) != far) { far_slice = false; break; }
            require(far_slice, "GridTooCoarse",
                    "prism contract failed off the far-end slice");
        }
        for (const auto& [t, v] : prism.val) total.add(t, v);
    }
    // controlledness of every summand
    for (const auto& [t, v] : total.val) {
        if (is_zero(v)) continue;
        for (uint32_t i = 0; i < t.len; ++i)
            for (uint32_t j = i + 1; j < t.len; ++j)
                require(s.rel_w.related(t.v[i], t.v[j]), "GridTooCoarse",
                        "prism tuple not controlled; refine the grid");
    }
    return total;
}

// public op: prism of one half, landed on the enumerated warped slice
template <class F>
Chain<F> prism(const Chain<F>& c, int half, const SuspensionSetup<F>& s) {
    require(s.slice_w != nullptr, "BadIndex", "prism needs an enumerated warped slice");
    const auto& sl = *c.slice;
    const uint32_t m = c.degree;
    auto path = grid_index_path(s.warped, Rat64(0), half > 0 ? Rat64(1) : Rat64(-1));
    FormalChain<F> pr;
    pr.width = m + 2;
    for (const auto& [idx, v] : c.val)
        accumulate_prism(s.warped, sl.tuple(m, idx), path, F(-1) * v, pr);
    Chain<F> out;
    out.slice = s.slice_w;
    out.degree = m + 1;
    out.rel_quotient = REL_COLLAR | (half > 0 ? REL_B : REL_A); // far-end parts
    for (const auto& [t, v] : pr.val) {
        ptrdiff_t idx = s.slice_w->index_of(m + 1, t.span());
        require(idx >= 0, "GridTooCoarse", "prism tuple escaped the warped slice");
        out.add(static_cast<uint64_t>(idx), v);
    }
    return out;
}

template <class F>
Chain<F> suspension_push(const SuspensionSetup<F>& s, const Chain<F>& c) {
    require(s.slice_w != nullptr, "BadIndex", "suspension_push needs a warped slice");
    FormalChain<F> total = sigma_push_formal(s, c);
    Chain<F> out;
    out.slice = s.slice_w;
    out.degree = c.degree + 1;
    out.rel_quotient = REL_COLLAR | REL_AUB; // Z-parts quotiented
    for (const auto& [t, v] : total.val) {
        ptrdiff_t idx = s.slice_w->index_of(c.degree + 1, t.span());
        require(idx >= 0, "GridTooCoarse", "suspension chain escaped the warped slice");
        out.add(static_cast<uint64_t>(idx), v);
    }
    out.normalize();
    // ∂σ_*c − ι_{e1}c must live in C ∪ collar: the triple's connecting map
    // returns the excision-embedded class (∂∘σ_* = id).
    FormalChain<F> bd = formal_boundary(total);
    const auto& sl = *c.slice;
    for (const auto& [idx, v] : c.val) {
        SmallTuple t(sl.tuple(c.degree, idx));
        SmallTuple emb;
        emb.len = t.len;
        for (uint32_t i = 0; i < t.len; ++i) emb.v[i] = s.wid(t.v[i], s.e1_index);
        bd.add(emb, F(0) - v);
    }
    const auto& wsl = *s.slice_w;
    for (const auto& [t, v] : bd.val) {
        if (is_zero(v)) continue;
        bool in_c = wsl.in_set(t.span(), s.c_set);
        bool in_collar = wsl.in_set(t.span(), wsl.collar_set());
        require(in_c || in_collar, "GridTooCoarse",
                "∂σ_* failed to reduce to the e1 slice");
    }
    return out;
}

// σ^* through the transposed slide-to-+1 prism contraction of (W, C):
// w(x̄) = −(Sz)(slide prism of x̄@e1). Lazy in z; make_z is called once per
// worker chunk so evaluators may hold private caches.
template <class F>
using ZEvalFactory =
    std::function<std::function<F(std::span<const uint32_t>)>()>;

template <class F>
Cochain<F> suspension_pull_eval(const SuspensionSetup<F>& s, uint32_t z_degree,
                                const ZEvalFactory<F>& make_z,
                                uint32_t out_rel = REL_COLLAR | REL_AUB,
                                unsigned threads = 0) {
    require(z_degree >= 1, "DegreeUnderflow", "suspension pull");
    const auto& sx = *s.slice_x;
    const uint32_t out_deg = z_degree - 1;
    Cochain<F> out;
    out.slice = s.slice_x;
    out.degree = out_deg;
    out.rel = out_rel;
    size_t n = sx.count(out_deg);
    std::vector<F> vals(n, F(0));
    parallel_for(n, [&](size_t lo, size_t hi) {
        auto z = make_z();
        for (size_t i = lo; i < hi; ++i) {
            auto t = sx.tuple(out_deg, i);
            if (tuple_flagged(sx, t, out_rel)) continue;
            SmallTuple emb;
            emb.len = static_cast<uint8_t>(t.size());
            for (size_t j = 0; j < t.size(); ++j)
                emb.v[j] = s.wid(t[j], s.e1_index);
            FormalChain<F> pr;
            pr.width = emb.len + 1;
            accumulate_slide_prism(s.warped, emb.span(), F(1), pr);
            F acc(0);
            for (const auto& [u, c] : pr.val) {
                F zv = z(u.span());
                if (!is_zero(zv)) acc += c * zv;
            }
            vals[i] = F(0) - acc;
        }
    }, threads);
    for (size_t i = 0; i < n; ++i)
        if (!is_zero(vals[i])) out.val.emplace(i, vals[i]);
    out.normalize();
    return out;
}

// σ^* of a materialized cochain on the warped slice (checks controlledness of
// contributing prism tuples). Kept as the public operation.
template <class F>
Cochain<F> suspension_pull(const SuspensionSetup<F>& s, const Cochain<F>& z) {
    require(s.slice_w != nullptr && z.slice.get() == s.slice_w.get(), "PairMismatch",
            "suspension_pull expects a cochain on the warped slice");
    ZEvalFactory<F> factory = [&z]() {
        return [&z](std::span<const uint32_t> t) -> F { return z.eval(t); };
    };
    Cochain<F> out = suspension_pull_eval<F>(s, z.degree, factory);
    require(coboundary_sparse(out).zero(), "NotCocycle", "σ^* output not a cocycle");
    return out;
}

// solve route: δu = z in the middle complex CX^*(W, C) (acyclic for suitable
// profiles), then restrict u along x ↦ (x, e1). Cross-checks the prism route.
template <class F>
Cochain<F> suspension_pull_solve(const SuspensionSetup<F>& s, const Cochain<F>& z) {
    require(s.slice_w != nullptr, "BadIndex", "solve route needs the warped slice");
    PairComplex<F> middle(s.slice_w, REL_COLLAR, true, std::nullopt, s.c_set);
    SparseVec<F> target = middle.to_coords(z.val, z.degree);
    SparseVec<F> cert;
    auto u = middle.solve_d(z.degree - 1, target, &cert);
    require(u.has_value(), "VanishingHypothesisFails",
            "middle complex not acyclic at this degree (refine the profile)");
    auto uval = middle.from_coords(*u, z.degree - 1);
    Cochain<F> out;
    out.slice = s.slice_x;
    out.degree = z.degree - 1;
    out.rel = REL_COLLAR | REL_AUB;
    const auto& sx = *s.slice_x;
    const auto& sw = *s.slice_w;
    size_t n = sx.count(out.degree);
    for (size_t i = 0; i < n; ++i) {
        auto t = sx.tuple(out.degree, i);
        SmallTuple emb;
        emb.len = static_cast<uint8_t>(t.size());
        for (size_t j = 0; j < t.size(); ++j) emb.v[j] = s.wid(t[j], s.e1_index);
        ptrdiff_t widx = sw.index_of(out.degree, emb.span());
        if (widx < 0) continue;
        auto it = uval.find(static_cast<uint64_t>(widx));
        if (it != uval.end() && !is_zero(it->second)) out.add(i, it->second);
    }
    out.normalize();
    require(coboundary_sparse(out).zero(), "NotCocycle", "σ^*(solve) not a cocycle");
    return out;
}

// ---------------------------------------------------------------------------
// deformation triads and the secondary products
// ---------------------------------------------------------------------------

template <class F> struct DeformationTriad {
    const WindowedCoarseSpace* space = nullptr;
    std::vector<uint32_t> a, b;
    ControlledHomotopy ha, hb;
    HomotopyCertificate cert_a, cert_b;
    GammaData gamma;
    SuspensionSetup<F> susp;
    std::shared_ptr<SubdivisionContext> subdiv_x; // triad (X; A, B)
    std::shared_ptr<SubdivisionContext> subdiv_w; // triad (W; Z_A, Z_B)
};

// Builds a certified triad. slice_x carries set_a = A, set_b = B and is the
// complex every product result lands on. enumerate_w only for small instances.
template <class F>
DeformationTriad<F> make_deformation_triad(const WindowedCoarseSpace& x,
                                           const std::vector<uint32_t>& a,
                                           const std::vector<uint32_t>& b,
                                           const ControlledHomotopy& ha,
                                           const ControlledHomotopy& hb,
                                           SlicePtr slice_x, bool enumerate_w = false,
                                           SliceOptions wopts = {}) {
    DeformationTriad<F> t;
    t.space = &x;
    t.a = a;
    t.b = b;
    std::sort(t.a.begin(), t.a.end());
    std::sort(t.b.begin(), t.b.end());
    t.cert_a = check_generalized_controlled_homotopy(ha);
    require(t.cert_a.wgcdr(), "TriadNotCertified", "H^A: " + t.cert_a.witness);
    t.cert_b = check_generalized_controlled_homotopy(hb);
    require(t.cert_b.wgcdr(), "TriadNotCertified", "H^B: " + t.cert_b.witness);
    t.gamma = gamma_map(x, t.a, t.b, ha, hb);
    t.ha = t.gamma.ha;
    t.hb = t.gamma.hb;

    if (wopts.scale == 0) {
        wopts = slice_x->options();
        wopts.comp = slice_x->options().comp + 1;
    }
    t.susp = make_suspension<F>(x, t.a, t.b, slice_x, t.gamma.warped.grid,
                                t.gamma.profile, enumerate_w, wopts);
    t.subdiv_x = std::make_shared<SubdivisionContext>(x, t.a, t.b);
    t.subdiv_w = std::make_shared<SubdivisionContext>(t.susp.warped.derived, t.susp.z_a,
                                                      t.susp.z_b);
    return t;
}

// x ⌣̃ y = (−1)^m σ^*( S( Γ^*(x × y) ) )
template <class F>
Cochain<F> secondary_cup(const Cochain<F>& phi, const Cochain<F>& psi,
                         const DeformationTriad<F>& t, unsigned threads = 0) {
    require(coboundary_sparse(phi).zero(), "NotCocycle", "x");
    require(coboundary_sparse(psi).zero(), "NotCocycle", "y");
    const uint32_t m = phi.degree, n = psi.degree;
    const uint32_t ny = t.space->n_points;
    const auto& warped = t.susp.warped;
    const auto& gamma = t.gamma;

    // z' = S(Γ^*(φ×ψ)) in the triad (W; Z_A, Z_B); each worker chunk owns a
    // subdivider with private memo tables
    ZEvalFactory<F> factory = [&]() {
        auto sub = std::make_shared<Subdivider<F>>(*t.subdiv_w);
        return [&, sub](std::span<const uint32_t> wt) -> F {
            auto gamma_cross = [&](std::span<const uint32_t> ut) -> F {
                SmallTuple mapped;
                mapped.len = static_cast<uint8_t>(ut.size());
                for (size_t i = 0; i < ut.size(); ++i) mapped.v[i] = gamma.table[ut[i]];
                return cross_eval(phi, psi, ny, mapped.span());
            };
            return sub->eval_sd(SmallTuple(wt), gamma_cross);
        };
    };

    Cochain<F> w = suspension_pull_eval<F>(t.susp, m + n, factory,
                                           REL_COLLAR | REL_AUB, threads);
    F sign = (m % 2 == 0) ? F(1) : F(-1);
    Cochain<F> out = w.scaled(sign);
    require(out.satisfies_relativity(), "NotCocycle", "⌣̃ output relativity");
    require(coboundary_sparse(out).zero(), "NotCocycle", "δ(x ⌣̃ y) ≠ 0");
    return out;
}

// x ⌢̃ y = (−1)^{m+1} (Γ_*(σ_* x)) / y
template <class F>
Chain<F> secondary_cap(const Chain<F>& c, const Cochain<F>& psi,
                       const DeformationTriad<F>& t) {
    const uint32_t m = c.degree;
    require(coboundary_sparse(psi).zero(), "NotCocycle", "y");
    {
        Chain<F> work = c;
        work.rel_quotient = REL_COLLAR | REL_A | REL_B;
        work.normalize();
        require(boundary(work).zero_mod_quotient(), "NotCycle", "∂x ≠ 0 rel A+B");
    }
    FormalChain<F> sigma = sigma_push_formal(t.susp, c);
    // Γ pushforward onto X × X
    FormalChain<F> pushed;
    pushed.width = sigma.width;
    for (const auto& [wt, v] : sigma.val) {
        SmallTuple mapped;
        mapped.len = wt.len;
        for (uint32_t i = 0; i < wt.len; ++i) mapped.v[i] = t.gamma.table[wt.v[i]];
        pushed.add(mapped, v);
    }
    // A×X parts land in the quotient, X×B parts die against ψ, collar parts
    // are quotiented: slant handles all three through flags and ψ-vanishing.
    const uint32_t ny = t.space->n_points;
    Chain<F> out = slant(pushed, m + 1, psi, ny, t.susp.slice_x, REL_COLLAR | REL_A);
    F sign = (m % 2 == 0) ? F(-1) : F(1); // (−1)^{m+1}
    out = out.scaled(sign);
    out.normalize();
    require(boundary(out).zero_mod_quotient(), "NotCycle", "∂(x ⌢̃ y) ≠ 0 rel A");
    return out;
}

// ---------------------------------------------------------------------------
// classes
// ---------------------------------------------------------------------------

template <class F> struct HomologyClass {
    std::shared_ptr<PairComplex<F>> pair;
    uint32_t degree = 0;
    std::unordered_map<uint64_t, F> rep;
    StabilizationRecord stabilization;
};

template <class F> struct HomologyGroup {
    size_t betti = 0;
    std::vector<HomologyClass<F>> classes;
};

template <class F>
HomologyGroup<F> homology_of_pair(std::shared_ptr<PairComplex<F>> pair, uint32_t m) {
    HomologyGroup<F> g;
    g.betti = pair->betti(m);
    for (const auto& r : pair->representatives(m)) {
        HomologyClass<F> cls;
        cls.pair = pair;
        cls.degree = m;
        cls.rep = pair->from_coords(r, m);
        g.classes.push_back(std::move(cls));
    }
    return g;
}

template <class F>
bool classes_equal(const HomologyClass<F>& x, const HomologyClass<F>& y) {
    require(x.pair.get() == y.pair.get() && x.degree == y.degree, "PairMismatch",
            "classes_equal across pairs");
    auto diff = x.rep;
    for (const auto& [idx, v] : y.rep) {
        auto [it, fresh] = diff.emplace(idx, F(0) - v);
        if (!fresh) {
            it->second -= v;
            if (is_zero(it->second)) diff.erase(it);
        }
    }
    SparseVec<F> d = x.pair->to_coords(diff, x.degree);
    require(x.pair->is_cycle(d, x.degree), "PairMismatch", "difference not a cycle");
    return x.pair->is_boundary(std::move(d), x.degree);
}

template <class F> struct CoboundarySolution {
    bool in_image = false;
    std::unordered_map<uint64_t, F> preimage;    // when in_image
    std::unordered_map<uint64_t, F> certificate; // reduced remainder otherwise
};

template <class F>
CoboundarySolution<F> solve_coboundary(const std::unordered_map<uint64_t, F>& target,
                                       std::shared_ptr<PairComplex<F>> pair,
                                       uint32_t target_degree) {
    CoboundarySolution<F> sol;
    bool cochain = pair->cochain_side();
    uint32_t from = cochain ? target_degree - 1 : target_degree + 1;
    if (cochain && target_degree == 0) {
        sol.in_image = target.empty();
        return sol;
    }
    SparseVec<F> t = pair->to_coords(target, target_degree);
    SparseVec<F> cert;
    auto x = pair->solve_d(from, std::move(t), &cert);
    if (x) {
        sol.in_image = true;
        sol.preimage = pair->from_coords(*x, from);
    } else {
        sol.certificate = pair->from_coords(cert, target_degree);
    }
    return sol;
}

} // namespace coarse
