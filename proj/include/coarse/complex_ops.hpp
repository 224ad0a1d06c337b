#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "coarse/cochain.hpp"
#include "coarse/warped.hpp"

namespace coarse {

// Alexander–Spanier coboundary: δφ(x_0..x_{m+1}) = Σ (−1)^i φ(drop i).
template <class F> Cochain<F> coboundary(const Cochain<F>& phi) {
    const auto& s = *phi.slice;
    require(phi.degree + 1 <= s.options().max_degree, "DegreeOverflow",
            "coboundary beyond slice max degree");
    Cochain<F> out;
    out.slice = phi.slice;
    out.degree = phi.degree + 1;
    out.rel = phi.rel;
    const uint32_t m1 = phi.degree + 2; // entries of output tuples
    size_t n_out = s.count(out.degree);
    for (size_t idx = 0; idx < n_out; ++idx) {
        auto t = s.tuple(out.degree, idx);
        F acc(0);
        bool any = false;
        SmallTuple st(t);
        for (uint32_t i = 0; i < m1; ++i) {
            F v = phi.eval(st.face(i).span());
            if (!is_zero(v)) {
                any = true;
                acc += (i % 2 == 0) ? v : -v;
            }
        }
        if (any && !is_zero(acc)) out.val.emplace(idx, acc);
    }
    out.normalize();
    return out;
}

// Faster coboundary for sparse inputs: scatter over cofaces.
template <class F> Cochain<F> coboundary_sparse(const Cochain<F>& phi) {
    const auto& s = *phi.slice;
    require(phi.degree + 1 <= s.options().max_degree, "DegreeOverflow",
            "coboundary beyond slice max degree");
    Cochain<F> out;
    out.slice = phi.slice;
    out.degree = phi.degree + 1;
    out.rel = phi.rel;
    const Relation& r = s.relation();
    for (const auto& [idx, v] : phi.val) {
        if (is_zero(v)) continue;
        auto t = s.tuple(phi.degree, idx);
        // candidates related to every entry
        std::vector<uint32_t> cand(r.nbrs(t[0]).begin(), r.nbrs(t[0]).end());
        for (size_t j = 1; j < t.size(); ++j) {
            auto nb = r.nbrs(t[j]);
            std::vector<uint32_t> nx(std::min(cand.size(), nb.size()));
            auto end = std::set_intersection(cand.begin(), cand.end(), nb.begin(),
                                             nb.end(), nx.begin());
            nx.resize(end - nx.begin());
            cand.swap(nx);
            if (cand.empty()) break;
        }
        SmallTuple st(t);
        for (uint32_t pos = 0; pos < t.size() + 1; ++pos)
            for (uint32_t y : cand) {
                SmallTuple cof = st.insert(pos, y);
                ptrdiff_t cidx = s.index_of(out.degree, cof.span());
                if (cidx < 0) continue;
                out.add(static_cast<uint64_t>(cidx), (pos % 2 == 0) ? v : -v);
            }
    }
    out.normalize();
    return out;
}

// ∂(x_0..x_m) = Σ (−1)^i (drop i).
template <class F> Chain<F> boundary(const Chain<F>& c) {
    require(c.degree >= 1, "DegreeUnderflow", "boundary of degree-0 chain");
    Chain<F> out;
    out.slice = c.slice;
    out.degree = c.degree - 1;
    out.rel_quotient = c.rel_quotient;
    const auto& s = *c.slice;
    for (const auto& [idx, v] : c.val) {
        if (is_zero(v)) continue;
        SmallTuple st(s.tuple(c.degree, idx));
        for (uint32_t i = 0; i < st.len; ++i) {
            ptrdiff_t fidx = s.index_of(out.degree, st.face(i).span());
            require(fidx >= 0, "BadIndex", "face missing from slice");
            out.add(static_cast<uint64_t>(fidx), (i % 2 == 0) ? v : -v);
        }
    }
    out.normalize();
    return out;
}

// Formal signed-tuple combination used by operators that leave the slice.
template <class F> struct FormalChain {
    uint32_t width = 0; // entries per tuple
    TupleMap<F> val;
    void add(const SmallTuple& t, const F& x) {
        if (is_zero(x)) return;
        auto [it, fresh] = val.emplace(t, x);
        if (!fresh) {
            it->second += x;
            if (is_zero(it->second)) val.erase(it);
        }
    }
};

template <class F>
FormalChain<F> formal_boundary(const FormalChain<F>& c) {
    FormalChain<F> out;
    out.width = c.width - 1;
    for (const auto& [t, v] : c.val)
        for (uint32_t i = 0; i < t.len; ++i)
            out.add(t.face(i), (i % 2 == 0) ? v : -v);
    return out;
}

// Barycentric subdivision context for an excisive triad (X; A, B). Owns the
// witness relations and the memoized barycenters b(Q).
class SubdivisionContext {
public:
    // Verifies coarse excisiveness by enumeration; throws NotExcisive.
    SubdivisionContext(const WindowedCoarseSpace& space, std::vector<uint32_t> a,
                       std::vector<uint32_t> b);

    const WindowedCoarseSpace& space() const { return *space_; }
    // barycenter of a nonempty point set
    uint32_t barycenter(const std::vector<uint32_t>& q) const;

private:
    const WindowedCoarseSpace* space_;
    std::vector<uint32_t> a_, b_, ab_;
    // witness composition count c_n per ladder index: Pen_{E_n}(A) ∩ Pen_{E_n}(B)
    // ⊆ Pen_{E_top^{c_n}}(A∩B)
    std::vector<uint32_t> witness_comp_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::vector<uint32_t>, uint32_t> memo_;
};

// Recursive barycentric subdivision sd and its cone homotopy T with
// ∂T + T∂ = id − sd (structural, independent of barycenter choices).
template <class F> class Subdivider {
public:
    Subdivider(const SubdivisionContext& ctx) : ctx_(&ctx) {}

    const FormalChain<F>& sd(const SmallTuple& t) const {
        auto it = sd_memo_.find(t);
        if (it != sd_memo_.end()) return it->second;
        FormalChain<F> out;
        out.width = t.len;
        if (t.len == 1) {
            out.add(t, F(1));
        } else {
            uint32_t b = bary(t);
            FormalChain<F> db; // sd(∂t)
            db.width = t.len - 1;
            for (uint32_t i = 0; i < t.len; ++i) {
                const FormalChain<F>& rec = sd(t.face(i));
                F sgn = (i % 2 == 0) ? F(1) : F(-1);
                for (const auto& [u, v] : rec.val) db.add(u, v * sgn);
            }
            for (const auto& [u, v] : db.val) out.add(u.insert(0, b), v);
        }
        return sd_memo_.emplace(t, std::move(out)).first->second;
    }

    // T with T(point) = 0, T(t) = cone_b(t − T(∂t)).
    const FormalChain<F>& homotopy(const SmallTuple& t) const {
        auto it = t_memo_.find(t);
        if (it != t_memo_.end()) return it->second;
        FormalChain<F> out;
        out.width = t.len + 1;
        // T vanishes on degree 0; sd is the identity there.
        if (t.len >= 2) {
            uint32_t b = bary(t);
            FormalChain<F> arg;
            arg.width = t.len;
            arg.add(t, F(1));
            for (uint32_t i = 0; i < t.len; ++i) {
                const FormalChain<F>& rec = homotopy(t.face(i));
                F sgn = (i % 2 == 0) ? F(-1) : F(1);
                for (const auto& [u, v] : rec.val) arg.add(u, v * sgn);
            }
            for (const auto& [u, v] : arg.val) out.add(u.insert(0, b), v);
        }
        return t_memo_.emplace(t, std::move(out)).first->second;
    }

    // Cochain transpose: (Sφ)(t) = Σ sd(t) coefficients times φ-values.
    template <class Eval> F eval_sd(const SmallTuple& t, Eval&& phi) const {
        F acc(0);
        for (const auto& [u, v] : sd(t).val) acc += v * phi(u.span());
        return acc;
    }
    template <class Eval> F eval_homotopy(const SmallTuple& t, Eval&& phi) const {
        F acc(0);
        for (const auto& [u, v] : homotopy(t).val) acc += v * phi(u.span());
        return acc;
    }

private:
    uint32_t bary(const SmallTuple& t) const {
        std::vector<uint32_t> q(t.span().begin(), t.span().end());
        std::sort(q.begin(), q.end());
        q.erase(std::unique(q.begin(), q.end()), q.end());
        return ctx_->barycenter(q);
    }
    const SubdivisionContext* ctx_;
    mutable std::unordered_map<SmallTuple, FormalChain<F>, SmallTupleHash> sd_memo_;
    mutable std::unordered_map<SmallTuple, FormalChain<F>, SmallTupleHash> t_memo_;
};

// sd of a chain: the spec's subdivision_chain (a chain-level section of the
// A+B → A∪B quotient once the triad is excisive).
template <class F>
Chain<F> subdivision_chain(const Chain<F>& c, const SubdivisionContext& ctx) {
    Subdivider<F> sub(ctx);
    Chain<F> out;
    out.slice = c.slice;
    out.degree = c.degree;
    out.rel_quotient = c.rel_quotient;
    for (const auto& [idx, v] : c.val) {
        SmallTuple t(c.slice->tuple(c.degree, idx));
        for (const auto& [u, w] : sub.sd(t).val) out.add_tuple(u.span(), w * v);
    }
    out.normalize();
    return out;
}

// S on cochains: input relativity {A,B} (componentwise vanishing), output
// vanishes on A∪B tuples. Materializes over the candidate tuples of the slice.
template <class F>
Cochain<F> subdivision(const Cochain<F>& phi, const SubdivisionContext& ctx) {
    Subdivider<F> sub(ctx);
    Cochain<F> out;
    out.slice = phi.slice;
    out.degree = phi.degree;
    out.rel = (phi.rel & REL_COLLAR) | REL_AUB;
    const auto& s = *phi.slice;
    size_t n = s.count(phi.degree);
    for (size_t idx = 0; idx < n; ++idx) {
        SmallTuple t(s.tuple(phi.degree, idx));
        F v = sub.eval_sd(t, [&](std::span<const uint32_t> u) { return phi.eval(u); });
        if (!is_zero(v)) out.val.emplace(idx, v);
    }
    out.normalize();
    return out;
}

// Path of grid indices used by prism operators.
std::vector<uint32_t> grid_index_path(const WarpedSpace& w, Rat64 from, Rat64 to);

// Prism of a single base tuple along a path of grid indices:
//   Σ_s Σ_i (−1)^i (x_0@p_s, …, x_i@p_s, x_i@p_{s+1}, …, x_m@p_{s+1})
// times `sign`. Entries are warped point ids.
template <class F>
void accumulate_prism(const WarpedSpace& w, std::span<const uint32_t> base_tuple,
                      const std::vector<uint32_t>& path, const F& sign,
                      FormalChain<F>& out) {
    const uint32_t m1 = static_cast<uint32_t>(base_tuple.size());
    for (size_t s = 0; s + 1 < path.size(); ++s) {
        for (uint32_t i = 0; i < m1; ++i) {
            SmallTuple t;
            t.len = static_cast<uint8_t>(m1 + 1);
            for (uint32_t j = 0; j <= i; ++j) t.v[j] = w.wid(base_tuple[j], path[s]);
            for (uint32_t j = i; j < m1; ++j) t.v[j + 1] = w.wid(base_tuple[j], path[s + 1]);
            out.add(t, (i % 2 == 0) ? sign : -sign);
        }
    }
}

// Same shape for warped tuples sliding along the grid: H_s shifts every time
// index by s (clamped at the top index).
template <class F>
void accumulate_slide_prism(const WarpedSpace& w, std::span<const uint32_t> wtuple,
                            const F& sign, FormalChain<F>& out) {
    const uint32_t m1 = static_cast<uint32_t>(wtuple.size());
    const uint32_t top = static_cast<uint32_t>(w.grid.size()) - 1;
    auto shifted = [&](uint32_t wp, uint32_t s) {
        uint32_t x = w.point_of(wp), t = w.time_of(wp);
        return w.wid(x, std::min(t + s, top));
    };
    for (uint32_t s = 0; s < top; ++s)
        for (uint32_t i = 0; i < m1; ++i) {
            SmallTuple t;
            t.len = static_cast<uint8_t>(m1 + 1);
            for (uint32_t j = 0; j <= i; ++j) t.v[j] = shifted(wtuple[j], s);
            for (uint32_t j = i; j < m1; ++j) t.v[j + 1] = shifted(wtuple[j], s + 1);
            out.add(t, (i % 2 == 0) ? sign : -sign);
        }
}

} // namespace coarse
