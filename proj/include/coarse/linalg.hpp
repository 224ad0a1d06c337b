#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "coarse/cochain.hpp"

namespace coarse {

template <class F> struct SparseVec {
    std::vector<std::pair<uint32_t, F>> e; // sorted by row, no explicit zeros

    bool zero() const { return e.empty(); }
    uint32_t low() const { return e.back().first; } // largest row index
    F low_value() const { return e.back().second; }

    void set(uint32_t row, const F& v) {
        if (!is_zero(v)) e.emplace_back(row, v);
    }
    void finish() {
        std::sort(e.begin(), e.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<uint32_t, F>> out;
        for (auto& [r, v] : e) {
            if (!out.empty() && out.back().first == r)
                out.back().second += v;
            else
                out.emplace_back(r, v);
        }
        e.clear();
        for (auto& [r, v] : out)
            if (!is_zero(v)) e.emplace_back(r, v);
    }
    // this += c * o
    void axpy(const F& c, const SparseVec& o) {
        if (is_zero(c) || o.e.empty()) return;
        std::vector<std::pair<uint32_t, F>> out;
        out.reserve(e.size() + o.e.size());
        size_t i = 0, j = 0;
        while (i < e.size() || j < o.e.size()) {
            if (j == o.e.size() || (i < e.size() && e[i].first < o.e[j].first)) {
                out.push_back(e[i++]);
            } else if (i == e.size() || o.e[j].first < e[i].first) {
                F v = c * o.e[j].second;
                if (!is_zero(v)) out.emplace_back(o.e[j].first, v);
                ++j;
            } else {
                F v = e[i].second + c * o.e[j].second;
                if (!is_zero(v)) out.emplace_back(e[i].first, v);
                ++i;
                ++j;
            }
        }
        e = std::move(out);
    }
};

// Deterministic left-to-right column echelonization by largest-row pivot,
// optionally tracking the transform (R = M·V).
template <class F> class ColumnReduction {
public:
    explicit ColumnReduction(bool track = true) : track_(track) {}

    // returns true if the column was independent (new pivot)
    bool add_column(SparseVec<F> col, SparseVec<F> vcol = {}) {
        reduce_inplace(col, track_ ? &vcol : nullptr);
        cols_.push_back(col);
        vcols_.push_back(std::move(vcol));
        if (!col.zero()) {
            pivot_[col.low()] = static_cast<uint32_t>(cols_.size() - 1);
            ++rank_;
            return true;
        }
        return false;
    }

    size_t rank() const { return rank_; }
    size_t columns() const { return cols_.size(); }
    const SparseVec<F>& r_col(size_t j) const { return cols_[j]; }
    const SparseVec<F>& v_col(size_t j) const { return vcols_[j]; }
    bool has_pivot_row(uint32_t row) const { return pivot_.count(row) > 0; }

    // reduce vec against the echelon; combo accumulates the V-combination
    void reduce_inplace(SparseVec<F>& vec, SparseVec<F>* combo) const {
        while (!vec.zero()) {
            auto it = pivot_.find(vec.low());
            if (it == pivot_.end()) break;
            const SparseVec<F>& rc = cols_[it->second];
            F c = F(0) - vec.low_value() / rc.low_value();
            vec.axpy(c, rc);
            if (combo && track_) combo->axpy(c, vcols_[it->second]);
        }
    }

private:
    bool track_;
    size_t rank_ = 0;
    std::vector<SparseVec<F>> cols_, vcols_;
    std::unordered_map<uint32_t, uint32_t> pivot_; // low row -> column
};

// standalone rank + kernel basis of a column-major sparse matrix
template <class F> struct RankKernel {
    size_t rank = 0;
    std::vector<SparseVec<F>> kernel; // in column coordinates
};

template <class F>
RankKernel<F> rank_kernel(const std::vector<SparseVec<F>>& columns) {
    ColumnReduction<F> red(true);
    RankKernel<F> out;
    for (size_t j = 0; j < columns.size(); ++j) {
        SparseVec<F> unit;
        unit.set(static_cast<uint32_t>(j), F(1));
        if (!red.add_column(columns[j], unit)) out.kernel.push_back(red.v_col(j));
    }
    out.rank = red.rank();
    return out;
}

// The sub/quotient complex carved out of a slice by relativity flags (and an
// optional ambient point-set restriction), with cached differentials,
// reductions, Betti numbers and representative cycles.
template <class F> class PairComplex {
public:
    PairComplex(SlicePtr slice, uint32_t rel, bool cochain_side,
                std::optional<std::vector<uint32_t>> support = std::nullopt,
                std::optional<std::vector<uint32_t>> vanish_set = std::nullopt)
        : slice_(std::move(slice)), rel_(rel), cochain_(cochain_side),
          support_(std::move(support)), vanish_(std::move(vanish_set)) {
        if (support_) std::sort(support_->begin(), support_->end());
        if (vanish_) std::sort(vanish_->begin(), vanish_->end());
    }

    const TupleComplexSlice& slice() const { return *slice_; }
    SlicePtr slice_ptr() const { return slice_; }
    uint32_t rel() const { return rel_; }
    bool cochain_side() const { return cochain_; }

    bool admits(uint32_t degree, uint64_t tuple_idx) const {
        auto t = slice_->tuple(degree, tuple_idx);
        if (support_ && !slice_->in_set(t, *support_)) return false;
        if (vanish_ && slice_->in_set(t, *vanish_)) return false;
        return !tuple_flagged(*slice_, t, rel_);
    }

    const std::vector<uint32_t>& basis(uint32_t m) const {
        auto it = basis_.find(m);
        if (it != basis_.end()) return it->second;
        std::vector<uint32_t> b;
        size_t n = slice_->count(m);
        for (size_t i = 0; i < n; ++i)
            if (admits(m, i)) b.push_back(static_cast<uint32_t>(i));
        return basis_.emplace(m, std::move(b)).first->second;
    }

    ptrdiff_t basis_index(uint32_t m, uint64_t tuple_idx) const {
        const auto& b = basis(m);
        auto it = std::lower_bound(b.begin(), b.end(), static_cast<uint32_t>(tuple_idx));
        if (it == b.end() || *it != tuple_idx) return -1;
        return it - b.begin();
    }

    // differential with domain degree m (cochain: δ_m raises; chain: ∂_m lowers)
    const std::vector<SparseVec<F>>& diff_columns(uint32_t m) const {
        auto it = dcols_.find(m);
        if (it != dcols_.end()) return it->second;
        std::vector<SparseVec<F>> cols;
        const auto& dom = basis(m);
        cols.resize(dom.size());
        if (cochain_) {
            // build by rows: each admissible (m+1)-tuple contributes ±1 per face
            const auto& codom = basis(m + 1);
            for (size_t r = 0; r < codom.size(); ++r) {
                SmallTuple t(slice_->tuple(m + 1, codom[r]));
                for (uint32_t i = 0; i < t.len; ++i) {
                    ptrdiff_t fidx = slice_->index_of(m, t.face(i).span());
                    if (fidx < 0) continue;
                    ptrdiff_t c = basis_index(m, fidx);
                    if (c < 0) continue;
                    cols[c].set(static_cast<uint32_t>(r), (i % 2 == 0) ? F(1) : F(-1));
                }
            }
        } else {
            require(m >= 1, "DegreeUnderflow", "chain differential at degree 0");
            for (size_t c = 0; c < dom.size(); ++c) {
                SmallTuple t(slice_->tuple(m, dom[c]));
                for (uint32_t i = 0; i < t.len; ++i) {
                    ptrdiff_t fidx = slice_->index_of(m - 1, t.face(i).span());
                    require(fidx >= 0, "BadIndex", "missing face");
                    ptrdiff_t r = basis_index(m - 1, fidx);
                    if (r < 0) continue; // quotiented face
                    cols[c].set(static_cast<uint32_t>(r), (i % 2 == 0) ? F(1) : F(-1));
                }
            }
        }
        for (auto& c : cols) c.finish();
        return dcols_.emplace(m, std::move(cols)).first->second;
    }

    // reduction of the differential leaving degree m
    const ColumnReduction<F>& diff_reduction(uint32_t m) const {
        auto it = dred_.find(m);
        if (it != dred_.end()) return it->second;
        ColumnReduction<F> red(true);
        for (const auto& col : diff_columns(m)) {
            SparseVec<F> unit;
            unit.set(static_cast<uint32_t>(red.columns()), F(1));
            red.add_column(col, unit);
        }
        return dred_.emplace(m, std::move(red)).first->second;
    }

    size_t rank_d(uint32_t m) const {
        if (!cochain_ && m == 0) return 0;
        return diff_reduction(m).rank();
    }

    // image degree feeding m: cochain δ_{m−1}, chain ∂_{m+1}
    size_t incoming_rank(uint32_t m) const {
        if (cochain_) return m == 0 ? 0 : rank_d(m - 1);
        return rank_d(m + 1);
    }

    size_t betti(uint32_t m) const {
        size_t dim = basis(m).size();
        size_t out_rank = rank_d(m);
        return dim - out_rank - incoming_rank(m);
    }

    // echelon of the incoming image in degree m (for membership tests)
    const ColumnReduction<F>& image_reduction(uint32_t m) const {
        auto it = imred_.find(m);
        if (it != imred_.end()) return it->second;
        ColumnReduction<F> red(false);
        if (cochain_ ? (m > 0) : true) {
            uint32_t src = cochain_ ? m - 1 : m + 1;
            if (cochain_ || src <= slice_->options().max_degree)
                for (const auto& col : diff_columns(src)) red.add_column(col);
        }
        return imred_.emplace(m, std::move(red)).first->second;
    }

    bool is_cycle(const SparseVec<F>& v, uint32_t m) const {
        if (!cochain_ && m == 0) return true;
        SparseVec<F> img = apply_diff(v, m);
        return img.zero();
    }

    SparseVec<F> apply_diff(const SparseVec<F>& v, uint32_t m) const {
        const auto& cols = diff_columns(m);
        SparseVec<F> out;
        for (const auto& [c, x] : v.e) out.axpy(x, cols[c]);
        return out;
    }

    bool is_boundary(SparseVec<F> v, uint32_t m) const {
        image_reduction(m).reduce_inplace(v, nullptr);
        return v.zero();
    }

    // solve d(x) = target with x in degree m_from; nullopt when not in image
    std::optional<SparseVec<F>> solve_d(uint32_t m_from, SparseVec<F> target,
                                        SparseVec<F>* certificate = nullptr) const {
        const auto& red = diff_reduction(m_from);
        SparseVec<F> combo;
        red.reduce_inplace(target, &combo);
        if (!target.zero()) {
            if (certificate) *certificate = target;
            return std::nullopt;
        }
        // target reduced to zero: combo holds -x
        SparseVec<F> x;
        x.axpy(F(-1), combo);
        return x;
    }

    // representative cycles spanning homology in degree m
    const std::vector<SparseVec<F>>& representatives(uint32_t m) const {
        auto it = reps_.find(m);
        if (it != reps_.end()) return it->second;
        std::vector<SparseVec<F>> reps;
        size_t want = betti(m);
        // kernel vectors of the outgoing differential
        std::vector<SparseVec<F>> kernel;
        if (!cochain_ && m == 0) {
            for (size_t j = 0; j < basis(m).size(); ++j) {
                SparseVec<F> unit;
                unit.set(static_cast<uint32_t>(j), F(1));
                kernel.push_back(std::move(unit));
            }
        } else {
            auto rk = rank_kernel(diff_columns(m));
            kernel = std::move(rk.kernel);
        }
        ColumnReduction<F> mod_image(false);
        if (cochain_ ? (m > 0) : true) {
            uint32_t src = cochain_ ? m - 1 : m + 1;
            if (cochain_ || src <= slice_->options().max_degree)
                for (const auto& col : diff_columns(src)) mod_image.add_column(col);
        }
        for (auto& k : kernel) {
            if (reps.size() == want) break;
            SparseVec<F> r = k;
            mod_image.reduce_inplace(r, nullptr);
            if (!r.zero()) {
                mod_image.add_column(r); // keep reps independent mod image
                reps.push_back(std::move(k));
            }
        }
        require(reps.size() == want, "DegreeOutOfRange",
                "representative extraction mismatch");
        return reps_.emplace(m, std::move(reps)).first->second;
    }

    // coordinates of a class over [incoming image | representatives]:
    // returns betti-длина vector; nullopt when v is not in the span (unstable)
    std::optional<std::vector<F>> class_coordinates(SparseVec<F> v, uint32_t m) const {
        const auto& reps = representatives(m);
        ColumnReduction<F> red(true);
        if (cochain_ ? (m > 0) : true) {
            uint32_t src = cochain_ ? m - 1 : m + 1;
            if (cochain_ || src <= slice_->options().max_degree)
                for (const auto& col : diff_columns(src)) red.add_column(col, {});
        }
        size_t image_cols = red.columns();
        for (const auto& r : reps) {
            SparseVec<F> unit;
            unit.set(static_cast<uint32_t>(red.columns()), F(1));
            red.add_column(r, unit);
        }
        SparseVec<F> combo;
        red.reduce_inplace(v, &combo);
        if (!v.zero()) return std::nullopt;
        std::vector<F> coords(reps.size(), F(0));
        for (const auto& [row, c] : combo.e)
            if (row >= image_cols) coords[row - image_cols] = F(0) - c;
        return coords;
    }

    // conversions between sparse storage and basis coordinates
    SparseVec<F> to_coords(const std::unordered_map<uint64_t, F>& val, uint32_t m) const {
        SparseVec<F> v;
        for (const auto& [idx, x] : val) {
            ptrdiff_t b = basis_index(m, idx);
            if (b < 0) {
                auto t = slice_->tuple(m, idx);
                bool quotiented = tuple_flagged(*slice_, t, rel_) ||
                                  (support_ && !slice_->in_set(t, *support_)) ||
                                  (vanish_ && slice_->in_set(t, *vanish_));
                require(quotiented || is_zero(x), "PairMismatch",
                        "value outside the pair's basis");
                continue;
            }
            v.set(static_cast<uint32_t>(b), x);
        }
        v.finish();
        return v;
    }

    std::unordered_map<uint64_t, F> from_coords(const SparseVec<F>& v, uint32_t m) const {
        std::unordered_map<uint64_t, F> val;
        const auto& b = basis(m);
        for (const auto& [row, x] : v.e) val.emplace(b[row], x);
        return val;
    }

private:
    SlicePtr slice_;
    uint32_t rel_;
    bool cochain_;
    std::optional<std::vector<uint32_t>> support_;
    std::optional<std::vector<uint32_t>> vanish_;
    mutable std::map<uint32_t, std::vector<uint32_t>> basis_;
    mutable std::map<uint32_t, std::vector<SparseVec<F>>> dcols_;
    mutable std::map<uint32_t, ColumnReduction<F>> dred_;
    mutable std::map<uint32_t, ColumnReduction<F>> imred_;
    mutable std::map<uint32_t, std::vector<SparseVec<F>>> reps_;
};

// ⟨φ, c⟩ = Σ_t φ(t)·c(t) over the common slice
template <class F>
F pairing(const Cochain<F>& phi, const Chain<F>& c) {
    require(phi.slice.get() == c.slice.get() && phi.degree == c.degree, "PairMismatch",
            "pairing across different slices");
    F acc(0);
    for (const auto& [idx, x] : c.val) acc += phi.at_index(idx) * x;
    return acc;
}

struct StabilizationRecord {
    uint32_t scale_a = 0, margin_a = 0, scale_b = 0, margin_b = 0;
    size_t betti_a = 0, betti_b = 0;
    size_t induced_rank = 0;
    bool stable = false;
};

// rank of a small dense matrix over F (for induced-map certificates)
template <class F>
size_t dense_rank(std::vector<std::vector<F>> m) {
    size_t rank = 0;
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t piv = row;
        while (piv < rows && is_zero(m[piv][col])) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[row]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || is_zero(m[i][col])) continue;
            F f = m[i][col] / m[row][col];
            for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
        ++rank;
    }
    return rank;
}

// Betti stabilization certificate: betti at (n,k) vs (n+1,k+1) plus the rank
// of the induced map between the two complexes (cohomology: restriction from
// the finer-controlled complex; homology: inclusion into it).
template <class F>
StabilizationRecord stabilize(const PairComplex<F>& pair_a, const PairComplex<F>& pair_b,
                              uint32_t m) {
    StabilizationRecord rec;
    rec.scale_a = pair_a.slice().options().scale;
    rec.margin_a = pair_a.slice().options().margin;
    rec.scale_b = pair_b.slice().options().scale;
    rec.margin_b = pair_b.slice().options().margin;
    rec.betti_a = pair_a.betti(m);
    rec.betti_b = pair_b.betti(m);

    std::vector<std::vector<F>> coord_matrix;
    bool all_mapped = true;
    if (pair_a.cochain_side()) {
        // restrict representatives of the b-complex (coarser scale, fatter
        // collar) to the a-slice
        for (const auto& r : pair_b.representatives(m)) {
            auto val = pair_b.from_coords(r, m);
            std::unordered_map<uint64_t, F> restricted;
            for (const auto& [idx, v] : val) {
                auto t = pair_b.slice().tuple(m, idx);
                ptrdiff_t ai = pair_a.slice().index_of(m, t);
                if (ai < 0) continue;
                if (!pair_a.admits(m, static_cast<uint64_t>(ai))) continue;
                restricted.emplace(static_cast<uint64_t>(ai), v);
            }
            auto coords =
                pair_a.class_coordinates(pair_a.to_coords(restricted, m), m);
            if (!coords) { all_mapped = false; break; }
            coord_matrix.push_back(std::move(*coords));
        }
    } else {
        // include representatives of the a-complex into the b-complex
        for (const auto& r : pair_a.representatives(m)) {
            auto val = pair_a.from_coords(r, m);
            std::unordered_map<uint64_t, F> included;
            for (const auto& [idx, v] : val) {
                auto t = pair_a.slice().tuple(m, idx);
                ptrdiff_t bi = pair_b.slice().index_of(m, t);
                require(bi >= 0, "BadIndex", "chain tuple missing at coarser scale");
                included.emplace(static_cast<uint64_t>(bi), v);
            }
            auto coords =
                pair_b.class_coordinates(pair_b.to_coords(included, m), m);
            if (!coords) { all_mapped = false; break; }
            coord_matrix.push_back(std::move(*coords));
        }
    }
    rec.induced_rank = all_mapped ? dense_rank(std::move(coord_matrix)) : 0;
    rec.stable = all_mapped && rec.betti_a == rec.betti_b &&
                 rec.induced_rank == rec.betti_a;
    return rec;
}

} // namespace coarse
