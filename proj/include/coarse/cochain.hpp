#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/field.hpp"
#include "coarse/slice.hpp"

namespace coarse {

// Fixed-capacity tuple key for maps keyed by raw tuples (possibly off-slice).
struct SmallTuple {
    static constexpr size_t CAP = 8;
    uint8_t len = 0;
    std::array<uint32_t, CAP> v{};

    SmallTuple() = default;
    explicit SmallTuple(std::span<const uint32_t> t) {
        require(t.size() <= CAP, "DegreeOverflow", "tuple too wide");
        len = static_cast<uint8_t>(t.size());
        for (size_t i = 0; i < t.size(); ++i) v[i] = t[i];
    }
    std::span<const uint32_t> span() const { return {v.data(), len}; }
    friend bool operator==(const SmallTuple& a, const SmallTuple& b) {
        if (a.len != b.len) return false;
        for (size_t i = 0; i < a.len; ++i)
            if (a.v[i] != b.v[i]) return false;
        return true;
    }
    SmallTuple face(size_t drop) const {
        SmallTuple f;
        f.len = static_cast<uint8_t>(len - 1);
        size_t k = 0;
        for (size_t i = 0; i < len; ++i)
            if (i != drop) f.v[k++] = v[i];
        return f;
    }
    SmallTuple insert(size_t pos, uint32_t p) const {
        SmallTuple f;
        require(len + 1 <= CAP, "DegreeOverflow", "tuple too wide");
        f.len = static_cast<uint8_t>(len + 1);
        size_t k = 0;
        for (size_t i = 0; i < f.len; ++i)
            f.v[i] = (i == pos) ? p : v[k++];
        return f;
    }
};

struct SmallTupleHash {
    size_t operator()(const SmallTuple& t) const {
        uint64_t h = 1469598103934665603ull;
        for (size_t i = 0; i < t.len; ++i) {
            h ^= t.v[i];
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h ^ t.len);
    }
};

template <class F> using TupleMap = std::unordered_map<SmallTuple, F, SmallTupleHash>;

// Sparse field-valued function on the controlled tuples of a slice. Values on
// tuples carrying a flagged marker are forced to zero (relative complex).
template <class F> struct Cochain {
    SlicePtr slice;
    uint32_t degree = 0;
    uint32_t rel = REL_NONE;
    std::unordered_map<uint64_t, F> val; // tuple index -> value

    F at_index(uint64_t idx) const {
        auto it = val.find(idx);
        return it == val.end() ? F(0) : it->second;
    }
    // zero extension off-slice
    F eval(std::span<const uint32_t> t) const {
        ptrdiff_t idx = slice->index_of(degree, t);
        return idx < 0 ? F(0) : at_index(static_cast<uint64_t>(idx));
    }
    void add(uint64_t idx, const F& x) {
        if (is_zero(x)) return;
        auto [it, fresh] = val.emplace(idx, x);
        if (!fresh) {
            it->second += x;
            if (is_zero(it->second)) val.erase(it);
        }
    }
    // drop zeros and flagged entries
    void normalize() {
        for (auto it = val.begin(); it != val.end();) {
            if (is_zero(it->second) ||
                tuple_flagged(*slice, slice->tuple(degree, it->first), rel))
                it = val.erase(it);
            else
                ++it;
        }
    }
    // check the relative-vanishing invariant instead of silently dropping
    bool satisfies_relativity() const {
        for (const auto& [idx, x] : val)
            if (!is_zero(x) && tuple_flagged(*slice, slice->tuple(degree, idx), rel))
                return false;
        return true;
    }
    bool zero() const {
        for (const auto& [i, x] : val)
            if (!is_zero(x)) return false;
        return true;
    }
    Cochain scaled(const F& c) const {
        Cochain out = *this;
        if (is_zero(c)) { out.val.clear(); return out; }
        for (auto& [i, x] : out.val) x *= c;
        return out;
    }
    friend Cochain operator-(const Cochain& a, const Cochain& b) {
        Cochain out = a;
        for (const auto& [i, x] : b.val) out.add(i, -x);
        return out;
    }
    friend Cochain operator+(const Cochain& a, const Cochain& b) {
        Cochain out = a;
        for (const auto& [i, x] : b.val) out.add(i, x);
        return out;
    }
};

// Sparse formal sum on controlled tuples; flagged coefficients are quotiented
// away (relative chain group). Same storage as Cochain, dual semantics.
template <class F> struct Chain {
    SlicePtr slice;
    uint32_t degree = 0;
    uint32_t rel_quotient = REL_NONE;
    std::unordered_map<uint64_t, F> val;

    F at_index(uint64_t idx) const {
        auto it = val.find(idx);
        return it == val.end() ? F(0) : it->second;
    }
    void add(uint64_t idx, const F& x) {
        if (is_zero(x)) return;
        auto [it, fresh] = val.emplace(idx, x);
        if (!fresh) {
            it->second += x;
            if (is_zero(it->second)) val.erase(it);
        }
    }
    void add_tuple(std::span<const uint32_t> t, const F& x) {
        ptrdiff_t idx = slice->index_of(degree, t);
        require(idx >= 0, "UncontrolledProlongation",
                "chain tuple not controlled at slice scale");
        add(static_cast<uint64_t>(idx), x);
    }
    void normalize() {
        for (auto it = val.begin(); it != val.end();) {
            if (is_zero(it->second) ||
                tuple_flagged(*slice, slice->tuple(degree, it->first), rel_quotient))
                it = val.erase(it);
            else
                ++it;
        }
    }
    bool zero_mod_quotient() const {
        for (const auto& [idx, x] : val)
            if (!is_zero(x) &&
                !tuple_flagged(*slice, slice->tuple(degree, idx), rel_quotient))
                return false;
        return true;
    }
    Chain scaled(const F& c) const {
        Chain out = *this;
        if (is_zero(c)) { out.val.clear(); return out; }
        for (auto& [i, x] : out.val) x *= c;
        return out;
    }
    friend Chain operator-(const Chain& a, const Chain& b) {
        Chain out = a;
        for (const auto& [i, x] : b.val) out.add(i, -x);
        return out;
    }
    friend Chain operator+(const Chain& a, const Chain& b) {
        Chain out = a;
        for (const auto& [i, x] : b.val) out.add(i, x);
        return out;
    }
};

} // namespace coarse
