#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "coarse/space.hpp"

namespace coarse {

// Small exact rational for time coordinates and neighborhood radii.
struct Rat64 {
    int64_t num = 0;
    int64_t den = 1; // > 0

    Rat64() = default;
    Rat64(int64_t n, int64_t d = 1) : num(n), den(d) { normalize(); }
    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    friend Rat64 operator-(Rat64 a, Rat64 b) {
        return Rat64(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rat64 operator+(Rat64 a, Rat64 b) {
        return Rat64(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rat64 operator*(Rat64 a, Rat64 b) { return Rat64(a.num * b.num, a.den * b.den); }
    friend bool operator<(Rat64 a, Rat64 b) { return a.num * b.den < b.num * a.den; }
    friend bool operator<=(Rat64 a, Rat64 b) { return a.num * b.den <= b.num * a.den; }
    friend bool operator==(Rat64 a, Rat64 b) { return a.num == b.num && a.den == b.den; }
    Rat64 abs() const { return num < 0 ? Rat64(-num, den) : *this; }
    Rat64 half() const { return Rat64(num, den * 2); }
    double approx() const { return double(num) / double(den); }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

struct TimeGrid {
    std::vector<Rat64> t; // strictly increasing

    size_t size() const { return t.size(); }
    // exact index lookup; -1 if absent
    ptrdiff_t index_of(Rat64 v) const {
        for (size_t i = 0; i < t.size(); ++i)
            if (t[i] == v) return static_cast<ptrdiff_t>(i);
        return -1;
    }
    static TimeGrid uniform(Rat64 lo, Rat64 hi, uint32_t steps);
    TimeGrid symmetrized() const; // {-t : t in grid} ∪ grid, for grids on [0,1]
};

// Interval-radius neighborhood family U_x = {(s,t) : |s-t| < u(x)}.
struct NeighborhoodProfile {
    std::vector<Rat64> u; // per point, > 0

    NeighborhoodProfile halved() const {
        NeighborhoodProfile p = *this;
        for (auto& v : p.u) v = v.half();
        return p;
    }
    Rat64 min_over(const std::vector<uint32_t>& pts) const;
};

// For every eps > 0 there must be a ladder index n with u(x) <= eps outside
// Pen_{E_n}(A). On the finite model: checked for eps = min over points of u,
// scanning margins; returns false with witness when the profile stays coarse
// far from A.
bool satisfies_suspension_condition(const WindowedCoarseSpace& x,
                                    const std::vector<uint32_t>& a,
                                    const NeighborhoodProfile& u,
                                    std::string* witness = nullptr);

// X ×_U grid with ladder F_n = n-fold composition of (E_n ×̄ Δ) ∪ E_U and
// frontier = X.frontier × grid.
struct WarpedSpace {
    const WindowedCoarseSpace* base = nullptr;
    TimeGrid grid;
    NeighborhoodProfile profile;
    WindowedCoarseSpace derived;

    uint32_t wid(uint32_t x, uint32_t ti) const {
        return x * static_cast<uint32_t>(grid.size()) + ti;
    }
    uint32_t point_of(uint32_t w) const { return w / static_cast<uint32_t>(grid.size()); }
    uint32_t time_of(uint32_t w) const { return w % static_cast<uint32_t>(grid.size()); }
    std::vector<uint32_t> slice_set(uint32_t ti) const;          // X × {t_i}
    std::vector<uint32_t> lift_set(const std::vector<uint32_t>& s) const; // S × grid
};

WarpedSpace warped_product(const WindowedCoarseSpace& x, const TimeGrid& grid,
                           const NeighborhoodProfile& u);

} // namespace coarse
