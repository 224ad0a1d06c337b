#include "coarse/warped.hpp"

#include <algorithm>

#include "coarse/error.hpp"

namespace coarse {

TimeGrid TimeGrid::uniform(Rat64 lo, Rat64 hi, uint32_t steps) {
    require(steps >= 1, "EmptyGrid", "need at least one step");
    TimeGrid g;
    Rat64 span = hi - lo;
    for (uint32_t i = 0; i <= steps; ++i)
        g.t.push_back(lo + Rat64(span.num * int64_t(i), span.den * int64_t(steps)));
    return g;
}

TimeGrid TimeGrid::symmetrized() const {
    TimeGrid g;
    for (auto it = t.rbegin(); it != t.rend(); ++it)
        g.t.push_back(Rat64(-it->num, it->den));
    for (const auto& v : t)
        if (!(v == Rat64(0)) || g.t.empty() || !(g.t.back() == Rat64(0)))
            g.t.push_back(v);
    for (size_t i = 1; i < g.t.size(); ++i)
        require(g.t[i - 1] < g.t[i], "EmptyGrid", "grid not monotone after symmetrization");
    return g;
}

Rat64 NeighborhoodProfile::min_over(const std::vector<uint32_t>& pts) const {
    require(!pts.empty(), "EmptyGrid", "profile minimum over empty set");
    Rat64 m = u[pts[0]];
    for (uint32_t p : pts)
        if (u[p] < m) m = u[p];
    return m;
}

bool satisfies_suspension_condition(const WindowedCoarseSpace& x,
                                    const std::vector<uint32_t>& a,
                                    const NeighborhoodProfile& u,
                                    std::string* witness) {
    if (a.empty()) {
        if (witness) *witness = "A empty";
        return false;
    }
    // For each eps in the sorted set of profile values, some penumbra of A must
    // cover every point with u(x) > eps. With nonempty A and a connected-enough
    // top relation the closure covers everything, so the real content is that
    // u attains its small values away from A monotonically; we check the
    // closure cover exactly.
    std::vector<uint32_t> cover = penumbra_of(x.ladder.top(), x.n_points, a);
    for (uint32_t p = 0; p < x.n_points; ++p) {
        if (!sorted_contains(cover, p)) {
            // p is not in any penumbra of A; its radius must already be minimal
            Rat64 umin = u.u[0];
            for (const auto& v : u.u)
                if (v < umin) umin = v;
            if (umin < u.u[p]) {
                if (witness)
                    *witness = "point " + std::to_string(p) +
                               " unreachable from A with non-minimal radius";
                return false;
            }
        }
    }
    return true;
}

std::vector<uint32_t> WarpedSpace::slice_set(uint32_t ti) const {
    std::vector<uint32_t> out;
    out.reserve(base->n_points);
    for (uint32_t x = 0; x < base->n_points; ++x) out.push_back(wid(x, ti));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint32_t> WarpedSpace::lift_set(const std::vector<uint32_t>& s) const {
    std::vector<uint32_t> out;
    out.reserve(s.size() * grid.size());
    for (uint32_t x : s)
        for (uint32_t ti = 0; ti < grid.size(); ++ti) out.push_back(wid(x, ti));
    std::sort(out.begin(), out.end());
    return out;
}

WarpedSpace warped_product(const WindowedCoarseSpace& x, const TimeGrid& grid,
                           const NeighborhoodProfile& u) {
    require(!grid.t.empty(), "EmptyGrid", "warped product over empty grid");
    for (size_t i = 1; i < grid.t.size(); ++i)
        require(grid.t[i - 1] < grid.t[i], "EmptyGrid", "grid not strictly increasing");
    require(u.u.size() == x.n_points, "BadIndex", "profile size mismatch");
    for (const auto& v : u.u)
        require(Rat64(0) < v, "BadIndex", "profile radius must be positive");

    WarpedSpace w;
    w.base = &x;
    w.grid = grid;
    w.profile = u;

    const uint32_t nt = static_cast<uint32_t>(grid.size());
    const uint32_t np = x.n_points * nt;
    w.derived.label = x.label + "x_U[I]";
    w.derived.n_points = np;
    w.derived.ladder.source = EntourageLadder::Source::explicit_pairs;

    // E_U: same point, |s-t| < u(x)
    std::vector<std::vector<uint32_t>> eu_lists(np);
    for (uint32_t p = 0; p < x.n_points; ++p)
        for (uint32_t i = 0; i < nt; ++i) {
            auto& out = eu_lists[w.wid(p, i)];
            for (uint32_t j = 0; j < nt; ++j)
                if ((grid.t[i] - grid.t[j]).abs() < u.u[p]) out.push_back(w.wid(p, j));
        }
    Relation e_u = Relation::from_lists(np, std::move(eu_lists));

    for (size_t n = 1; n <= x.ladder.size(); ++n) {
        const Relation& e = x.ladder.at(n);
        std::vector<std::vector<uint32_t>> lists(np);
        for (uint32_t p = 0; p < x.n_points; ++p) {
            auto nb = e.nbrs(p);
            for (uint32_t i = 0; i < nt; ++i) {
                auto& out = lists[w.wid(p, i)];
                out.reserve(nb.size());
                for (uint32_t q : nb) out.push_back(w.wid(q, i));
                std::sort(out.begin(), out.end());
            }
        }
        Relation gen = Relation::from_lists(np, std::move(lists)).unite(e_u);
        w.derived.ladder.rel.push_back(gen.power(static_cast<uint32_t>(n)));
    }
    w.derived.ladder.validate();
    w.derived.frontier = w.lift_set(x.frontier);
    for (const auto& [name, pts] : x.subspaces) w.derived.subspaces[name + "xI"] = w.lift_set(pts);
    return w;
}

} // namespace coarse
