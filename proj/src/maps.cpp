#include "coarse/maps.hpp"

#include <algorithm>
#include <limits>

#include "coarse/error.hpp"

namespace coarse {

static const uint32_t INF = std::numeric_limits<uint32_t>::max();

CoarseVerdict check_coarse_map(const CoarseMapTable& f) {
    const auto& src = *f.source;
    const auto& tgt = *f.target;
    require(f.table.size() == src.n_points, "BadIndex", "table not total");

    CoarseVerdict v;
    v.controlled = true;
    for (size_t n = 1; n <= src.ladder.size(); ++n) {
        const Relation& e = src.ladder.at(n);
        uint32_t worst = 0;
        uint32_t wa = 0, wb = 0;
        for (uint32_t a = 0; a < src.n_points && worst != INF; ++a)
            for (uint32_t b : e.nbrs(a)) {
                uint32_t m = 1;
                while (m <= tgt.ladder.size() && !tgt.ladder.at(m).related(f(a), f(b))) ++m;
                if (m > tgt.ladder.size()) { worst = INF; wa = a; wb = b; break; }
                worst = std::max(worst, m);
            }
        if (worst == INF) {
            v.controlled = false;
            v.witness = "NotControlled: E_" + std::to_string(n) + " pair (" +
                        std::to_string(wa) + "," + std::to_string(wb) + ")";
            break;
        }
        v.expansion_profile.push_back(worst);
    }

    // proper-in-model via frontier hop layers: points near source-infinity must
    // map near target-infinity, with slack k0 small relative to the window
    // depth. Scales whose layering is degenerate carry no information.
    v.proper = false;
    if (src.frontier.empty()) { // bounded source: every map is proper
        v.proper = true;
        v.proper_n0 = 1;
        v.proper_k0 = 0;
        return v;
    }
    std::string prop_witness;
    for (size_t n0 = 1; n0 <= std::min(src.ladder.size(), tgt.ladder.size()); ++n0) {
        auto ls = hop_layers(src.ladder.at(n0), src.frontier);
        auto lt = hop_layers(tgt.ladder.at(n0), tgt.frontier);
        uint32_t depth_t = 0;
        for (uint32_t y = 0; y < tgt.n_points; ++y)
            if (lt[y] != INF) depth_t = std::max(depth_t, lt[y]);
        if (depth_t < 2) continue; // degenerate layering at this scale
        uint32_t k0 = 0;
        bool ok = true;
        uint32_t wx = 0;
        for (uint32_t x = 0; x < src.n_points; ++x) {
            if (ls[x] == INF) continue; // source-bounded directions impose nothing
            if (lt[f(x)] == INF) { ok = false; wx = x; break; }
            uint32_t gap = lt[f(x)] > ls[x] ? lt[f(x)] - ls[x] : 0;
            k0 = std::max(k0, gap);
        }
        if (ok && k0 > depth_t / 2) { ok = false; wx = 0; }
        if (ok) {
            v.proper = true;
            v.proper_n0 = static_cast<uint32_t>(n0);
            v.proper_k0 = k0;
            break;
        } else if (prop_witness.empty()) {
            prop_witness = "NotProper: point " + std::to_string(wx) +
                           " at scale " + std::to_string(n0);
        }
    }
    if (!v.proper && v.witness.empty()) v.witness = prop_witness;
    return v;
}

uint32_t ControlledHomotopy::at_time(uint32_t x, Rat64 s) const {
    size_t j = 0;
    for (size_t i = 0; i < grid.t.size(); ++i)
        if (grid.t[i] <= s) j = i;
    return tables[j][x];
}

ControlledHomotopy ControlledHomotopy::refined_double() const {
    ControlledHomotopy h = *this;
    TimeGrid g;
    std::vector<std::vector<uint32_t>> tabs;
    for (size_t i = 0; i < grid.t.size(); ++i) {
        g.t.push_back(grid.t[i]);
        tabs.push_back(tables[i]);
        if (i + 1 < grid.t.size()) {
            g.t.push_back(Rat64(grid.t[i].num * grid.t[i + 1].den +
                                    grid.t[i + 1].num * grid.t[i].den,
                                2 * grid.t[i].den * grid.t[i + 1].den));
            tabs.push_back(tables[i]); // step function: repeat the earlier row
        }
    }
    h.grid = g;
    h.tables = tabs;
    return h;
}

HomotopyCertificate check_generalized_controlled_homotopy(const ControlledHomotopy& h) {
    const auto& x = *h.space;
    HomotopyCertificate cert;

    require(h.tables.size() == h.grid.size(), "BadIndex", "table per grid time");
    require(h.grid.t.front() == Rat64(0) && h.grid.t.back() == Rat64(1), "BadIndex",
            "homotopy grid must span [0,1]");

    cert.endpoint_identity = true;
    for (uint32_t p = 0; p < x.n_points; ++p)
        if (h.tables.front()[p] != p) {
            cert.endpoint_identity = false;
            cert.witness = "H_0 not identity at " + std::to_string(p);
            break;
        }

    cert.endpoint_in_target = true;
    for (uint32_t p = 0; p < x.n_points; ++p)
        if (!sorted_contains(h.target, h.tables.back()[p])) {
            cert.endpoint_in_target = false;
            cert.witness = "EndpointNotInTarget: " + std::to_string(p);
            break;
        }

    cert.preserves_target = true;
    for (uint32_t p : h.target)
        for (const auto& tab : h.tables)
            if (!sorted_contains(h.target, tab[p])) {
                cert.preserves_target = false;
                cert.witness = "H does not preserve A at " + std::to_string(p);
                break;
            }

    std::string wit;
    cert.suspension_ok = satisfies_suspension_condition(x, h.target, h.profile, &wit);
    if (!cert.suspension_ok) cert.witness = "ProfileViolatesSuspension: " + wit;

    WarpedSpace w = warped_product(x, h.grid, h.profile);
    CoarseMapTable induced;
    induced.source = &w.derived;
    induced.target = &x;
    induced.table.resize(w.derived.n_points);
    for (uint32_t p = 0; p < x.n_points; ++p)
        for (uint32_t j = 0; j < h.grid.size(); ++j)
            induced.table[w.wid(p, j)] = h.tables[j][p];
    cert.map_verdict = check_coarse_map(induced);
    if (!cert.map_verdict.controlled && cert.witness.empty())
        cert.witness = cert.map_verdict.witness;
    return cert;
}

GammaData gamma_map(const WindowedCoarseSpace& x, const std::vector<uint32_t>& a,
                    const std::vector<uint32_t>& b, const ControlledHomotopy& ha_in,
                    const ControlledHomotopy& hb_in) {
    ControlledHomotopy ha = ha_in, hb = hb_in;

    for (uint32_t attempt = 0;; ++attempt) {
        // pointwise minimum of the two homotopy profiles
        NeighborhoodProfile u;
        u.u.resize(x.n_points);
        for (uint32_t p = 0; p < x.n_points; ++p)
            u.u[p] = ha.profile.u[p] < hb.profile.u[p] ? ha.profile.u[p] : hb.profile.u[p];

        // symmetric grid about 0 from the union of both homotopy grids
        TimeGrid half;
        {
            std::vector<Rat64> ts = ha.grid.t;
            for (const auto& s : hb.grid.t) ts.push_back(s);
            std::sort(ts.begin(), ts.end(), [](Rat64 p, Rat64 q) { return p < q; });
            std::vector<Rat64> ded;
            for (const auto& s : ts)
                if (ded.empty() || !(ded.back() == s)) ded.push_back(s);
            half.t = ded;
        }
        TimeGrid grid = half.symmetrized();

        GammaData g;
        g.warped = warped_product(x, grid, u);
        g.product = product_space(x, x);
        g.ha = ha;
        g.hb = hb;
        g.profile = u;
        g.halvings = attempt;
        g.table.resize(g.warped.derived.n_points);
        const uint32_t ny = x.n_points;
        for (uint32_t p = 0; p < x.n_points; ++p)
            for (uint32_t j = 0; j < grid.size(); ++j) {
                Rat64 t = grid.t[j];
                Rat64 tminus = t < Rat64(0) ? Rat64(-t.num, t.den) : Rat64(0);
                Rat64 tplus = Rat64(0) < t ? t : Rat64(0);
                uint32_t first = ha.at_time(p, tminus);
                uint32_t second = hb.at_time(p, tplus);
                g.table[g.warped.wid(p, j)] = product_id(first, second, ny);
            }

        CoarseMapTable f;
        f.source = &g.warped.derived;
        f.target = &g.product;
        f.table = g.table;
        g.verdict = check_coarse_map(f);
        if (g.verdict.coarse()) {
            // (A∪B) × grid ∪ X × {±1} must land in A×X ∪ X×B
            for (uint32_t p = 0; p < x.n_points; ++p)
                for (uint32_t j = 0; j < grid.size(); ++j) {
                    bool boundary = (j == 0) || (j + 1 == grid.size()) ||
                                    sorted_contains(a, p) || sorted_contains(b, p);
                    if (!boundary) continue;
                    uint32_t q = g.table[g.warped.wid(p, j)];
                    uint32_t q1 = q / ny, q2 = q % ny;
                    require(sorted_contains(a, q1) || sorted_contains(b, q2),
                            "ProfileTooCoarse",
                            "Gamma boundary image escapes A×X ∪ X×B");
                }
            return g;
        }
        if (attempt >= 8)
            fail("ProfileTooCoarse", "Gamma not coarse after 8 halvings: " + g.verdict.witness);
        ha.profile = ha.profile.halved();
        hb.profile = hb.profile.halved();
        ha = ha.refined_double();
        hb = hb.refined_double();
    }
}

} // namespace coarse
