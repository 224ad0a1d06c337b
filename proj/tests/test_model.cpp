#include <doctest.h>

#include <functional>

#include "coarse/error.hpp"
#include "coarse/maps.hpp"
#include "coarse/spaces_library.hpp"
#include "oracles.hpp"

using namespace coarse;

static WindowedCoarseSpace line_space(uint32_t n, std::vector<double> thresholds,
                                      std::vector<uint32_t> frontier = {}) {
    SpaceConfig cfg;
    cfg.label = "line" + std::to_string(n);
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) d[i][j] = i > j ? i - j : j - i;
    cfg.metric = d;
    cfg.thresholds = std::move(thresholds);
    cfg.frontier = std::move(frontier);
    return build_space(cfg);
}

TEST_CASE("build_space: 5-point line ladder") {
    auto s = line_space(5, {1.5, 3.5}, {0, 4});
    CHECK(s.n_points == 5);
    CHECK(s.ladder.size() == 2);
    // E_1 = adjacent-or-equal, E_2 = distance ≤ 3
    CHECK(s.ladder.at(1).related(0, 1));
    CHECK(!s.ladder.at(1).related(0, 2));
    CHECK(s.ladder.at(2).related(0, 3));
    CHECK(!s.ladder.at(2).related(0, 4));
    s.ladder.validate();
}

TEST_CASE("build_space: single point") {
    SpaceConfig cfg;
    cfg.metric = std::vector<std::vector<double>>{{0.0}};
    cfg.thresholds = {1.0};
    auto s = build_space(cfg);
    CHECK(s.n_points == 1);
    CHECK(s.ladder.at(1).pair_count() == 1);
}

TEST_CASE("build_space: 4x4 torus pair count (brute force oracle)") {
    auto d = torus_grid_metric(4, 4);
    SpaceConfig cfg;
    cfg.metric = d;
    cfg.thresholds = {1.1, 2.1};
    auto s = build_space(cfg);
    CHECK(s.ladder.at(1).pair_count() == oracle::pair_count(d, 1.1));
    CHECK(s.ladder.at(1).pair_count() == 16 * 5);
    CHECK(s.ladder.at(2).pair_count() == oracle::pair_count(d, 2.1));
}

TEST_CASE("build_space: error conditions") {
    SpaceConfig bad;
    bad.metric = {{0.0, 1.0}, {2.0, 0.0}};
    bad.thresholds = {1.0};
    CHECK_THROWS_WITH_AS(build_space(bad), doctest::Contains("AsymmetricDistance"),
                         Error);
    SpaceConfig nn;
    nn.metric = {{0.0, 1.0}, {1.0, 0.0}};
    nn.thresholds = {2.0, 1.0};
    CHECK_THROWS_WITH_AS(build_space(nn), doctest::Contains("NonNestedLadder"), Error);
    SpaceConfig fr;
    fr.metric = {{0.0, 1.0}, {1.0, 0.0}};
    fr.thresholds = {1.0};
    fr.frontier = {7};
    CHECK_THROWS_WITH_AS(build_space(fr), doctest::Contains("FrontierNotSubset"), Error);
}

TEST_CASE("penumbra: line of 7, interval growth") {
    auto s = line_space(7, {1.5});
    auto p = penumbra(s, 1, 2, {3});
    CHECK(p == std::vector<uint32_t>{1, 2, 3, 4, 5});
    CHECK(penumbra(s, 1, 0, {3}) == std::vector<uint32_t>{3});
    CHECK_THROWS_WITH_AS(penumbra(s, 9, 1, {0}), doctest::Contains("BadIndex"), Error);
}

TEST_CASE("penumbra: torus BFS closure oracle") {
    auto d = torus_grid_metric(4, 4);
    SpaceConfig cfg;
    cfg.metric = d;
    cfg.thresholds = {1.1};
    auto s = build_space(cfg);
    auto adj = [&](uint32_t a, uint32_t b) { return d[a][b] <= 1.1; };
    for (uint32_t k = 1; k <= 4; ++k) {
        auto pen = penumbra(s, 1, k, {5});
        auto closure = oracle::bfs_closure(16, {5}, adj, k);
        CHECK(std::set<uint32_t>(pen.begin(), pen.end()) == closure);
    }
    // k = diameter reaches everything
    CHECK(penumbra(s, 1, 4, {5}).size() == 16);
}

TEST_CASE("product_space: cardinalities and identity case") {
    auto x = line_space(2, {1.5});
    auto y = line_space(3, {1.5});
    auto p = product_space(x, y);
    CHECK(p.n_points == 6);
    CHECK(p.ladder.at(1).pair_count() ==
          x.ladder.at(1).pair_count() * y.ladder.at(1).pair_count());

    SpaceConfig pt;
    pt.metric = std::vector<std::vector<double>>{{0.0}};
    pt.thresholds = {1.0};
    auto one = build_space(pt);
    auto xp = product_space(x, one);
    CHECK(xp.n_points == x.n_points);
    CHECK(xp.ladder.at(1).pair_count() == x.ladder.at(1).pair_count());
}

TEST_CASE("product_space: penumbra excision identity on a random 5x5 instance") {
    auto rng = oracle::rng(42);
    auto rnd_space = [&](const char* label) {
        SpaceConfig cfg;
        cfg.label = label;
        std::vector<std::vector<double>> d(5, std::vector<double>(5, 0.0));
        std::uniform_real_distribution<double> u(1.0, 4.0);
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) d[i][j] = d[j][i] = u(rng);
        cfg.metric = d;
        cfg.thresholds = {2.0, 4.5};
        cfg.subspaces["S"] = {0, 1};
        return build_space(cfg);
    };
    auto x = rnd_space("rx");
    auto y = rnd_space("ry");
    auto p = product_space(x, y);
    const auto& a_lift = p.subspace("SxY");
    const auto& b_lift = p.subspace("XxS");
    std::vector<uint32_t> ab = sorted_intersection(a_lift, b_lift);
    for (size_t n = 1; n <= p.ladder.size(); ++n) {
        auto pa = penumbra(p, n, 1, a_lift);
        auto pb = penumbra(p, n, 1, b_lift);
        auto pab = penumbra(p, n, 1, ab);
        CHECK(sorted_intersection(pa, pb) == pab);
    }
}

TEST_CASE("warped_product: degenerate profiles") {
    auto x = line_space(4, {1.5}, {3});
    TimeGrid g = TimeGrid::uniform(Rat64(0), Rat64(1), 4);
    NeighborhoodProfile big;
    big.u.assign(4, Rat64(10));
    auto w = warped_product(x, g, big);
    // all same-point time pairs related at scale 1
    CHECK(w.derived.ladder.at(1).related(w.wid(0, 0), w.wid(0, 4)));
    // projection is a coarse map (degenerate profile: warped ≃ X)
    CoarseMapTable proj;
    proj.source = &w.derived;
    proj.target = &x;
    proj.table.resize(w.derived.n_points);
    for (uint32_t p = 0; p < 4; ++p)
        for (uint32_t i = 0; i < 5; ++i) proj.table[w.wid(p, i)] = p;
    auto v = check_coarse_map(proj);
    CHECK(v.controlled);
    CHECK(v.proper);
    // section at time 0 in the other direction
    CoarseMapTable sect;
    sect.source = &x;
    sect.target = &w.derived;
    sect.table.resize(4);
    for (uint32_t p = 0; p < 4; ++p) sect.table[p] = w.wid(p, 0);
    auto vs = check_coarse_map(sect);
    CHECK(vs.coarse());

    NeighborhoodProfile tiny;
    tiny.u.assign(4, Rat64(1, 100));
    auto w2 = warped_product(x, g, tiny);
    CHECK(!w2.derived.ladder.at(1).related(w2.wid(0, 0), w2.wid(0, 1)));
    CHECK(w2.derived.ladder.at(1).related(w2.wid(0, 1), w2.wid(1, 1)));
}

TEST_CASE("warped_product: ray with shrinking profile") {
    auto x = line_space(11, {1.5}, {10});
    TimeGrid g = TimeGrid::uniform(Rat64(0), Rat64(1), 11);
    NeighborhoodProfile u;
    for (int i = 0; i <= 10; ++i) u.u.push_back(Rat64(1, 1 + i));
    auto w = warped_product(x, g, u);
    // (10, t) is F_1-related only to itself at other times iff |Δt| < 1/11;
    // grid step is 1/11 so no distinct times relate, only E_1 neighbors at
    // equal time remain
    for (uint32_t i = 0; i < 12; ++i)
        for (uint32_t j = 0; j < 12; ++j)
            if (i != j) CHECK(!w.derived.ladder.at(1).related(w.wid(10, i), w.wid(10, j)));
    CHECK(w.derived.ladder.at(1).related(w.wid(10, 3), w.wid(9, 3)));
}

TEST_CASE("check_coarse_map: identity, constant, inclusion") {
    auto x = build_lattice_window(1, 5); // {-5..5}, frontier {±5}
    CoarseMapTable id;
    id.source = &x;
    id.target = &x;
    for (uint32_t p = 0; p < x.n_points; ++p) id.table.push_back(p);
    auto v = check_coarse_map(id);
    CHECK(v.coarse());
    CHECK(v.proper_k0 == 0);
    for (size_t n = 1; n <= x.ladder.size(); ++n)
        CHECK(v.expansion_profile[n - 1] == n);

    // constant map to the deep interior: controlled but not proper
    CoarseMapTable cst;
    cst.source = &x;
    cst.target = &x;
    cst.table.assign(x.n_points, 5); // center of the window
    auto vc = check_coarse_map(cst);
    CHECK(vc.controlled);
    CHECK(!vc.proper);

    // inclusion of rays {0..5} into {0..10}, frontier at the right ends
    auto small = line_space(6, {1.5, 10.5}, {5});
    auto big = line_space(11, {1.5, 10.5}, {10});
    CoarseMapTable inc;
    inc.source = &small;
    inc.target = &big;
    for (uint32_t p = 0; p < 6; ++p) inc.table.push_back(p);
    auto vi = check_coarse_map(inc);
    CHECK(vi.coarse());
}

TEST_CASE("generalized controlled homotopy: identity and ray contraction") {
    auto x = line_space(8, {1.5, 7.5}, {7}); // ray {0..7}
    // H_t = id, A = X
    ControlledHomotopy hid;
    hid.space = &x;
    for (uint32_t p = 0; p < 8; ++p) hid.target.push_back(p);
    hid.grid = TimeGrid::uniform(Rat64(0), Rat64(1), 2);
    hid.tables.assign(3, hid.target);
    hid.profile.u.assign(8, Rat64(1));
    auto cid = check_generalized_controlled_homotopy(hid);
    CHECK(cid.wgcdr());

    // contraction of the ray to {0}: H(x, j/p) = max(0, x − j) with p = 8
    ControlledHomotopy hc;
    hc.space = &x;
    hc.target = {0};
    const uint32_t p = 8;
    hc.grid = TimeGrid::uniform(Rat64(0), Rat64(1), p);
    for (uint32_t j = 0; j <= p; ++j) {
        std::vector<uint32_t> tab(8);
        for (uint32_t q = 0; q < 8; ++q) tab[q] = q > j ? q - j : 0;
        hc.tables.push_back(std::move(tab));
    }
    for (uint32_t q = 0; q < 8; ++q) hc.profile.u.push_back(Rat64(1, 8 * (1 + q)));
    auto cc = check_generalized_controlled_homotopy(hc);
    CHECK(cc.map_verdict.controlled);
    CHECK(cc.endpoint_identity);
    CHECK(cc.endpoint_in_target);
    CHECK(cc.preserves_target);
    CHECK(cc.suspension_ok);
    CHECK(cc.wgcdr());
}

TEST_CASE("cone contraction is certified WGCDR data") {
    auto cone = build_cone(cycle_metric(6), {0}, {0}, 5);
    auto h = cone.contraction(cone.space.subspace("apex"), 8, Rat64(1));
    auto cert = check_generalized_controlled_homotopy(h);
    CHECK(cert.wgcdr());
}

TEST_CASE("gamma_map: diagonal at t = 0, deformation at the ends") {
    auto x = line_space(6, {1.5, 5.5}, {5}); // ray {0..5}
    ControlledHomotopy h;
    h.space = &x;
    h.target = {0};
    const uint32_t p = 6;
    h.grid = TimeGrid::uniform(Rat64(0), Rat64(1), p);
    for (uint32_t j = 0; j <= p; ++j) {
        std::vector<uint32_t> tab(6);
        for (uint32_t q = 0; q < 6; ++q) tab[q] = q > j ? q - j : 0;
        h.tables.push_back(std::move(tab));
    }
    for (uint32_t q = 0; q < 6; ++q) h.profile.u.push_back(Rat64(1, 6 * (1 + q)));

    auto g = gamma_map(x, {0}, {0}, h, h);
    CHECK(g.verdict.coarse());
    const uint32_t ny = x.n_points;
    ptrdiff_t zero = g.warped.grid.index_of(Rat64(0));
    REQUIRE(zero >= 0);
    for (uint32_t q = 0; q < 6; ++q) {
        // t = 0 row is the diagonal
        CHECK(g.table[g.warped.wid(q, static_cast<uint32_t>(zero))] ==
              product_id(q, q, ny));
        // t = 1 row is x ↦ (x, H_1(x)) ∈ X × B
        CHECK(g.table[g.warped.wid(q, static_cast<uint32_t>(g.warped.grid.size() - 1))] ==
              product_id(q, 0, ny));
    }
    // Γ(5, −1) = (H_1(5), 5) = (0, 5)
    CHECK(g.table[g.warped.wid(5, 0)] == product_id(0, 5, ny));
}

TEST_CASE("penumbra monotonicity invariants") {
    auto x = build_lattice_window(1, 4);
    std::vector<uint32_t> s{4, 5};
    for (size_t n = 1; n <= x.ladder.size(); ++n) {
        auto p1 = penumbra(x, n, 1, s);
        auto p2 = penumbra(x, n, 2, s);
        CHECK(std::includes(p1.begin(), p1.end(), s.begin(), s.end()));
        CHECK(std::includes(p2.begin(), p2.end(), p1.begin(), p1.end()));
        if (n > 1) {
            auto q1 = penumbra(x, n - 1, 1, s);
            CHECK(std::includes(p1.begin(), p1.end(), q1.begin(), q1.end()));
        }
    }
}
