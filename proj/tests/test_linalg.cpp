#include <doctest.h>

#include "coarse/linalg.hpp"
#include "coarse/products.hpp"
#include "coarse/spaces_library.hpp"
#include "oracles.hpp"

using namespace coarse;
using F5 = Fp;

TEST_CASE("rank_kernel: zero, identity, 4-cycle coboundary") {
    // zero 3x3
    std::vector<SparseVec<F5>> zero(3);
    auto rk0 = rank_kernel(zero);
    CHECK(rk0.rank == 0);
    CHECK(rk0.kernel.size() == 3);

    // identity 3x3
    std::vector<SparseVec<F5>> id(3);
    for (uint32_t j = 0; j < 3; ++j) id[j].set(j, F5(1));
    auto rk1 = rank_kernel(id);
    CHECK(rk1.rank == 3);
    CHECK(rk1.kernel.empty());

    // δ-matrix of the 4-cycle graph, degree 0 → 1, über F_5: rank 3
    auto d = cycle_metric(4);
    SpaceConfig cfg;
    cfg.metric = d;
    cfg.thresholds = {1.1};
    auto sp = build_space(cfg);
    auto s = enumerate_slice(sp, SliceOptions{1, 1, 1, 2});
    auto pair = std::make_shared<PairComplex<F5>>(s, REL_NONE, true);
    const auto& cols = pair->diff_columns(0);
    auto rk = rank_kernel(cols);
    CHECK(rk.rank == 3);

    // dense elimination oracle on the same matrix
    std::vector<std::vector<uint32_t>> dense(pair->basis(1).size(),
                                             std::vector<uint32_t>(cols.size(), 0));
    for (size_t j = 0; j < cols.size(); ++j)
        for (const auto& [r, v] : cols[j].e) dense[r][j] = v.value();
    CHECK(oracle::dense_rank_fp(dense, 5) == 3);
}

TEST_CASE("homology_of_pair: bounded space is acyclic above degree 0") {
    // clique at full scale: frontier empty, every set bounded
    SpaceConfig cfg;
    std::vector<std::vector<double>> d(5, std::vector<double>(5, 1.0));
    for (int i = 0; i < 5; ++i) d[i][i] = 0.0;
    cfg.metric = d;
    cfg.thresholds = {1.5};
    auto sp = build_space(cfg);
    auto s = enumerate_slice(sp, SliceOptions{1, 1, 1, 3});
    auto pair = std::make_shared<PairComplex<F5>>(s, REL_NONE, true);
    CHECK(pair->betti(0) == 1); // HX^0 = field
    CHECK(pair->betti(1) == 0);
    CHECK(pair->betti(2) == 0);
}

TEST_CASE("homology_of_pair: Z-window HX^1 and the step cocycle") {
    auto x = build_lattice_window(1, 8);
    auto s = enumerate_slice(x, SliceOptions{1, 1, 1, 2});
    auto pair = std::make_shared<PairComplex<F5>>(s, REL_COLLAR, true);
    CHECK(pair->betti(0) == 0);
    CHECK(pair->betti(1) == 1);

    // the generator is cohomologous to the step cocycle
    // φ(x,y) = [x ≤ 0 < y] − [y ≤ 0 < x]  (coords: id 8 is 0)
    auto g = homology_of_pair(pair, 1);
    REQUIRE(g.classes.size() == 1);
    Cochain<F5> step;
    step.slice = s;
    step.degree = 1;
    step.rel = REL_COLLAR;
    for (size_t i = 0; i < s->count(1); ++i) {
        auto t = s->tuple(1, i);
        int cx = static_cast<int>(t[0]) - 8, cy = static_cast<int>(t[1]) - 8;
        int v = (cx <= 0 && 0 < cy) ? 1 : (cy <= 0 && 0 < cx) ? -1 : 0;
        if (v) step.val.emplace(i, F5(v));
    }
    REQUIRE(step.satisfies_relativity());
    HomologyClass<F5> step_cls{pair, 1, step.val, {}};
    // both classes generate: step ≠ 0 and each is a multiple of the other
    CHECK(!step.zero());
    bool zero_class = pair->is_boundary(pair->to_coords(step.val, 1), 1);
    CHECK(!zero_class);
    // dense-rank cross-check of betti at N = 8 (spec's derivation step)
    const auto& cols0 = pair->diff_columns(0);
    const auto& cols1 = pair->diff_columns(1);
    std::vector<std::vector<uint32_t>> d0(pair->basis(1).size(),
                                          std::vector<uint32_t>(cols0.size(), 0));
    for (size_t j = 0; j < cols0.size(); ++j)
        for (const auto& [r, v] : cols0[j].e) d0[r][j] = v.value();
    std::vector<std::vector<uint32_t>> d1(pair->basis(2).size(),
                                          std::vector<uint32_t>(cols1.size(), 0));
    for (size_t j = 0; j < cols1.size(); ++j)
        for (const auto& [r, v] : cols1[j].e) d1[r][j] = v.value();
    size_t rank0 = oracle::dense_rank_fp(d0, 5);
    size_t rank1 = oracle::dense_rank_fp(d1, 5);
    CHECK(pair->basis(1).size() - rank1 - rank0 == 1);
}

TEST_CASE("classes_equal and solve_coboundary") {
    auto x = build_lattice_window(1, 6);
    auto s = enumerate_slice(x, SliceOptions{1, 1, 1, 2});
    auto pair = std::make_shared<PairComplex<F5>>(s, REL_COLLAR, true);
    auto g = homology_of_pair(pair, 1);
    REQUIRE(g.betti == 1);
    auto a = g.classes[0];

    CHECK(classes_equal(a, a));

    // a vs a + δ(random rel-collar cochain)
    auto rng = oracle::rng(9);
    Cochain<F5> eta;
    eta.slice = s;
    eta.degree = 0;
    eta.rel = REL_COLLAR;
    std::uniform_int_distribution<int> coef(0, 4);
    for (size_t i = 0; i < s->count(0); ++i) {
        if (s->in_collar(s->tuple(0, i))) continue;
        int v = coef(rng);
        if (v) eta.val.emplace(i, F5(v));
    }
    auto deta = coboundary_sparse(eta);
    auto b = a;
    for (const auto& [i, v] : deta.val) {
        auto [it, fresh] = b.rep.emplace(i, v);
        if (!fresh) it->second += v;
    }
    CHECK(classes_equal(a, b));

    // solve_coboundary: target = 0 → zero preimage
    auto sol0 = solve_coboundary<F5>({}, pair, 1);
    CHECK(sol0.in_image);
    CHECK(sol0.preimage.empty());

    // target = δ(known) recovers a preimage
    auto sol1 = solve_coboundary(deta.val, pair, 1);
    REQUIRE(sol1.in_image);
    Cochain<F5> back;
    back.slice = s;
    back.degree = 0;
    back.val = sol1.preimage;
    auto dback = coboundary_sparse(back);
    for (size_t i = 0; i < s->count(1); ++i)
        CHECK(dback.at_index(i) == deta.at_index(i));

    // nontrivial cocycle is not a coboundary; certificate is nonzero
    auto sol2 = solve_coboundary(a.rep, pair, 1);
    CHECK(!sol2.in_image);
    CHECK(!sol2.certificate.empty());
}

TEST_CASE("homology invariance under relabeling") {
    // 6-cycle with two different point labelings has the same Betti numbers
    auto d1 = cycle_metric(6);
    std::vector<uint32_t> perm{3, 0, 5, 1, 4, 2};
    std::vector<std::vector<double>> d2(6, std::vector<double>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) d2[perm[i]][perm[j]] = d1[i][j];
    for (auto* dm : {&d1, &d2}) {
        SpaceConfig cfg;
        cfg.metric = *dm;
        cfg.thresholds = {1.1};
        auto sp = build_space(cfg);
        auto s = enumerate_slice(sp, SliceOptions{1, 1, 1, 2});
        auto pair = std::make_shared<PairComplex<F5>>(s, REL_NONE, true);
        CHECK(pair->betti(0) == 1);
        CHECK(pair->betti(1) == 1);
    }
}

TEST_CASE("rationals: exact elimination on the Z-window") {
    auto x = build_lattice_window(1, 5);
    auto s = enumerate_slice(x, SliceOptions{1, 1, 1, 2});
    auto pair = std::make_shared<PairComplex<Rat>>(s, REL_COLLAR, true);
    CHECK(pair->betti(1) == 1);
    auto g = homology_of_pair(pair, 1);
    CHECK(g.classes.size() == 1);
    // rank + kernel dimension = columns for every computed matrix
    for (uint32_t m = 0; m <= 1; ++m) {
        auto rk = rank_kernel(pair->diff_columns(m));
        CHECK(rk.rank + rk.kernel.size() == pair->basis(m).size());
    }
}

TEST_CASE("cone over C12: HX^2 rel apex has betti 1 with stabilization") {
    // the collar floor must sit inside the scale's base-visible band; the
    // (3,3) → (4,4) schedule keeps both complexes in that regime
    auto cone = build_cone(cycle_metric(12), {0}, {0}, 6, {1.1, 2.2, 3.3, 3.6});
    SliceOptions oa{3, 1, 3, 3};
    oa.m_factor = 1;
    SliceOptions ob{4, 1, 4, 3};
    ob.m_factor = 1;
    auto sa = enumerate_slice(cone.space, oa, cone.space.subspace("apex"));
    auto sb = enumerate_slice(cone.space, ob, cone.space.subspace("apex"));
    auto pa = std::make_shared<PairComplex<F5>>(sa, REL_COLLAR | REL_A, true);
    auto pb = std::make_shared<PairComplex<F5>>(sb, REL_COLLAR | REL_A, true);
    CHECK(pa->betti(2) == 1);
    CHECK(pb->betti(2) == 1);
    auto rec = stabilize(*pa, *pb, 2);
    CHECK(rec.stable);
}

TEST_CASE("torus cone: two HX^2 generators over the sup-metric base") {
    auto cone = build_cone(torus_grid_linf_metric(4, 4), {0}, {0}, 3, {1.1, 2.2, 3.3});
    SliceOptions o{2, 1, 1, 3};
    o.m_factor = 1;
    auto s = enumerate_slice(cone.space, o, cone.space.subspace("apex"));
    auto pair = std::make_shared<PairComplex<F5>>(s, REL_COLLAR | REL_A, true);
    CHECK(pair->betti(2) == 2);
}

TEST_CASE("Z-window stabilization certificate") {
    auto x = build_lattice_window(1, 10);
    auto sa = enumerate_slice(x, SliceOptions{1, 1, 1, 2});
    auto sb = enumerate_slice(x, SliceOptions{2, 1, 2, 2});
    auto pa = std::make_shared<PairComplex<F5>>(sa, REL_COLLAR, true);
    auto pb = std::make_shared<PairComplex<F5>>(sb, REL_COLLAR, true);
    auto rec = stabilize(*pa, *pb, 1);
    CHECK(rec.betti_a == 1);
    CHECK(rec.betti_b == 1);
    CHECK(rec.stable);
}
