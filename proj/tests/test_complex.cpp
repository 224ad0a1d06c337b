#include <doctest.h>

#include "coarse/complex_ops.hpp"
#include "coarse/products.hpp"
#include "coarse/spaces_library.hpp"
#include "oracles.hpp"

using namespace coarse;
using F5 = Fp;

static WindowedCoarseSpace path_space(uint32_t n, std::vector<double> thr = {1.5}) {
    SpaceConfig cfg;
    cfg.label = "path";
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) d[i][j] = i > j ? i - j : j - i;
    cfg.metric = d;
    cfg.thresholds = std::move(thr);
    return build_space(cfg);
}

static WindowedCoarseSpace discrete_space(uint32_t n) {
    SpaceConfig cfg;
    cfg.label = "discrete";
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 10.0));
    for (uint32_t i = 0; i < n; ++i) d[i][i] = 0.0;
    cfg.metric = d;
    cfg.thresholds = {1.0};
    return build_space(cfg);
}

static WindowedCoarseSpace clique_space(uint32_t n) {
    SpaceConfig cfg;
    cfg.label = "clique";
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 1.0));
    for (uint32_t i = 0; i < n; ++i) d[i][i] = 0.0;
    cfg.metric = d;
    cfg.thresholds = {1.5};
    return build_space(cfg);
}

template <class F>
static Cochain<F> random_cochain(SlicePtr s, uint32_t deg, uint32_t rel,
                                 std::mt19937_64& rng) {
    Cochain<F> c;
    c.slice = s;
    c.degree = deg;
    c.rel = rel;
    std::uniform_int_distribution<int> coef(0, 4);
    for (size_t i = 0; i < s->count(deg); ++i) {
        if (tuple_flagged(*s, s->tuple(deg, i), rel)) continue;
        int v = coef(rng);
        if (v) c.val.emplace(i, F(v));
    }
    return c;
}

TEST_CASE("enumerate_slice: counts") {
    auto disc = discrete_space(3);
    auto s = enumerate_slice(disc, SliceOptions{1, 1, 1, 1});
    CHECK(s->count(0) == 3);
    CHECK(s->count(1) == 3); // only repeats

    auto cl = clique_space(3);
    auto s2 = enumerate_slice(cl, SliceOptions{1, 1, 1, 1});
    CHECK(s2->count(1) == 9);

    auto p7 = path_space(7);
    auto s3 = enumerate_slice(p7, SliceOptions{1, 1, 1, 2});
    CHECK(s3->count(2) == oracle::tuple_count(p7.ladder.at(1), 2));

    SliceOptions capped{1, 1, 1, 3};
    capped.cap = 10;
    CHECK_THROWS_WITH_AS(enumerate_slice(p7, capped), doctest::Contains("SliceTooLarge"),
                         Error);
}

TEST_CASE("coboundary: AS formula instantiations") {
    // scale 2 so that the full 3-path is one controlled clique
    auto p3 = path_space(3, {1.5, 2.5});
    auto s = enumerate_slice(p3, SliceOptions{2, 1, 1, 2});

    // φ(x) = x in degree 0: δφ((0,1)) = φ(1) − φ(0) = 1
    Cochain<F5> phi;
    phi.slice = s;
    phi.degree = 0;
    for (uint32_t x = 0; x < 3; ++x) {
        uint32_t t[1] = {x};
        phi.add(static_cast<uint64_t>(s->index_of(0, t)), F5(x));
    }
    auto d = coboundary(phi);
    uint32_t e01[2] = {0, 1};
    CHECK(d.eval(e01) == F5(1));
    auto d_sparse = coboundary_sparse(phi);
    for (size_t i = 0; i < s->count(1); ++i)
        CHECK(d.at_index(i) == d_sparse.at_index(i));

    // indicator of (1,2): δφ((0,1,2)) = 1, δφ((1,2,2)) = 0
    Cochain<F5> ind;
    ind.slice = s;
    ind.degree = 1;
    uint32_t t12[2] = {1, 2};
    ind.add(static_cast<uint64_t>(s->index_of(1, t12)), F5(1));
    auto di = coboundary(ind);
    uint32_t t012[3] = {0, 1, 2};
    uint32_t t122[3] = {1, 2, 2};
    CHECK(di.eval(t012) == F5(1));
    CHECK(di.eval(t122) == F5(0));
}

TEST_CASE("δ∘δ = 0 and ∂∘∂ = 0 on random data") {
    auto p = path_space(9);
    auto s = enumerate_slice(p, SliceOptions{1, 1, 1, 3});
    auto rng = oracle::rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        auto phi = random_cochain<F5>(s, 1, REL_NONE, rng);
        CHECK(coboundary(coboundary(phi)).zero());
        auto c = random_cochain<F5>(s, 3, REL_NONE, rng);
        Chain<F5> ch;
        ch.slice = s;
        ch.degree = 3;
        ch.val = c.val;
        CHECK(boundary(boundary(ch)).zero_mod_quotient());
    }
}

TEST_CASE("boundary: formula and 4-cycle fundamental class") {
    auto d = cycle_metric(4);
    SpaceConfig cfg;
    cfg.metric = d;
    cfg.thresholds = {1.1};
    auto sp = build_space(cfg);
    auto s = enumerate_slice(sp, SliceOptions{1, 1, 1, 2});

    Chain<F5> e;
    e.slice = s;
    e.degree = 1;
    uint32_t t01[2] = {0, 1};
    e.add_tuple(t01, F5(1));
    auto b = boundary(e);
    uint32_t p0[1] = {0}, p1[1] = {1};
    CHECK(b.at_index(static_cast<uint64_t>(s->index_of(0, p1))) == F5(1));
    CHECK(b.at_index(static_cast<uint64_t>(s->index_of(0, p0))) == F5(4)); // −1

    // fundamental cycle of the 4-cycle graph
    Chain<F5> z;
    z.slice = s;
    z.degree = 1;
    uint32_t edges[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    for (auto& ed : edges) z.add_tuple(ed, F5(1));
    CHECK(boundary(z).zero_mod_quotient());
}

TEST_CASE("relativity preservation under δ and ∂") {
    auto x = build_lattice_window(1, 4);
    auto s = enumerate_slice(x, SliceOptions{1, 1, 1, 2}, x.subspace("A"),
                             x.subspace("B"));
    auto rng = oracle::rng(11);
    auto phi = random_cochain<F5>(s, 1, REL_COLLAR | REL_A, rng);
    auto d = coboundary(phi);
    CHECK(d.satisfies_relativity());
    auto c = random_cochain<F5>(s, 2, REL_NONE, rng);
    Chain<F5> ch;
    ch.slice = s;
    ch.degree = 2;
    ch.val = c.val;
    ch.rel_quotient = REL_COLLAR | REL_B;
    auto bd = boundary(ch);
    CHECK(bd.rel_quotient == (REL_COLLAR | REL_B));
}

TEST_CASE("subdivision: chain map, homotopy, and A∪B landing") {
    // Z-window with halfspaces: excisive triad (A∩B = {0})
    auto x = build_lattice_window(1, 6);
    auto s = enumerate_slice(x, SliceOptions{1, 1, 1, 3}, x.subspace("A"),
                             x.subspace("B"));
    SubdivisionContext ctx(x, x.subspace("A"), x.subspace("B"));
    Subdivider<F5> sub(ctx);

    // ∂∘sd = sd∘∂ and ∂T + T∂ = id − sd on every slice tuple of degree ≤ 3
    for (uint32_t m = 1; m <= 3; ++m) {
        for (size_t i = 0; i < s->count(m); ++i) {
            SmallTuple t(s->tuple(m, i));

            auto lhs = formal_boundary(sub.sd(t));
            FormalChain<F5> rhs;
            rhs.width = m;
            for (uint32_t f = 0; f < t.len; ++f) {
                const auto& rec = sub.sd(t.face(f));
                F5 sgn = (f % 2 == 0) ? F5(1) : F5(-1);
                for (const auto& [u, v] : rec.val) rhs.add(u, v * sgn);
            }
            for (const auto& [u, v] : rhs.val) lhs.add(u, F5(0) - v);
            for (const auto& [u, v] : lhs.val) CHECK(is_zero(v));

            // ∂T(t) + T(∂t) = t − sd(t)
            auto ht = formal_boundary(sub.homotopy(t));
            for (uint32_t f = 0; f < t.len; ++f) {
                const auto& rec = sub.homotopy(t.face(f));
                F5 sgn = (f % 2 == 0) ? F5(1) : F5(-1);
                for (const auto& [u, v] : rec.val) ht.add(u, v * sgn);
            }
            ht.add(t, F5(-1));
            for (const auto& [u, v] : sub.sd(t).val) ht.add(u, v);
            for (const auto& [u, v] : ht.val) CHECK(is_zero(v));
        }
    }

    // degree 0: S = id
    auto rng = oracle::rng(3);
    auto phi0 = random_cochain<F5>(s, 0, REL_NONE, rng);
    auto s0 = subdivision(phi0, ctx);
    for (size_t i = 0; i < s->count(0); ++i)
        if (!s->in_aub(s->tuple(0, i))) CHECK(s0.at_index(i) == phi0.at_index(i));

    // φ supported on A-only tuples subdivides to zero on A∪B
    Cochain<F5> aphi;
    aphi.slice = s;
    aphi.degree = 1;
    for (size_t i = 0; i < s->count(1); ++i)
        if (s->in_a(s->tuple(1, i))) aphi.val.emplace(i, F5(2));
    auto sa = subdivision(aphi, ctx);
    CHECK(sa.satisfies_relativity()); // vanishes on all of A∪B

    // δS = Sδ on a random rel-{A,B} cochain
    auto phi = random_cochain<F5>(s, 1, REL_A | REL_B, rng);
    auto lhs = coboundary(subdivision(phi, ctx));
    auto rhs = subdivision(coboundary(phi), ctx);
    for (size_t i = 0; i < s->count(2); ++i)
        CHECK(lhs.at_index(i) == rhs.at_index(i));

    // on cocycles z: δ(h z) = z − S z (transpose of ∂T + T∂ = id − sd)
    auto hphi = [&](const Cochain<F5>& f) {
        Cochain<F5> out;
        out.slice = s;
        out.degree = f.degree - 1;
        for (size_t i = 0; i < s->count(f.degree - 1); ++i) {
            SmallTuple t(s->tuple(f.degree - 1, i));
            F5 v = sub.eval_homotopy(
                t, [&](std::span<const uint32_t> u) { return f.eval(u); });
            if (!is_zero(v)) out.val.emplace(i, v);
        }
        return out;
    };
    auto dphi = coboundary(phi); // a cocycle of degree 2
    auto lhs2 = coboundary(hphi(dphi));
    auto sz = subdivision(dphi, ctx);
    for (size_t i = 0; i < s->count(2); ++i) {
        F5 expect = dphi.at_index(i) - sz.at_index(i);
        CHECK(lhs2.at_index(i) == expect);
    }
}

TEST_CASE("subdivision requires excisiveness") {
    // A and B far apart with empty intersection: penumbras meet at mid scale
    auto x = path_space(9, {1.5, 4.5, 9.5});
    CHECK_THROWS_WITH_AS(SubdivisionContext(x, {0, 1}, {7, 8}),
                         doctest::Contains("NotExcisive"), Error);
}

TEST_CASE("prism: telescoping on a 0-chain and the runtime identity") {
    auto x = build_lattice_window(1, 4);
    auto sx = enumerate_slice(x, SliceOptions{1, 1, 1, 3}, x.subspace("A"),
                              x.subspace("B"));
    TimeGrid g = TimeGrid::uniform(Rat64(-1), Rat64(1), 8);
    NeighborhoodProfile u;
    u.u.assign(x.n_points, Rat64(1, 2));
    SliceOptions wopts{1, 2, 1, 4};
    wopts.m_factor = 1; // keep a nonempty core on this small window
    auto susp = make_suspension<F5>(x, x.subspace("A"), x.subspace("B"), sx, g, u, true,
                                    wopts);

    // c = single 0-tuple (4): P⁺c = −Σ_j ((4,t_j),(4,t_{j+1})) over 0 → 1
    Chain<F5> c;
    c.slice = sx;
    c.degree = 0;
    uint32_t t4[1] = {4};
    c.add_tuple(t4, F5(1));
    auto pc = prism(c, +1, susp);
    auto path = grid_index_path(susp.warped, Rat64(0), Rat64(1));
    for (size_t j = 0; j + 1 < path.size(); ++j) {
        uint32_t tup[2] = {susp.wid(4, path[j]), susp.wid(4, path[j + 1])};
        ptrdiff_t idx = susp.slice_w->index_of(1, tup);
        REQUIRE(idx >= 0);
        CHECK(pc.at_index(static_cast<uint64_t>(idx)) == F5(-1));
    }
    // ∂P⁺c = (4,0) − (4,1) ≡ ι_+c modulo the slice-(+1) marker (raw boundary,
    // before the quotient normalization)
    Chain<F5> pc_raw = pc;
    pc_raw.rel_quotient = REL_NONE;
    auto bd = boundary(pc_raw);
    uint32_t at0[1] = {susp.wid(4, susp.zero_index)};
    uint32_t at1[1] = {susp.wid(4, susp.e2_index)};
    CHECK(bd.at_index(static_cast<uint64_t>(susp.slice_w->index_of(0, at0))) == F5(1));
    CHECK(bd.at_index(static_cast<uint64_t>(susp.slice_w->index_of(0, at1))) == F5(4));

    // random degree ≤ 2 chains: the contract is asserted inside sigma_push
    auto rng = oracle::rng(5);
    for (uint32_t m = 0; m <= 2; ++m) {
        auto r = random_cochain<F5>(sx, m, REL_NONE, rng);
        Chain<F5> ch;
        ch.slice = sx;
        ch.degree = m;
        ch.val = r.val;
        ch.rel_quotient = REL_COLLAR | REL_A | REL_B;
        ch.normalize();
        CHECK_NOTHROW(sigma_push_formal(susp, ch));
    }

    // a chain supported in A × grid stays in the A-marked subcomplex
    Chain<F5> ca;
    ca.slice = sx;
    ca.degree = 0;
    uint32_t ta[1] = {0}; // leftmost point lies in A
    ca.add_tuple(ta, F5(1));
    auto pa = prism(ca, +1, susp);
    for (const auto& [idx, v] : pa.val) {
        if (is_zero(v)) continue;
        auto t = susp.slice_w->tuple(1, idx);
        CHECK(susp.slice_w->in_set(t, susp.warped.lift_set(x.subspace("A"))));
    }
}
