#include "coarse/spaces_library.hpp"

#include <algorithm>
#include <cmath>

#include "coarse/error.hpp"

namespace coarse {

WindowedCoarseSpace build_lattice_window(uint32_t dim, int radius,
                                         std::vector<double> thresholds) {
    require(radius >= 2, "BadIndex", "lattice window needs N ≥ 2");
    const int side = 2 * radius + 1;
    uint32_t n = 1;
    for (uint32_t d = 0; d < dim; ++d) n *= static_cast<uint32_t>(side);

    auto coord = [&](uint32_t id, uint32_t d) {
        for (uint32_t k = dim - 1; k > d; --k) id /= side;
        return static_cast<int>(id % side) - radius;
    };

    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) {
            int m = 0;
            for (uint32_t d = 0; d < dim; ++d)
                m = std::max(m, std::abs(coord(i, d) - coord(j, d)));
            dist[i][j] = m;
        }

    SpaceConfig cfg;
    cfg.label = "Z" + std::to_string(dim) + "win" + std::to_string(radius);
    cfg.metric = dist;
    if (thresholds.empty()) thresholds = {1.5, 2.5};
    if (thresholds.back() < 2.0 * radius) thresholds.push_back(2.0 * radius + 0.5);
    cfg.thresholds = std::move(thresholds);

    for (uint32_t i = 0; i < n; ++i) {
        bool shell = false, a = true, b = true;
        for (uint32_t d = 0; d < dim; ++d) {
            int c = coord(i, d);
            if (std::abs(c) == radius) shell = true;
            if (d == 0 && c > 0) a = false;
            if (d == 0 && c < 0) b = false;
        }
        if (shell) cfg.frontier.push_back(i);
        if (a) cfg.subspaces["A"].push_back(i);
        if (b) cfg.subspaces["B"].push_back(i);
    }
    return build_space(cfg);
}

std::vector<std::vector<double>> cycle_metric(uint32_t n) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) {
            uint32_t diff = i > j ? i - j : j - i;
            d[i][j] = std::min(diff, n - diff);
        }
    return d;
}

std::vector<std::vector<double>> torus_grid_metric(uint32_t w, uint32_t h) {
    uint32_t n = w * h;
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    auto wrap = [](uint32_t a, uint32_t b, uint32_t len) {
        uint32_t diff = a > b ? a - b : b - a;
        return std::min(diff, len - diff);
    };
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j)
            d[i][j] = wrap(i % w, j % w, w) + wrap(i / w, j / w, h);
    return d;
}

std::vector<std::vector<double>> torus_grid_linf_metric(uint32_t w, uint32_t h) {
    uint32_t n = w * h;
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    auto wrap = [](uint32_t a, uint32_t b, uint32_t len) {
        uint32_t diff = a > b ? a - b : b - a;
        return std::min(diff, len - diff);
    };
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j)
            d[i][j] = std::max(wrap(i % w, j % w, w), wrap(i / w, j / w, h));
    return d;
}

std::vector<std::vector<double>> point_metric() { return {{0.0}}; }

std::vector<uint32_t> ConeModel::cone_over(const std::vector<uint32_t>& base_subset) const {
    std::vector<uint32_t> out{apex()};
    for (uint32_t l = 1; l <= levels; ++l)
        for (uint32_t v : base_subset) out.push_back(vid(v, l));
    std::sort(out.begin(), out.end());
    return out;
}

NeighborhoodProfile ConeModel::radial_profile(Rat64 c) const {
    NeighborhoodProfile u;
    u.u.resize(space.n_points);
    for (uint32_t p = 0; p < space.n_points; ++p) {
        uint32_t l = level_of(p);
        u.u[p] = Rat64(c.num, c.den * (1 + static_cast<int64_t>(l)));
    }
    return u;
}

ControlledHomotopy ConeModel::contraction(const std::vector<uint32_t>& target_cone,
                                          uint32_t steps, Rat64 profile_c,
                                          int schedule) const {
    ControlledHomotopy h;
    h.space = &space;
    h.target = target_cone;
    std::sort(h.target.begin(), h.target.end());
    h.grid = TimeGrid::uniform(Rat64(0), Rat64(1), steps);
    h.profile = radial_profile(profile_c);
    for (uint32_t j = 0; j <= steps; ++j) {
        std::vector<uint32_t> table(space.n_points);
        for (uint32_t p = 0; p < space.n_points; ++p) {
            uint32_t l = level_of(p), v = vertex_of(p);
            // level' = ceil(l·(1−s)) with s = j/steps (schedule 1) or the
            // quadratic reparametrization s(2−s) (schedule 2)
            int64_t num, den;
            if (schedule == 1) {
                num = static_cast<int64_t>(l) * (steps - j);
                den = steps;
            } else {
                num = static_cast<int64_t>(l) * (steps - j) * (steps - j);
                den = static_cast<int64_t>(steps) * steps;
            }
            uint32_t lvl = static_cast<uint32_t>((num + den - 1) / den);
            table[p] = vid(v, lvl);
        }
        h.tables.push_back(std::move(table));
    }
    return h;
}

ConeModel build_cone(const std::vector<std::vector<double>>& base_dist,
                     const std::vector<uint32_t>& subset_l,
                     const std::vector<uint32_t>& subset_m, uint32_t levels,
                     std::vector<double> thresholds) {
    ConeModel cone;
    cone.base_size = static_cast<uint32_t>(base_dist.size());
    cone.levels = levels;
    cone.base_dist = base_dist;
    cone.set_l = subset_l;
    cone.set_m = subset_m;
    std::sort(cone.set_l.begin(), cone.set_l.end());
    std::sort(cone.set_m.begin(), cone.set_m.end());

    const uint32_t n = 1 + cone.base_size * levels;
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    double diam = 0.0;
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) {
            if (i == j) continue;
            uint32_t li = cone.level_of(i), lj = cone.level_of(j);
            uint32_t vi = cone.vertex_of(i), vj = cone.vertex_of(j);
            // descend to a common level k, cross there, ascend
            double best = static_cast<double>(li + lj); // through the apex
            uint32_t kmax = std::min(li, lj);
            for (uint32_t k = 1; k <= kmax; ++k) {
                double through = static_cast<double>(li - k) +
                                 static_cast<double>(lj - k) +
                                 k * base_dist[vi][vj];
                best = std::min(best, through);
            }
            d[i][j] = best;
            diam = std::max(diam, best);
        }

    SpaceConfig cfg;
    cfg.label = "cone" + std::to_string(cone.base_size) + "x" + std::to_string(levels);
    cfg.metric = std::move(d);
    if (thresholds.empty()) thresholds = {1.1, 2.2};
    if (thresholds.back() < diam) thresholds.push_back(diam + 0.5);
    cfg.thresholds = std::move(thresholds);
    for (uint32_t v = 0; v < cone.base_size; ++v)
        cfg.frontier.push_back(cone.vid(v, levels));

    cone.space = build_space(cfg);
    cone.space.subspaces["OL"] = cone.cone_over(cone.set_l);
    cone.space.subspaces["OM"] = cone.cone_over(cone.set_m);
    cone.space.subspaces["apex"] = {cone.apex()};
    return cone;
}

WindowedCoarseSpace base_space_model(const std::vector<std::vector<double>>& dist,
                                     double eps, double eps2,
                                     const std::vector<uint32_t>& subset_l,
                                     const std::vector<uint32_t>& subset_m) {
    SpaceConfig cfg;
    cfg.label = "base";
    cfg.metric = dist;
    double diam = 0.0;
    for (const auto& row : dist)
        for (double v : row) diam = std::max(diam, v);
    cfg.thresholds = {eps, eps2};
    if (cfg.thresholds.back() < diam) cfg.thresholds.push_back(diam + 0.5);
    cfg.subspaces["L"] = subset_l;
    cfg.subspaces["M"] = subset_m;
    return build_space(cfg);
}

} // namespace coarse
