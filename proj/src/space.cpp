#include "coarse/space.hpp"

#include <algorithm>
#include <cmath>

#include "coarse/error.hpp"

namespace coarse {

void EntourageLadder::validate() const {
    require(!rel.empty(), "EmptyLadder", "ladder has no relations");
    for (size_t i = 0; i < rel.size(); ++i) {
        require(rel[i].is_symmetric(), "AsymmetricRelation",
                "ladder entry " + std::to_string(i + 1));
        if (i == 0)
            require(rel[0].contains_diagonal(), "NonNestedLadder",
                    "diagonal not contained in E_1");
        if (i + 1 < rel.size())
            require(rel[i].subset_of(rel[i + 1]), "NonNestedLadder",
                    "E_" + std::to_string(i + 1) + " not contained in E_" +
                        std::to_string(i + 2));
    }
}

const std::vector<uint32_t>& WindowedCoarseSpace::subspace(const std::string& name) const {
    auto it = subspaces.find(name);
    require(it != subspaces.end(), "UnknownSubspace", name);
    return it->second;
}

WindowedCoarseSpace build_space(const SpaceConfig& config) {
    WindowedCoarseSpace s;
    s.label = config.label;

    if (config.metric) {
        const auto& d = *config.metric;
        uint32_t n = static_cast<uint32_t>(d.size());
        s.n_points = n;
        for (uint32_t i = 0; i < n; ++i) {
            require(d[i].size() == n, "AsymmetricDistance", "matrix not square");
            require(d[i][i] == 0.0, "AsymmetricDistance", "nonzero diagonal");
            for (uint32_t j = 0; j < n; ++j)
                require(d[i][j] == d[j][i], "AsymmetricDistance",
                        "d(" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        require(!config.thresholds.empty(), "NonNestedLadder", "no thresholds");
        for (size_t t = 1; t < config.thresholds.size(); ++t)
            require(config.thresholds[t - 1] < config.thresholds[t], "NonNestedLadder",
                    "thresholds not strictly increasing");
        s.ladder.source = EntourageLadder::Source::metric_thresholds;
        s.ladder.thresholds = config.thresholds;
        for (double r : config.thresholds) {
            std::vector<std::vector<uint32_t>> lists(n);
            for (uint32_t i = 0; i < n; ++i)
                for (uint32_t j = 0; j < n; ++j)
                    if (d[i][j] <= r) lists[i].push_back(j);
            s.ladder.rel.push_back(Relation::from_lists(n, std::move(lists)));
        }
    } else {
        require(config.scale_pairs.has_value(), "NonNestedLadder",
                "neither metric nor explicit pairs given");
        s.n_points = config.n_points;
        s.ladder.source = EntourageLadder::Source::explicit_pairs;
        Relation acc = Relation::identity(s.n_points);
        for (const auto& pairs : *config.scale_pairs) {
            acc = acc.unite(Relation::from_pairs(s.n_points, pairs));
            s.ladder.rel.push_back(acc);
        }
    }
    s.ladder.validate();

    s.frontier = config.frontier;
    std::sort(s.frontier.begin(), s.frontier.end());
    for (uint32_t f : s.frontier)
        require(f < s.n_points, "FrontierNotSubset", "frontier id " + std::to_string(f));

    for (const auto& [name, pts] : config.subspaces) {
        auto sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (uint32_t p : sorted)
            require(p < s.n_points, "FrontierNotSubset",
                    "subspace " + name + " id " + std::to_string(p));
        s.subspaces[name] = std::move(sorted);
    }
    return s;
}

std::vector<uint32_t> penumbra(const WindowedCoarseSpace& x, size_t n, uint32_t k,
                               const std::vector<uint32_t>& s) {
    require(x.valid_scale(n), "BadIndex", "ladder index " + std::to_string(n));
    return penumbra_of(x.ladder.at(n), k, s);
}

WindowedCoarseSpace product_space(const WindowedCoarseSpace& x,
                                  const WindowedCoarseSpace& y) {
    WindowedCoarseSpace p;
    p.label = x.label + "x" + y.label;
    const uint32_t nx = x.n_points, ny = y.n_points;
    p.n_points = nx * ny;

    size_t len = std::max(x.ladder.size(), y.ladder.size());
    p.ladder.source = EntourageLadder::Source::explicit_pairs;
    for (size_t n = 1; n <= len; ++n) {
        const Relation& e = x.ladder.at(std::min(n, x.ladder.size()));
        const Relation& f = y.ladder.at(std::min(n, y.ladder.size()));
        std::vector<std::vector<uint32_t>> lists(p.n_points);
        for (uint32_t a = 0; a < nx; ++a) {
            auto ea = e.nbrs(a);
            for (uint32_t b = 0; b < ny; ++b) {
                auto& out = lists[product_id(a, b, ny)];
                out.reserve(ea.size() * f.nbrs(b).size());
                for (uint32_t a2 : ea)
                    for (uint32_t b2 : f.nbrs(b)) out.push_back(product_id(a2, b2, ny));
                std::sort(out.begin(), out.end());
            }
        }
        p.ladder.rel.push_back(Relation::from_lists(p.n_points, std::move(lists)));
    }

    auto lift_x = [&](const std::vector<uint32_t>& a) {
        std::vector<uint32_t> out;
        out.reserve(a.size() * ny);
        for (uint32_t v : a)
            for (uint32_t b = 0; b < ny; ++b) out.push_back(product_id(v, b, ny));
        std::sort(out.begin(), out.end());
        return out;
    };
    auto lift_y = [&](const std::vector<uint32_t>& b) {
        std::vector<uint32_t> out;
        out.reserve(b.size() * nx);
        for (uint32_t a = 0; a < nx; ++a)
            for (uint32_t v : b) out.push_back(product_id(a, v, ny));
        std::sort(out.begin(), out.end());
        return out;
    };

    p.frontier = sorted_union(lift_x(x.frontier), lift_y(y.frontier));

    for (const auto& [na, a] : x.subspaces) p.subspaces[na + "xY"] = lift_x(a);
    for (const auto& [nb, b] : y.subspaces) p.subspaces["Xx" + nb] = lift_y(b);
    for (const auto& [na, a] : x.subspaces)
        for (const auto& [nb, b] : y.subspaces)
            p.subspaces[na + "xY+Xx" + nb] = sorted_union(lift_x(a), lift_y(b));
    return p;
}

} // namespace coarse
