#include "coarse/instance.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coarse/error.hpp"

namespace coarse {

using nlohmann::json;

std::string fnv1a_hex(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

static std::vector<uint32_t> to_u32s(const json& j) {
    std::vector<uint32_t> out;
    for (const auto& v : j) out.push_back(v.get<uint32_t>());
    return out;
}

static ControlledHomotopy parse_homotopy(const json& j, const WindowedCoarseSpace& x,
                                         const std::vector<uint32_t>& target) {
    ControlledHomotopy h;
    h.space = &x;
    h.target = target;
    std::sort(h.target.begin(), h.target.end());
    for (const auto& t : j.at("grid")) {
        require(t.is_array() && t.size() == 2, "ParseError", "grid entries are [num,den]");
        h.grid.t.push_back(Rat64(t[0].get<int64_t>(), t[1].get<int64_t>()));
    }
    for (const auto& row : j.at("tables")) h.tables.push_back(to_u32s(row));
    if (j.contains("profile")) {
        const auto& p = j.at("profile");
        if (p.contains("c")) {
            Rat64 c(p.at("c")[0].get<int64_t>(), p.at("c")[1].get<int64_t>());
            // u(x) = c / (1 + hop distance from the target)
            auto layers = hop_layers(x.ladder.at(1), h.target);
            h.profile.u.resize(x.n_points);
            for (uint32_t q = 0; q < x.n_points; ++q) {
                uint32_t l = layers[q] == UINT32_MAX ? x.n_points : layers[q];
                h.profile.u[q] = Rat64(c.num, c.den * (1 + static_cast<int64_t>(l)));
            }
        } else {
            for (const auto& u : p.at("u"))
                h.profile.u.push_back(Rat64(u[0].get<int64_t>(), u[1].get<int64_t>()));
        }
    }
    return h;
}

Instance parse_instance_json(const std::string& text) {
    json j = json::parse(text);
    Instance inst;
    inst.digest = fnv1a_hex(text);
    inst.label = j.value("label", "instance");

    if (j.contains("builder")) {
        const auto& b = j.at("builder");
        std::string type = b.at("type").get<std::string>();
        if (type == "lattice") {
            std::vector<double> thr;
            for (const auto& t : b.value("thresholds", json::array()))
                thr.push_back(t.get<double>());
            inst.space_ptr = std::make_shared<WindowedCoarseSpace>(
                build_lattice_window(b.value("dim", 1u), b.at("radius").get<int>(), thr));
        } else if (type == "cone-cycle" || type == "cone-torus" || type == "cone-point") {
            std::vector<std::vector<double>> base;
            if (type == "cone-cycle")
                base = cycle_metric(b.at("n").get<uint32_t>());
            else if (type == "cone-torus")
                base = torus_grid_metric(b.at("w").get<uint32_t>(),
                                         b.at("h").get<uint32_t>());
            else
                base = point_metric();
            std::vector<uint32_t> l = b.contains("L") ? to_u32s(b.at("L"))
                                                      : std::vector<uint32_t>{0};
            std::vector<uint32_t> m = b.contains("M") ? to_u32s(b.at("M")) : l;
            std::vector<double> thr;
            for (const auto& t : b.value("thresholds", json::array()))
                thr.push_back(t.get<double>());
            inst.cone = std::make_shared<ConeModel>(
                build_cone(base, l, m, b.at("levels").get<uint32_t>(), thr));
            inst.space_ptr =
                std::shared_ptr<WindowedCoarseSpace>(inst.cone, &inst.cone->space);
        } else {
            fail("ParseError", "unknown builder type " + type);
        }
    } else {
        SpaceConfig cfg;
        cfg.label = inst.label;
        if (j.contains("metric")) {
            std::vector<std::vector<double>> m;
            for (const auto& row : j.at("metric")) {
                m.emplace_back();
                for (const auto& v : row) m.back().push_back(v.get<double>());
            }
            cfg.metric = std::move(m);
        } else if (j.contains("pairs")) {
            std::vector<std::vector<std::pair<uint32_t, uint32_t>>> scales;
            for (const auto& scale : j.at("pairs")) {
                scales.emplace_back();
                for (const auto& p : scale)
                    scales.back().emplace_back(p[0].get<uint32_t>(),
                                               p[1].get<uint32_t>());
            }
            cfg.scale_pairs = std::move(scales);
            cfg.n_points = j.at("points").get<uint32_t>();
        } else {
            fail("ParseError", "instance needs metric or pairs");
        }
        for (const auto& t : j.value("thresholds", json::array()))
            cfg.thresholds.push_back(t.get<double>());
        if (j.contains("frontier")) cfg.frontier = to_u32s(j.at("frontier"));
        if (j.contains("subspaces"))
            for (auto it = j.at("subspaces").begin(); it != j.at("subspaces").end(); ++it)
                cfg.subspaces[it.key()] = to_u32s(it.value());
        inst.space_ptr = std::make_shared<WindowedCoarseSpace>(build_space(cfg));
    }

    if (j.contains("homotopies"))
        for (auto it = j.at("homotopies").begin(); it != j.at("homotopies").end(); ++it) {
            std::string target_name = it.value().at("target").get<std::string>();
            inst.homotopies[it.key()] = parse_homotopy(it.value(), *inst.space_ptr,
                                                       inst.space_ptr->subspace(target_name));
        }
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "ParseError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance_json(ss.str());
}

} // namespace coarse
