#pragma once

#include <memory>
#include <optional>
#include <string>

#include "coarse/maps.hpp"
#include "coarse/spaces_library.hpp"

namespace coarse {

// A parsed instance: either a direct space description (points/metric|pairs/
// thresholds/frontier/subspaces/homotopies) or a named builder family.
// Heap-backed so homotopy tables can hold stable space pointers.
struct Instance {
    std::string label;
    std::shared_ptr<ConeModel> cone;               // set by cone builders
    std::shared_ptr<WindowedCoarseSpace> space_ptr; // aliases cone->space if cone
    std::map<std::string, ControlledHomotopy> homotopies;
    std::string digest; // FNV-1a of the source text

    const WindowedCoarseSpace& space() const { return *space_ptr; }
};

Instance load_instance_file(const std::string& path);
Instance parse_instance_json(const std::string& text);

std::string fnv1a_hex(const std::string& text);

} // namespace coarse
