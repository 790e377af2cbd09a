#include "spid/json_io.hpp"

namespace spid {

nlohmann::json grid_to_json(const GridGeom& grid) {
    nlohmann::json j;
    if (grid.kind == GridGeom::Kind::Structured) {
        j["kind"] = "structured";
        j["dims"] = grid.dims;
        j["periodic"] = grid.periodic;
    } else {
        j["kind"] = "unstructured";
        j["points"] = grid.point_count();
    }
    return j;
}

GridGeom grid_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "structured") {
        auto dims = j.at("dims").get<std::vector<std::size_t>>();
        std::vector<bool> periodic;
        if (j.contains("periodic")) periodic = j.at("periodic").get<std::vector<bool>>();
        return GridGeom::structured(std::move(dims), std::move(periodic));
    }
    if (kind == "unstructured")
        return GridGeom::unstructured_counted(j.at("points").get<std::size_t>());
    raise("BadGridGeom", "unknown grid kind in metadata: " + kind);
}

} // namespace spid
