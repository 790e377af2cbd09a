#pragma once

#include "json.hpp"

#include "spid/grid.hpp"

namespace spid {

nlohmann::json grid_to_json(const GridGeom& grid);
GridGeom grid_from_json(const nlohmann::json& j);

} // namespace spid
