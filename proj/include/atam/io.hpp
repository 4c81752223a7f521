#pragma once

#include <string>

#include <json.hpp>

#include "atam/core.hpp"

namespace atam {

using json = nlohmann::json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json glue_to_json(const Glue& g);
json tileset_to_json(const TileSet& ts);
json assembly_to_json(const TileSet& ts, const Assembly& a);
json tas_to_json(const Tas& sys);

TileSet tileset_from_json(const json& j);
Assembly assembly_from_json(const TileSet& ts, const json& j);
Tas tas_from_json(const json& j);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace atam
