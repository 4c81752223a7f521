#include "atam/io.hpp"

#include <fstream>
#include <sstream>

namespace atam {

json glue_to_json(const Glue& g) { return {{"label", g.label}, {"strength", g.strength}}; }

json tileset_to_json(const TileSet& ts) {
    json arr = json::array();
    for (const auto& t : ts.tiles()) {
        json glues = json::object();
        for (Dir d : kDirs)
            if (!t.glues[d].is_null()) glues[std::string(1, dir_char(d))] = glue_to_json(t.glues[d]);
        arr.push_back({{"name", t.name}, {"glues", glues}});
    }
    return arr;
}

json assembly_to_json(const TileSet& ts, const Assembly& a) {
    json arr = json::array();
    for (const auto& pl : a.sorted())
        arr.push_back({{"x", pl.loc.x}, {"y", pl.loc.y}, {"tile", ts[pl.tile].name}});
    return arr;
}

json tas_to_json(const Tas& sys) {
    return {{"temperature", sys.temperature},
            {"tiles", tileset_to_json(sys.tiles)},
            {"seed", assembly_to_json(sys.tiles, sys.seed)}};
}

TileSet tileset_from_json(const json& j) {
    if (!j.is_array()) throw InputError("\"tiles\" must be an array");
    std::vector<TileType> tiles;
    for (const auto& jt : j) {
        TileType t;
        t.name = jt.at("name").get<std::string>();
        if (jt.contains("glues")) {
            for (auto& [k, v] : jt.at("glues").items()) {
                if (k.size() != 1) throw InputError("bad glue direction: " + k);
                Dir d = dir_from_char(k[0]);
                if (v.is_null()) continue;
                t.glues[d].label = v.value("label", std::string());
                t.glues[d].strength = v.value("strength", 0);
            }
        }
        tiles.push_back(std::move(t));
    }
    return TileSet(std::move(tiles));
}

Assembly assembly_from_json(const TileSet& ts, const json& j) {
    if (!j.is_array()) throw InputError("assembly must be an array of placements");
    Assembly a;
    for (const auto& p : j) {
        Point loc{p.at("x").get<int>(), p.at("y").get<int>()};
        auto name = p.at("tile").get<std::string>();
        auto t = ts.find(name);
        if (!t) throw InputError("placement refers to unknown tile " + name);
        if (a.contains(loc)) throw InputError("two placements at one location");
        a.place(loc, *t);
    }
    return a;
}

Tas tas_from_json(const json& j) {
    try {
        Tas sys;
        sys.temperature = j.at("temperature").get<int>();
        if (sys.temperature <= 0) throw InputError("temperature must be positive");
        sys.tiles = tileset_from_json(j.at("tiles"));
        sys.seed = assembly_from_json(sys.tiles, j.at("seed"));
        return sys;
    } catch (const json::exception& e) {
        throw InputError(e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace atam
