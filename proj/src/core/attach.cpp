#include "atam/core.hpp"

#include <algorithm>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/stoer_wagner_min_cut.hpp>
#include <boost/property_map/property_map.hpp>

namespace atam {

int bond_strength(const TileSet& ts, int a, Dir side_of_a, int b) {
    int ga = ts.glue_id(a, side_of_a);
    if (ga < 0 || ga != ts.glue_id(b, opposite(side_of_a))) return 0;
    return ts.glue_strength(ga);
}

int binding_strength(const TileSet& ts, const Assembly& asm_, Point loc, int tile,
                     unsigned* sides) {
    int total = 0;
    unsigned mask = 0;
    for (Dir d : kDirs) {
        int nb = asm_.at(loc.step(d));
        if (nb < 0) continue;
        int s = bond_strength(ts, tile, d, nb);
        if (s > 0) {
            total += s;
            mask |= 1u << d;
        }
    }
    if (sides) *sides = mask;
    return total;
}

std::vector<FrontierSite> frontier(const Tas& sys, const Assembly& asm_,
                                   const std::optional<Box>& window) {
    const TileSet& ts = sys.tiles;
    std::set<Point> empties;
    for (const auto& [p, t] : asm_.cells())
        for (Dir d : kDirs) {
            Point q = p.step(d);
            if (!asm_.contains(q) && (!window || window->contains(q))) empties.insert(q);
        }
    std::vector<FrontierSite> out;
    std::vector<int> cand;
    for (Point q : empties) {
        cand.clear();
        for (Dir d : kDirs) {
            int nb = asm_.at(q.step(d));
            if (nb < 0) continue;
            for (int t : ts.tiles_with(d, ts.glue_id(nb, opposite(d)))) cand.push_back(t);
        }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::vector<FrontierSite> here;
        for (int t : cand) {
            unsigned sides = 0;
            int s = binding_strength(ts, asm_, q, t, &sides);
            if (s >= sys.temperature) here.push_back({q, t, s, sides});
        }
        std::sort(here.begin(), here.end(), [&](const FrontierSite& a, const FrontierSite& b) {
            return ts[a.tile].name < ts[b.tile].name;
        });
        out.insert(out.end(), here.begin(), here.end());
    }
    return out;
}

Assembly attach(const Tas& sys, const Assembly& asm_, const FrontierSite& site) {
    if (asm_.contains(site.loc))
        throw OccupiedLocation("location (" + std::to_string(site.loc.x) + "," +
                               std::to_string(site.loc.y) + ") is occupied");
    int s = binding_strength(sys.tiles, asm_, site.loc, site.tile);
    if (s < sys.temperature)
        throw InsufficientStrength("tile " + sys.tiles[site.tile].name + " binds with strength " +
                                   std::to_string(s) + " below temperature " +
                                   std::to_string(sys.temperature));
    Assembly out = asm_;
    out.place(site.loc, site.tile);
    return out;
}

bool is_stable(const TileSet& ts, const Assembly& asm_, int temperature, std::size_t size_limit) {
    const std::size_t n = asm_.size();
    if (n > size_limit)
        throw SizeLimitExceeded("assembly of " + std::to_string(n) +
                                " tiles exceeds the stability size limit");
    if (n <= 1) return true;

    std::unordered_map<Point, int, PointHash> id;
    std::vector<Point> pts;
    for (const auto& [p, t] : asm_.cells()) {
        id.emplace(p, static_cast<int>(pts.size()));
        pts.push_back(p);
    }

    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                        boost::no_property,
                                        boost::property<boost::edge_weight_t, int>>;
    Graph g(n);
    std::vector<int> comp(n);
    for (std::size_t i = 0; i < n; ++i) comp[i] = static_cast<int>(i);
    auto root = [&](int v) {
        while (comp[v] != v) v = comp[v] = comp[comp[v]];
        return v;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (Dir d : {E, N}) {
            auto it = id.find(pts[i].step(d));
            if (it == id.end()) continue;
            int s = bond_strength(ts, asm_.at(pts[i]), d, asm_.at(it->first));
            if (s <= 0) continue;
            boost::add_edge(i, it->second, s, g);
            comp[root(static_cast<int>(i))] = root(it->second);
        }
    }
    for (std::size_t i = 1; i < n; ++i)
        if (root(static_cast<int>(i)) != root(0)) return false;

    int cut = boost::stoer_wagner_min_cut(g, boost::get(boost::edge_weight, g));
    return cut >= temperature;
}

}  // namespace atam
