#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "atam/core.hpp"

namespace oracle {

using namespace atam;

// Stability by enumerating every 2-partition of the tiles.
inline bool stable_by_partitions(const TileSet& ts, const Assembly& a, int tau) {
    auto cells = a.sorted();
    const int n = static_cast<int>(cells.size());
    if (n <= 1) return true;
    struct Edge {
        int u, v, w;
    };
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (Dir d : kDirs)
                if (cells[i].loc.step(d) == cells[j].loc) {
                    int ga = ts.glue_id(cells[i].tile, d);
                    int gb = ts.glue_id(cells[j].tile, opposite(d));
                    if (ga >= 0 && ga == gb) edges.push_back({i, j, ts.glue_strength(ga)});
                }
    // Tile 0 always on side A; every nonempty side B is tried.
    for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
        int cut = 0;
        for (const auto& e : edges) {
            bool bu = e.u > 0 && ((mask >> (e.u - 1)) & 1);
            bool bv = e.v > 0 && ((mask >> (e.v - 1)) & 1);
            if (bu != bv) cut += e.w;
        }
        if (cut < tau) return false;
    }
    return true;
}

// Every (empty cell adjacent to a, tile) pair tested directly.
inline std::vector<FrontierSite> frontier_by_scan(const Tas& sys, const Assembly& a) {
    std::vector<FrontierSite> out;
    std::set<Point> empties;
    for (const auto& [p, t] : a.cells())
        for (Dir d : kDirs)
            if (!a.contains(p.step(d))) empties.insert(p.step(d));
    for (Point q : empties)
        for (int t = 0; t < static_cast<int>(sys.tiles.size()); ++t) {
            int sum = 0;
            unsigned sides = 0;
            for (Dir d : kDirs) {
                int nb = a.at(q.step(d));
                if (nb < 0) continue;
                const Glue& mine = sys.tiles[t].glues[d];
                const Glue& theirs = sys.tiles[nb].glues[opposite(d)];
                if (!mine.is_null() && mine.label == theirs.label && theirs.strength > 0) {
                    sum += mine.strength;
                    sides |= 1u << d;
                }
            }
            if (sum >= sys.temperature) out.push_back({q, t, sum, sides});
        }
    return out;
}

// Random tile set over a small glue alphabet with consistent strengths.
inline TileSet random_tileset(std::mt19937_64& rng, int tiles, int labels) {
    std::vector<int> strength(labels);
    for (auto& s : strength) s = 1 + static_cast<int>(rng() % 2);
    std::vector<TileType> out;
    for (int t = 0; t < tiles; ++t) {
        TileType tt;
        tt.name = "t" + std::to_string(t);
        for (Dir d : kDirs) {
            int l = static_cast<int>(rng() % (labels + 1));
            if (l < labels) tt.glues[d] = {"g" + std::to_string(l), strength[l]};
        }
        out.push_back(tt);
    }
    return TileSet(std::move(out));
}

// Random grid-connected assembly of exactly n cells.
inline Assembly random_connected(std::mt19937_64& rng, const TileSet& ts, int n) {
    Assembly a;
    std::vector<Point> pts{{0, 0}};
    a.place({0, 0}, static_cast<int>(rng() % ts.size()));
    while (static_cast<int>(a.size()) < n) {
        Point p = pts[rng() % pts.size()].step(kDirs[rng() % 4]);
        if (a.contains(p)) continue;
        a.place(p, static_cast<int>(rng() % ts.size()));
        pts.push_back(p);
    }
    return a;
}

// Random connected shape whose adjacent pairs bond with probability p_bond;
// each cell gets its own tile type carrying exactly those glues.
inline std::pair<TileSet, Assembly> random_bonded(std::mt19937_64& rng, int n, double p_bond) {
    std::vector<Point> pts{{0, 0}};
    std::set<Point> used{{0, 0}};
    while (static_cast<int>(pts.size()) < n) {
        Point p = pts[rng() % pts.size()].step(kDirs[rng() % 4]);
        if (used.insert(p).second) pts.push_back(p);
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<TileType> tiles(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) tiles[i].name = "c" + std::to_string(i);
    int label = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (Dir d : {E, N}) {
            auto it = std::find(pts.begin(), pts.end(), pts[i].step(d));
            if (it == pts.end() || u(rng) > p_bond) continue;
            Glue g{"b" + std::to_string(label++), 1 + static_cast<int>(rng() % 2)};
            tiles[i].glues[d] = g;
            tiles[it - pts.begin()].glues[opposite(d)] = g;
        }
    TileSet ts(std::move(tiles));
    Assembly a;
    for (std::size_t i = 0; i < pts.size(); ++i) a.place(pts[i], static_cast<int>(i));
    return {std::move(ts), std::move(a)};
}

}  // namespace oracle
