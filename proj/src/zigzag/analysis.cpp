#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "atam/zigzag.hpp"

namespace atam {

bool CharacteristicSpec::is_marked(const std::string& name) const {
    if (marked.count(name)) return true;
    for (const auto& p : marked_prefixes)
        if (name.compare(0, p.size(), p) == 0) return true;
    return false;
}

ZigZagReport classify_zigzag(const Tas& sys, const Box& window, std::size_t max_steps) {
    ZigZagReport r;
    const TileSet& ts = sys.tiles;
    const int tau = sys.temperature;
    auto fail_zz = [&](Point p, std::string why) {
        if (r.is_zigzag) {
            r.is_zigzag = false;
            if (!r.violation) {
                r.violation = p;
                r.reason = std::move(why);
            }
        }
    };
    auto fail_compact = [&](Point p, std::string why) {
        if (r.is_compact) {
            r.is_compact = false;
            if (!r.violation) {
                r.violation = p;
                r.reason = std::move(why);
            }
        }
    };

    Grower g(sys, window, Policy::lexmin());
    std::set<int> checked;
    while (r.steps < max_steps) {
        if (g.frontier_cells() > 1) {
            Point p = g.order().empty() ? Point{} : g.order().back().loc;
            fail_zz(p, std::to_string(g.frontier_cells()) + " frontier sites after step " +
                           std::to_string(r.steps));
        }
        if (!g.step()) break;
        ++r.steps;
        if (g.conflict() && r.is_zigzag)
            fail_zz(g.conflict()->loc, "two tile types can attach at one location");
        const Placement& pl = g.order().back();
        const int above = g.at(pl.loc.step(N));
        if (above >= 0 && bond_strength(ts, pl.tile, N, above) > 0)
            fail_zz(pl.loc, "tile " + ts[pl.tile].name + " binds to a tile above it");
        if (checked.insert(pl.tile).second) {
            const auto& t = ts[pl.tile];
            const int ns = ts.glue_strength(ts.glue_id(pl.tile, N)) + ts.glue_strength(ts.glue_id(pl.tile, S));
            const int ew = ts.glue_strength(ts.glue_id(pl.tile, E)) + ts.glue_strength(ts.glue_id(pl.tile, W));
            if (ns >= 2 * tau) fail_compact(pl.loc, "tile " + t.name + " has north+south strength " + std::to_string(ns));
            if (ew >= 2 * tau) fail_compact(pl.loc, "tile " + t.name + " has east+west strength " + std::to_string(ew));
        }
    }
    return r;
}

namespace {

// Sparse single-path grower that forgets rows more than one below the top.
struct SlidingGrowth {
    const Tas& sys;
    std::unordered_map<Point, int, PointHash> live;
    std::map<int, std::vector<Point>> rows;
    std::set<Point> sites;
    std::vector<int> acc;
    std::vector<int> touched;
    int top = INT32_MIN;
    std::size_t peak = 0;
    std::map<int, long> width;

    explicit SlidingGrowth(const Tas& s) : sys(s), acc(s.tiles.size(), 0) {
        for (const auto& [p, t] : sys.seed.cells()) put(p, t);
        for (const auto& [p, t] : sys.seed.cells())
            for (Dir d : kDirs) sites.insert(p.step(d));
    }

    void put(Point p, int t) {
        live[p] = t;
        rows[p.y].push_back(p);
        ++width[p.y];
        if (p.y > top) {
            top = p.y;
            while (!rows.empty() && rows.begin()->first <= top - 2) {
                for (Point q : rows.begin()->second) live.erase(q);
                rows.erase(rows.begin());
            }
        }
        peak = std::max(peak, live.size());
    }

    // Lexicographically smallest attachable tile at p, or -1.
    int best_at(Point p) {
        if (live.count(p)) return -1;
        const TileSet& ts = sys.tiles;
        touched.clear();
        for (Dir d : kDirs) {
            auto it = live.find(p.step(d));
            if (it == live.end()) continue;
            const int gid = ts.glue_id(it->second, opposite(d));
            if (gid < 0) continue;
            for (int t : ts.tiles_with(d, gid)) {
                if (acc[t] == 0) touched.push_back(t);
                acc[t] += ts.glue_strength(gid);
            }
        }
        int best = -1;
        for (int t : touched) {
            if (acc[t] >= sys.temperature && (best < 0 || ts[t].name < ts[best].name)) best = t;
            acc[t] = 0;
        }
        return best;
    }

    // Returns the placed location, or nothing when terminal.
    std::optional<Point> step() {
        for (auto it = sites.begin(); it != sites.end();) {
            const Point p = *it;
            if (p.y < top - 1) {
                it = sites.erase(it);
                continue;
            }
            const int t = best_at(p);
            if (t < 0) {
                it = sites.erase(it);
                continue;
            }
            sites.erase(it);
            put(p, t);
            for (Dir d : kDirs) sites.insert(p.step(d));
            return p;
        }
        return std::nullopt;
    }
};

}  // namespace

RReport characteristic_r(const Tas& sys, const CharacteristicSpec& spec, long n, std::size_t max_steps) {
    SlidingGrowth gr(sys);
    RReport r;
    bool done = false;
    while (r.steps < max_steps) {
        auto p = gr.step();
        if (!p) {
            done = true;
            break;
        }
        ++r.steps;
        if (p->y > n) {
            done = true;
            break;
        }
    }
    if (!done) throw RowUnreached("step budget exhausted before row " + std::to_string(n));
    if (gr.top < n) throw RowUnreached("assembly terminates at row " + std::to_string(gr.top));
    auto it = gr.live.find({0, static_cast<int>(n)});
    r.bit = (it != gr.live.end() && spec.is_marked(sys.tiles[it->second].name)) ? 1 : 0;
    r.peak_live = gr.peak;
    for (const auto& [y, w] : gr.width)
        if (y <= n) r.f = std::max(r.f, w);
    return r;
}

long row_width_f(const Tas& sys, long n, std::size_t max_steps) {
    return characteristic_r(sys, CharacteristicSpec{}, n, max_steps).f;
}

}  // namespace atam
