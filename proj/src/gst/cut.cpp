#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "sim.hpp"

namespace atam {

namespace detail {

std::string show(Point p) { return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")"; }

bool Sim::expose(const GlueEvent& e) {
    const auto gid = sys_.tiles.glue_lookup(e.glue.label);
    if (!gid) return false;
    return ph_.emplace(std::pair{e.loc, static_cast<int>(e.dir)}, *gid).second;
}

bool Sim::exposed(const GlueEvent& e) const { return ph_.count({e.loc, static_cast<int>(e.dir)}) != 0; }

int Sim::facing(Point p, Dir d) const {
    const Point q = p.step(d);
    const int t = at(q);
    if (t >= 0) return sys_.tiles.glue_id(t, opposite(d));
    auto it = ph_.find({q, static_cast<int>(opposite(d))});
    return it == ph_.end() ? -1 : it->second;
}

int Sim::attachable(Point p) const {
    const TileSet& ts = sys_.tiles;
    std::map<int, int> acc;
    for (Dir d : kDirs) {
        const int g = facing(p, d);
        if (g < 0) continue;
        for (int t : ts.tiles_with(d, g)) acc[t] += ts.glue_strength(g);
    }
    int found = -1;
    for (const auto& [t, s] : acc) {
        if (s < sys_.temperature) continue;
        if (found >= 0)
            throw NotDirected("tiles " + ts[found].name + " and " + ts[t].name + " both attach at " + show(p));
        found = t;
    }
    return found;
}

std::vector<GlueEvent> Sim::events(Point p, int t) const {
    std::vector<GlueEvent> out;
    for (Dir d : kDirs) {
        const Glue& g = sys_.tiles[t].glues[d];
        if (!g.is_null()) out.push_back({g, d, p});
    }
    return out;
}

}  // namespace detail

using detail::floor_div;
using detail::show;

bool GlueEvent::operator<(const GlueEvent& o) const {
    return std::tie(loc, dir, glue.label, glue.strength) < std::tie(o.loc, o.dir, o.glue.label, o.glue.strength);
}

std::string to_string(const GlueEvent& e) {
    return e.glue.label + "/" + std::to_string(e.glue.strength) + " " + dir_char(e.dir) + " of " + show(e.loc);
}

double k_gst_bound(std::size_t glues, int c) {
    const double lg = 4.0 * c * std::log(static_cast<double>(glues) + 1) + std::lgamma(4.0 * c + 1);
    if (lg >= std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::max();
    double v = std::pow(static_cast<double>(glues) + 1, 4 * c);
    for (int j = 2; j <= 4 * c; ++j) v *= j;
    return v;
}

std::size_t glue_count(const TileSet& ts) { return ts.glue_count(); }

int strip_pitch(int c, int h) { return std::max(c * c + 2 * c + 2, h); }

Assembly grow_below(const Tas& sys, int y_max, const GstOptions& opts) {
    detail::Sim sim(sys, sys.seed, opts.max_placements);
    auto in = [&](Point p) { return p.y <= y_max; };
    auto work = sim.frontier(in);
    sim.saturate(work, in, [](Point, int) {});
    Assembly out = sys.seed;
    for (const auto& [p, t] : sim.added().cells()) out.place(p, t);
    return out;
}

CutSpec find_cut(const Tas& sys, const Assembly& strip, int k, int c, int band) {
    const int floor_y = sys.seed.empty() ? std::numeric_limits<int>::min() : sys.seed.bounds().y0;
    const int lo = band * k, hi = (band + 1) * k - 1;
    std::map<int, std::vector<Point>> rows;  // block row -> tiles
    for (const auto& [p, t] : strip.cells())
        if (p.y >= lo && p.y <= hi) rows[floor_div(p.y, c)].push_back(p);
    for (auto& [r, pts] : rows) {
        if (r * c < lo || (r + 1) * c - 1 > hi) continue;
        int bl = std::numeric_limits<int>::max(), br = std::numeric_limits<int>::min();
        for (Point p : pts) bl = std::min(bl, floor_div(p.x, c)), br = std::max(br, floor_div(p.x, c));
        if (bl == br) {
            Point best = pts.front();
            for (Point p : pts)
                if (p.y > best.y || (p.y == best.y && p.x < best.x)) best = p;
            return {best.y, best.x, best.y, best.x};
        }
        std::sort(pts.begin(), pts.end());
        std::map<Point, Point> origin;
        std::deque<Point> queue;
        for (Point p : pts)
            if (floor_div(p.x, c) == bl) origin.emplace(p, p), queue.push_back(p);
        while (!queue.empty()) {
            const Point p = queue.front();
            queue.pop_front();
            if (floor_div(p.x, c) == br && floor_div(p.y, c) == r) {
                const Point tl = origin.at(p);
                return {tl.y, tl.x, p.y, p.x};
            }
            const int t = strip.at(p);
            for (Dir d : kDirs) {
                const Point q = p.step(d);
                if (q.y < floor_y || origin.count(q)) continue;
                const int u = strip.at(q);
                if (u < 0 || bond_strength(sys.tiles, t, d, u) <= 0) continue;
                origin.emplace(q, origin.at(p));
                queue.push_back(q);
            }
        }
    }
    throw NoConnectingPath("no block row in [" + std::to_string(lo) + "," + std::to_string(hi) +
                           "] joins its leftmost and rightmost blocks");
}

}  // namespace atam
