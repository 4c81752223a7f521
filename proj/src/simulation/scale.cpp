#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "atam/simulation.hpp"

namespace atam {

namespace {

// T glue on an edge cell, tagged with the cell's position along the edge so a
// macrotile cannot bind shifted against its neighbour, and with the direction
// the information flows so outputs only ever meet inputs.
Glue port(const Glue& g, Point c, Dir d, bool input) {
    const Dir flow = input ? opposite(d) : d;
    return {g.label + "@" + std::to_string(d == N || d == S ? c.x : c.y) + ">" + dir_char(flow), g.strength};
}

bool on_edge(Point c, Dir d, int m) {
    const Point q = c.step(d);
    return q.x < 0 || q.y < 0 || q.x >= m || q.y >= m;
}

std::string sides_tag(unsigned mask) {
    std::string s;
    for (Dir d : kDirs)
        if (mask & (1u << d)) s += dir_char(d);
    return s;
}

bool has(unsigned mask, Dir d) { return (mask & (1u << d)) != 0; }

// Minimal sets of sides whose glues reach the temperature, kept when a
// single corner cell can see all of them.
std::vector<unsigned> input_sets(const TileType& t, int tau) {
    auto strength = [&](unsigned mask) {
        int s = 0;
        for (Dir d : kDirs)
            if (has(mask, d)) s += t.glues[d].is_null() ? 0 : t.glues[d].strength;
        return s;
    };
    std::vector<unsigned> out;
    for (unsigned mask = 1; mask < 16; ++mask) {
        if (strength(mask) < tau) continue;
        bool minimal = true;
        for (unsigned sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) minimal &= strength(sub) < tau;
        if (!minimal) continue;
        const int bits = __builtin_popcount(mask);
        const bool opposite = mask == ((1u << N) | (1u << S)) || mask == ((1u << E) | (1u << W));
        if (bits == 1 || (bits == 2 && !opposite)) out.push_back(mask);
    }
    return out;
}

// Corners touching every side in the mask.
std::vector<Point> corners_for(unsigned mask, int m) {
    std::vector<Point> out;
    for (Point c : {Point{0, 0}, Point{m - 1, 0}, Point{0, m - 1}, Point{m - 1, m - 1}}) {
        bool ok = true;
        for (Dir d : kDirs)
            if (has(mask, d)) ok &= on_edge(c, d, m);
        if (ok) out.push_back(c);
    }
    return out;
}

// Row-wise and column-wise serpentines from a corner.
std::vector<std::vector<Point>> paths_from(Point c, int m) {
    std::vector<std::vector<Point>> out(2);
    const int dy = c.y == 0 ? 1 : -1, dx = c.x == 0 ? 1 : -1;
    for (int r = 0; r < m; ++r)
        for (int k = 0; k < m; ++k) {
            const int along = r % 2 == 0 ? k : m - 1 - k;
            out[0].push_back({c.x + dx * along, c.y + dy * r});
            out[1].push_back({c.x + dx * r, c.y + dy * along});
        }
    return out;
}

struct Variant {
    int tile = 0;
    unsigned inputs = 0;  // 0 for seed macrotiles, which start complete
    std::vector<Point> starts;
    int pick = 0;  // index into starts
    std::vector<Point> path;
    Point start() const { return starts[pick]; }
};

// Cell of the sender block facing a receiver's cell c across the receiver's side e.
Point facing(Point c, Dir e, int m) {
    switch (e) {
        case W: return {m - 1, c.y};
        case E: return {0, c.y};
        case S: return {c.x, m - 1};
        default: return {c.x, 0};
    }
}

// Chooses start corners and fill paths so that a macrotile shows its glues
// as late as possible; a neighbour then rarely starts before it is complete.
class Planner {
public:
    Planner(const Tas& t, int m) : t_(t), m_(m), tau_(std::max(1, t.temperature)) {
        std::vector<bool> in_seed(t.tiles.size(), false);
        for (const auto& [q, k] : t.seed.cells()) in_seed[k] = true;
        for (int k = 0; k < static_cast<int>(t.tiles.size()); ++k) {
            // Seed macrotiles show every glue, so they exist only where needed.
            if (in_seed[k]) vars_.push_back({k, 0, {{0, 0}}, 0, {}});
            for (unsigned mask : input_sets(t.tiles[k], tau_)) vars_.push_back({k, mask, corners_for(mask, m), 0, {}});
        }
        for (std::size_t r = 0; r < vars_.size(); ++r)
            for (Dir e : kDirs)
                if (has(vars_[r].inputs, e)) readers_[e][key(t.tiles[vars_[r].tile].glues[e])].push_back(r);
        for (int pass = 0; pass < 4; ++pass) {
            bool changed = false;
            for (auto& v : vars_) {
                if (v.starts.size() < 2) continue;
                const int keep = v.pick;
                long best = cost();
                int best_pick = keep;
                for (int p = 0; p < static_cast<int>(v.starts.size()); ++p) {
                    if (p == keep) continue;
                    v.pick = p;
                    const long c = cost();
                    if (c < best) best = c, best_pick = p;
                }
                v.pick = best_pick;
                changed |= best_pick != keep;
            }
            if (!changed) break;
        }
        for (auto& v : vars_) v.path = best_path(v).first;
    }

    std::vector<TileType> tiles() const {
        std::vector<TileType> out;
        for (const auto& v : vars_) {
            const TileType& t = t_.tiles[v.tile];
            const auto outs = outputs(v);
            const std::string tag = macro_mark(t.name) + sides_tag(v.inputs) + "~";
            for (std::size_t k = 0; k < v.path.size(); ++k) {
                const Point c = v.path[k];
                TileType tile{cell_name(t.name, v.inputs, c, m_), {}};
                for (Dir d : kDirs) {
                    if (on_edge(c, d, m_)) {
                        if (has(v.inputs, d) && k == 0)
                            tile.glues[d] = port(t.glues[d], c, d, true);
                        else if (!has(v.inputs, d) && outs.count({d, c}))
                            tile.glues[d] = port(t.glues[d], c, d, false);
                    } else if (k + 1 < v.path.size() && c.step(d) == v.path[k + 1]) {
                        tile.glues[d] = {tag + std::to_string(k), tau_};
                    } else if (k > 0 && c.step(d) == v.path[k - 1]) {
                        tile.glues[d] = {tag + std::to_string(k - 1), tau_};
                    }
                }
                out.push_back(std::move(tile));
            }
        }
        return out;
    }

    static std::string cell_name(const std::string& t, unsigned mask, Point c, int m) {
        if (m == 1) return macro_mark(t) + ":0,0";
        return macro_mark(t) + sides_tag(mask) + ":" + std::to_string(c.x) + "," + std::to_string(c.y);
    }

private:
    struct Out {
        Dir d;
        Point c;
        bool operator<(const Out& o) const { return d != o.d ? d < o.d : c < o.c; }
    };

    // Cells where some receiver's first tile reads this tile's glues.
    std::set<Out> outputs(const Variant& v) const {
        std::set<Out> out;
        const TileType& t = t_.tiles[v.tile];
        for (Dir d : kDirs) {
            if (has(v.inputs, d) || t.glues[d].is_null()) continue;
            const Dir e = opposite(d);
            auto it = readers_[e].find(key(t.glues[d]));
            if (it == readers_[e].end()) continue;
            for (std::size_t r : it->second) out.insert({d, facing(vars_[r].start(), e, m_)});
        }
        return out;
    }

    // Path from the start corner placing output cells as late as possible,
    // with the number of tiles still to come after the first output.
    std::pair<std::vector<Point>, long> best_path(const Variant& v) const {
        const auto outs = outputs(v);
        std::pair<std::vector<Point>, long> best{{}, -1};
        for (auto& p : paths_from(v.start(), m_)) {
            long early = 0;
            for (std::size_t k = 0; k < p.size(); ++k) {
                bool o = false;
                for (const auto& x : outs) o |= x.c == p[k];
                if (o) {
                    early = static_cast<long>(p.size() - 1 - k);
                    break;
                }
            }
            if (best.second < 0 || early < best.second) best = {p, early};
        }
        return best;
    }

    long cost() const {
        long c = 0;
        for (const auto& v : vars_)
            if (v.inputs) c += best_path(v).second;
        return c;
    }

    static std::string key(const Glue& g) { return g.label + "#" + std::to_string(g.strength); }

    const Tas& t_;
    int m_;
    int tau_;
    std::vector<Variant> vars_;
    std::array<std::map<std::string, std::vector<std::size_t>>, 4> readers_;  // by reading side
};

}  // namespace

Box scale_window(const Box& b, int m) {
    return {b.x0 * m, b.y0 * m, b.x1 * m + m - 1, b.y1 * m + m - 1};
}

Scaled scale_system(const Tas& t_sys, int m) {
    if (m < 1) throw std::invalid_argument("scale_system: m must be positive");
    std::vector<TileType> tiles;
    if (m == 1) {
        for (const auto& tt : t_sys.tiles.tiles()) tiles.push_back({Planner::cell_name(tt.name, 0, {}, 1), tt.glues});
    } else {
        tiles = Planner(t_sys, m).tiles();
    }
    Scaled out;
    out.sys.tiles = TileSet(std::move(tiles));
    out.sys.temperature = t_sys.temperature;
    out.sys.seed = expand_assembly(out.sys.tiles, t_sys.tiles, t_sys.seed, m);
    out.repr.m = m;
    out.repr.rule = BlockRepr::Rule::Prefix;
    return out;
}

Assembly expand_assembly(const TileSet& s, const TileSet& t, const Assembly& a, int m) {
    Assembly out;
    for (const auto& pl : a.sorted()) {
        // The seed variant when there is one, otherwise the first input variant.
        const std::string& name = t[pl.tile].name;
        unsigned mask = 0;
        while (mask < 16 && !s.find(Planner::cell_name(name, mask, {0, 0}, m))) ++mask;
        if (mask == 16) throw std::invalid_argument("expand_assembly: no macrotile for " + name);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i)
                out.place({pl.loc.x * m + i, pl.loc.y * m + j}, s.index(Planner::cell_name(name, mask, {i, j}, m)));
    }
    return out;
}

}  // namespace atam
