#include "atam/core.hpp"

#include <algorithm>

namespace atam {

char dir_char(Dir d) { return "NESW"[d]; }

Dir dir_from_char(char c) {
    switch (c) {
        case 'N': return N;
        case 'E': return E;
        case 'S': return S;
        case 'W': return W;
    }
    throw std::invalid_argument(std::string("bad direction '") + c + "'");
}

TileSet::TileSet(std::vector<TileType> tiles) : tiles_(std::move(tiles)) {
    gid_.resize(tiles_.size());
    for (std::size_t t = 0; t < tiles_.size(); ++t) {
        const auto& tt = tiles_[t];
        if (!by_name_.emplace(tt.name, static_cast<int>(t)).second)
            throw std::invalid_argument("duplicate tile name: " + tt.name);
        for (Dir d : kDirs) {
            const Glue& g = tt.glues[d];
            if (g.strength < 0)
                throw std::invalid_argument("negative glue strength on " + tt.name);
            if (g.is_null()) {
                gid_[t][d] = -1;
                continue;
            }
            auto [it, fresh] = glue_index_.emplace(g.label, static_cast<int>(labels_.size()));
            if (fresh) {
                labels_.push_back(g.label);
                strength_.push_back(g.strength);
            } else if (strength_[it->second] != g.strength) {
                throw std::invalid_argument("glue '" + g.label + "' has inconsistent strengths");
            }
            gid_[t][d] = it->second;
        }
    }
    for (Dir d : kDirs) by_side_[d].assign(labels_.size(), {});
    for (std::size_t t = 0; t < tiles_.size(); ++t)
        for (Dir d : kDirs)
            if (gid_[t][d] >= 0) by_side_[d][gid_[t][d]].push_back(static_cast<int>(t));
}

std::optional<int> TileSet::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

int TileSet::index(const std::string& name) const {
    auto i = find(name);
    if (!i) throw std::out_of_range("unknown tile: " + name);
    return *i;
}

std::optional<int> TileSet::glue_lookup(const std::string& label) const {
    auto it = glue_index_.find(label);
    if (it == glue_index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<int>& TileSet::tiles_with(Dir d, int gid) const {
    static const std::vector<int> none;
    if (gid < 0 || gid >= static_cast<int>(by_side_[d].size())) return none;
    return by_side_[d][gid];
}

void Box::include(Point p) {
    if (empty()) {
        *this = {p.x, p.y, p.x, p.y};
        return;
    }
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
}

std::vector<Placement> Assembly::sorted() const {
    std::vector<Placement> out;
    out.reserve(cells_.size());
    for (const auto& [p, t] : cells_) out.push_back({p, t});
    std::sort(out.begin(), out.end(),
              [](const Placement& a, const Placement& b) { return a.loc < b.loc; });
    return out;
}

Box Assembly::bounds() const {
    Box b;
    for (const auto& [p, t] : cells_) b.include(p);
    return b;
}

}  // namespace atam
