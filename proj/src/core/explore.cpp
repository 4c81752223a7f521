#include "atam/core.hpp"

#include <algorithm>

namespace atam {

namespace {

using Key = std::vector<std::uint64_t>;

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : k) {
            h ^= v;
            h *= 1099511628211ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Packer {
    Box win;
    long long width;

    std::uint64_t pack(Point p, int tile) const {
        auto c = static_cast<std::uint64_t>((p.y - win.y0) * width + (p.x - win.x0));
        return (c << 24) | static_cast<std::uint64_t>(tile);
    }
    Placement unpack(std::uint64_t v) const {
        auto c = static_cast<long long>(v >> 24);
        return {{static_cast<int>(win.x0 + c % width), static_cast<int>(win.y0 + c / width)},
                static_cast<int>(v & 0xffffff)};
    }
};

struct Child {
    Key key;
    Placement via;
};

// Successors of one canonical state, in (y, x, tile name) order.
std::vector<Child> expand(const Tas& sys, const Packer& pk, const Key& key) {
    Assembly a;
    for (auto v : key) {
        auto pl = pk.unpack(v);
        a.place(pl.loc, pl.tile);
    }
    std::vector<Child> out;
    for (const auto& site : frontier(sys, a, pk.win)) {
        Child ch;
        ch.via = {site.loc, site.tile};
        ch.key = key;
        auto v = pk.pack(site.loc, site.tile);
        ch.key.insert(std::upper_bound(ch.key.begin(), ch.key.end(), v), v);
        out.push_back(std::move(ch));
    }
    return out;
}

}  // namespace

ExploreResult explore(const Tas& sys, const Box& window, const ExploreLimits& limits) {
    ExploreResult res;
    Packer pk{window, window.width()};
    if (sys.tiles.size() >= (1u << 24)) throw std::invalid_argument("tile set too large to explore");

    Key root;
    for (const auto& pl : sys.seed.sorted())
        if (window.contains(pl.loc)) root.push_back(pk.pack(pl.loc, pl.tile));
    std::sort(root.begin(), root.end());
    for (const auto& pl : sys.seed.sorted())
        if (window.contains(pl.loc)) res.types[pl.loc] = {pl.tile};

    std::vector<int> parent{-1};
    std::vector<Placement> via{{}};
    std::map<Point, std::vector<std::pair<int, int>>> first_at;  // loc -> (tile, state)

    auto sequence_to = [&](int id) {
        AssemblySequence seq;
        seq.seed = sys.seed;
        for (int s = id; parent[s] >= 0; s = parent[s]) seq.steps.push_back(via[s]);
        std::reverse(seq.steps.begin(), seq.steps.end());
        return seq;
    };

    std::vector<Key> level{root};
    std::vector<int> level_ids{0};
    if (limits.keep_graph) {
        res.graph.states.push_back({});
        for (auto v : root) res.graph.states.back().push_back(pk.unpack(v));
        res.graph.succ.emplace_back();
    }
    std::size_t total = 1;

    while (!level.empty()) {
        std::vector<std::vector<Child>> kids(level.size());
        const long n = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic, 16) if (limits.parallel)
        for (long i = 0; i < n; ++i) kids[i] = expand(sys, pk, level[i]);

        std::unordered_map<Key, int, KeyHash> seen;
        std::vector<Key> next;
        std::vector<int> next_ids;
        for (long i = 0; i < n; ++i) {
            if (kids[i].empty() && limits.keep_graph) res.terminal.push_back(level_ids[i]);
            for (auto& ch : kids[i]) {
                auto& slot = res.types[ch.via.loc];
                auto it = seen.find(ch.key);
                int id;
                if (it == seen.end()) {
                    if (total >= limits.max_states) {
                        res.exhausted = true;
                        break;
                    }
                    id = static_cast<int>(parent.size());
                    parent.push_back(level_ids[i]);
                    via.push_back(ch.via);
                    ++total;
                    if (limits.keep_graph) {
                        res.graph.states.emplace_back();
                        for (auto v : ch.key) res.graph.states.back().push_back(pk.unpack(v));
                        res.graph.succ.emplace_back();
                    }
                    seen.emplace(ch.key, id);
                    next.push_back(std::move(ch.key));
                    next_ids.push_back(id);
                } else {
                    id = it->second;
                }
                if (limits.keep_graph) res.graph.succ[level_ids[i]].push_back(id);
                if (std::find(slot.begin(), slot.end(), ch.via.tile) == slot.end()) {
                    slot.push_back(ch.via.tile);
                    std::sort(slot.begin(), slot.end());
                }
                auto& firsts = first_at[ch.via.loc];
                bool known = false;
                for (auto& [t, s] : firsts) known |= (t == ch.via.tile);
                if (!known) {
                    firsts.push_back({ch.via.tile, id});
                    if (firsts.size() == 2 && !res.split) {
                        res.split = {sequence_to(firsts[0].second), sequence_to(firsts[1].second)};
                        res.split_loc = ch.via.loc;
                    }
                }
            }
            if (res.exhausted) break;
        }
        if (res.exhausted) break;
        level = std::move(next);
        level_ids = std::move(next_ids);
    }
    res.states = total;
    if (limits.keep_graph) {
        res.graph.parent = parent;
        res.graph.via = via;
        for (auto& s : res.graph.succ) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
    }
    return res;
}

}  // namespace atam
