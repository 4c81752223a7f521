#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "atam/core.hpp"

namespace atam::detail {

// Deduplicates generated tiles by glue signature and numbers names per body.
class TileCollector {
public:
    explicit TileCollector(std::string ns) : ns_(std::move(ns)) {}

    int intern(const std::string& body, const std::array<Glue, 4>& g) {
        std::string sig = body;
        for (const auto& x : g) sig += '\x1f' + x.label + '\x1e' + std::to_string(x.strength);
        auto it = by_sig_.find(sig);
        if (it != by_sig_.end()) return it->second;
        const int n = body_count_[body]++;
        tiles_.push_back(TileType{ns_ + body + "#" + std::to_string(n), g});
        const int id = static_cast<int>(tiles_.size()) - 1;
        by_sig_.emplace(std::move(sig), id);
        return id;
    }

    std::vector<TileType> take() { return std::move(tiles_); }

private:
    std::string ns_;
    std::unordered_map<std::string, int> by_sig_;
    std::unordered_map<std::string, int> body_count_;
    std::vector<TileType> tiles_;
};

}  // namespace atam::detail
