#pragma once

#include <map>

#include "atam/simulation.hpp"

namespace atam::detail {

// A BlockRepr bound to the tile indices of S (and optionally T).
class Decoder {
public:
    Decoder(const BlockRepr& r, const TileSet& s, const TileSet* t = nullptr);

    int m() const { return m_; }

    // cells holds m*m tile indices row by row from the bottom, -1 for empty.
    // Returns the index of the image in T (or -2 when no T was bound and the
    // block is mapped), -1 when unmapped.
    int decode(const std::vector<int>& cells) const;
    std::optional<std::string> decode_name(const std::vector<int>& cells) const;

    // Nonempty blocks of an assembly, keyed by block coordinates.
    std::map<Point, std::vector<int>> blocks(const std::vector<Placement>& cells) const;

    Assembly image(const std::vector<Placement>& cells) const;
    CleanReport clean(const std::vector<Placement>& cells) const;

private:
    int target(const std::string& name) const;

    int m_;
    BlockRepr::Rule rule_;
    const TileSet* t_;
    std::vector<std::optional<std::string>> mark_;  // prefix rule, by S tile
    struct Pattern {
        std::vector<std::pair<int, int>> cells;  // (cell, tile)
        std::string to;
    };
    std::vector<Pattern> patterns_;
};

}  // namespace atam::detail
