#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "atam/core.hpp"
#include "atam/simulation.hpp"

namespace atam {

// Points of the configuration from which a path through empty cells of its
// column hull reaches below every point of it, ordered west to east and
// then south to north.
std::vector<Point> southern_boundary(const Assembly& config);
std::vector<Point> southern_boundary(const std::vector<Point>& dom);

// A column read from its top row downward: the prefix rows, then copies of
// the period rows for as long as the column lasts. Rows map an x offset
// (from the column's x origin) to a tile.
struct ArmShape {
    using Row = std::map<int, int>;
    std::vector<Row> prefix;
    std::vector<Row> period;  // empty for a column with no repetition

    bool periodic() const { return !period.empty(); }
    // Row r of the extension, counted from the top.
    const Row* row(long r) const;
    // The first `rows` rows with row 0 at `top` and offset 0 at top.x.
    Assembly extend(Point top, long rows) const;
    bool operator==(const ArmShape&) const = default;
    bool operator<(const ArmShape& o) const;
};

// Shortest description: minimises prefix plus period height among
// decompositions whose period repeats at least twice, preferring the shorter
// period on ties.
// The x origin defaults to the column's westmost point.
ArmShape arm_shape(const Assembly& column, std::optional<int> x_origin = std::nullopt);

// Shapes that, hung with offset 0 at (probes' west x + offset, probes' top
// row), occupy no cell of the probes down to the probes' bottom row.
std::vector<ArmShape> probe_dodgers(const Assembly& probes, const std::vector<ArmShape>& shapes, int offset);

struct Signature {
    Assembly left_bumper, right_bumper;
    Assembly row;  // macrotiles below and between the bumpers
    std::vector<ArmShape> dodgers;
    bool operator==(const Signature&) const = default;
};

struct ProbeSet {
    Assembly left, right;
    Point gap;  // p_t

    // Throws InvalidProbes unless the probes are disjoint and the gap is free.
    void validate() const;
};

struct InvalidProbes : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ArmQuery {
    BlockRepr repr;                    // maps blocks of U-assemblies to tiles of T
    std::set<std::string> arm_tiles;   // T tiles that are arm types
    std::size_t max_steps = 100000;    // per seed
    bool parallel = false;
};

struct ArmEnumeration {
    std::set<std::string> E;
    std::vector<std::optional<std::string>> by_tile;  // arm type found for each t*, in U order
    std::size_t exhausted = 0;                        // t* whose growth ran out of budget
    std::vector<Point> queue;                         // right-probe tiles in pop order
};

// For each t* of U: seed the left probe with t* at the gap, grow until
// terminal or wider than 2c, and while small add the next right-probe
// boundary tile. A grown macrotile mapping to an arm type adds that type.
ArmEnumeration enumerate_arm_types(const ProbeSet& probes, const TileSet& U, int c, int temperature,
                                   const ArmQuery& q);

}  // namespace atam
