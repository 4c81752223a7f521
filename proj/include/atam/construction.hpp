#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "atam/core.hpp"
#include "atam/zigzag.hpp"

namespace atam {

struct ConstructionParams {
    TuringMachine A, A_H, B, B_H;
    int a = 4;              // arm-type bit width
    int max_iteration = 3;
    // Structural constants.
    int bit_gap = 7;           // empty rows between consecutive alley bits
    int alley_mult = 8;        // leftComp wall reaches alley_mult * 2^log(i) + alley_add
    int alley_add = 4;         // also the extra rows of rightComp above i * (bit_gap + 1)
    int gap_add = 11;          // gap columns: 2^i + log(i) + gap_add
    int spacer = 7;            // columns between the rightComp and topComp inputs
    int bumper_offset = 2;     // bumpers sit this far outside each input row
    std::uint64_t left_base = 4;  // leftComp spacing columns: left_base^i (= 2^{2i})
    std::uint64_t top_base = 9;   // topComp spacing columns: top_base^i (= 3^{2i})
    long width_limit = 1L << 22;  // widest generated system, in columns
    std::size_t step_limit = 1u << 16;  // per simulated machine run

    void validate() const;
};

// Toy stand-ins: A accepts even inputs, A_H always rejects, B accepts inputs
// with an odd number of one bits, B_H always accepts.
ConstructionParams default_params();
ConstructionParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const ConstructionParams& p);

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct WidthLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IncompleteRegion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int ceil_log2(std::uint64_t x);  // 0 for x <= 1
std::uint64_t sat_pow(std::uint64_t b, std::uint64_t e);

// Bit p of the record is character p.
std::string a_plus(int x, const ConstructionParams& p);
std::optional<std::string> machine_r(int i, std::uint64_t j, const ConstructionParams& p);

struct ModuleBox {
    std::string module;  // planter, bumper, leftComp, leftOut, rightComp, topComp, arm, armColumn, alleyLeft, alleyRight, alleyMid
    Box box;
};

struct SubiterationReport {
    int i = 0;
    std::uint64_t j = 0;
    std::string a_plus_bits;  // length i
    bool is_empty = false;
    std::set<int> matching_positions;
    std::optional<std::string> arm_bits;  // length a
    std::vector<ModuleBox> boxes;
    int planter_top = 0;  // y of the planter's top row in this iteration
    int alley_x = 0;      // the gap column
    std::vector<int> bit_rows;
    Box extent;  // union of all boxes

    std::uint64_t arm_type() const;
    std::string j_bits() const;
};

SubiterationReport predict_layout(const ConstructionParams& p, int i, std::uint64_t j);

struct Construction {
    Tas sys;
    std::vector<SubiterationReport> reports;  // iteration-major
    Box window;                               // covers every realized tile
    std::size_t expected_tiles = 0;           // size of the terminal assembly
};

Construction build_construction(const ConstructionParams& p);
Tas generate_system(const ConstructionParams& p);

struct AlleyRow {
    int y = 0;
    std::string left, right;
    std::optional<std::string> middle, below;
};

struct ArmColumn {
    int x = 0;
    std::uint64_t type = 0;
    int y_low = 0, y_high = 0;
};

struct AlleyContents {
    std::vector<AlleyRow> rows;  // by bit index
    std::optional<ArmColumn> arm_column;
};

AlleyContents locate_bitalley(const TileSet& ts, const Assembly& asm_, const SubiterationReport& r);

// Module tag of a generated tile name ("planter", "leftComp", ..., "alley", "arm", "seed").
std::string module_of(const std::string& tile_name);

}  // namespace atam
