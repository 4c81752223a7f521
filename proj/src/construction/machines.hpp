#pragma once

#include <string>
#include <vector>

#include "atam/construction.hpp"

namespace atam::detail {

struct RunPlan {
    TuringMachine tm;
    std::uint64_t value = 0;
    std::vector<std::string> input;
    std::uint64_t space = kNoCap;
    std::uint64_t time = kNoCap;
};

TuringMachine oriented(const TuringMachine& tm, Tape tape);
std::vector<std::string> binary_input(std::uint64_t v, Tape tape);
std::vector<RunPlan> a_plus_plan(int x, const ConstructionParams& p, Tape tape);
std::vector<RunPlan> b_plan(int i, const ConstructionParams& p, Tape tape);
TmRun execute(const RunPlan& r, const ConstructionParams& p);
std::string record(const std::vector<RunPlan>& plan, const ConstructionParams& p);

// A compiled machine block as the layout sees it.
struct BlockGeom {
    RunPlan plan;
    int bit = 0;
    long rows = 0;    // including the final halt or abort row
    long tiles0 = 0;  // width of the input row
    long tiles = 0;   // widest row
    int y0 = 0;
    bool exit = true;
};

struct Segment {
    enum Kind { Counter, Path } kind = Path;
    std::string name;
    int x0 = 0, x1 = -1;  // inclusive planter columns
    std::vector<std::pair<int, Glue>> north;  // top-tile glues by column
};

struct SubLayout {
    int i = 0;
    std::uint64_t j = 0;
    std::string ns;  // tile-name prefix of this subiteration
    int height = 0;  // planter rows
    int P = 0;       // planter top row
    int x_begin = 0, x_end = 0;
    std::vector<Segment> segs;
    int x_R = 0;   // leftComp fixed end
    int x_j0 = 0;  // rightComp wall
    int xa = 0;    // alley gap column
    int x_T0 = 0;  // topComp fixed end
    std::vector<int> bumpers;
    std::vector<BlockGeom> left, top;
    std::vector<Point> left_out, right_path, arm_path;
    std::vector<int> bit_rows;  // by bit index
    std::string left_bits;      // i bits shown by leftComp
    std::string right_bits;     // i bits of j
    std::optional<std::string> arm_bits;
    std::uint64_t arm_type = 0;
    SubiterationReport report;
};

int planter_height(const ConstructionParams& p, int i);
long subiteration_width(const ConstructionParams& p, int i);
SubLayout layout(const ConstructionParams& p, int i, std::uint64_t j, int x_begin);
int subiteration_start(const ConstructionParams& p, int i, std::uint64_t j);

std::string sub_ns(int i, std::uint64_t j);

}  // namespace atam::detail
