#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "atam/core.hpp"

namespace atam {

enum class Tape { OneWayLeft, OneWayRight };

struct Transition {
    std::string next;
    std::string write;
    char move = 'R';  // physical: 'R' is east
};

struct TuringMachine {
    std::vector<std::string> states;
    std::string blank = "_";
    Tape tape = Tape::OneWayRight;
    std::string start, accept, reject;
    std::map<std::pair<std::string, std::string>, Transition> delta;

    const Transition* step(const std::string& q, const std::string& sym) const;
    bool halting(const std::string& q) const { return q == accept || q == reject; }
    void validate() const;
};

TuringMachine tm_from_json(const nlohmann::json& j);
nlohmann::json tm_to_json(const TuringMachine& tm);
// Mirror image: swaps the tape side and every move.
TuringMachine mirror_tm(const TuringMachine& tm);

// Splits a string into one-character symbols.
std::vector<std::string> symbols(const std::string& s);

// Tape cells are indexed by distance from the fixed end.
struct TmConfig {
    std::vector<std::string> tape;
    long head = 0;
    std::string state;
};

bool same_config(const TmConfig& a, const TmConfig& b, const std::string& blank);
// West-to-east rendering, head state in brackets before its cell.
std::string render_config(const TmConfig& c, Tape tape);

enum class TmOutcome { Accept, Reject, AbortTime, AbortSpace };
const char* outcome_name(TmOutcome o);

struct TmRun {
    std::vector<TmConfig> trace;
    TmOutcome outcome = TmOutcome::Reject;
    bool bit() const { return outcome == TmOutcome::Accept; }
    long max_width() const;
};

constexpr std::uint64_t kNoCap = UINT64_MAX;

// Direct execution. Input is given west to east. A config with index
// time_cap that has not halted aborts; a move onto cell space_cap aborts;
// step_limit is treated like the time cap.
TmRun run_tm(const TuringMachine& tm, const std::vector<std::string>& input,
             std::uint64_t space_cap, std::uint64_t time_cap,
             std::size_t step_limit = 1000000);

struct UncompilableTopology : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IncompleteRow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RowUnreached : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CompileOptions {
    std::string ns;          // prefix for every label and tile name
    bool standalone = true;  // place row 0 as the seed
    // Placement when embedded; standalone systems put the seed row on [0, w).
    int x_fixed = 0;
    int y0 = 0;
    // Direction of row 0 relative to the tape; standalone rows alternate
    // west-to-east on even rows.
    bool row0_outward = true;
    bool exit_glue = false;  // final row's fixed-end tile exposes a north exit glue
    std::size_t width_limit = 1u << 20;
    std::size_t row_limit = 1u << 20;
};

struct CompiledTm {
    Tas sys;
    std::string ns;
    Tape tape = Tape::OneWayRight;
    int x_fixed = 0;
    int out_dx = 1;  // physical step away from the fixed end
    int y0 = 0;
    TmRun run;
    std::vector<long> row_widths;  // tiles per row, including the final halt or abort row
    std::vector<Glue> row0_north;  // north glues of row 0 by tape position
    int bit = 0;
    std::string exit_label;  // set when exit_glue
    Point exit_point;        // location of the tile carrying the exit glue
    Box footprint;

    long rows() const { return static_cast<long>(row_widths.size()); }
    // Physical column of tile t (tape cells 2t and 2t+1).
    int x_of(long t) const { return x_fixed + out_dx * static_cast<int>(t); }
};

CompiledTm compile_tm(const TuringMachine& tm, const std::vector<std::string>& input,
                      std::uint64_t space_cap, std::uint64_t time_cap,
                      const CompileOptions& opts = {});

// Reads the configuration represented by row `row` (0 = input row).
TmConfig decode_row(const CompiledTm& c, const Assembly& asm_, long row);

struct CounterOptions {
    std::string ns;
    bool standalone = true;
    std::size_t width_limit = 1u << 20;
};

// Binary counter of fixed width counting from `start` up to all ones,
// one value per row, least significant bit at x = 0. The last row's end
// tile exposes the exit glue in place of a turn.
struct CompiledCounter {
    Tas sys;
    int bits = 0;
    std::uint64_t start = 0;
    long rows = 0;
    std::vector<Glue> row0_north;
    std::string exit_label;
    Point exit_point;
};

CompiledCounter compile_counter(int bits, std::uint64_t start, const CounterOptions& opts = {});
std::uint64_t decode_counter_row(const CompiledCounter& c, const Assembly& asm_, long row);

struct ZigZagReport {
    bool is_zigzag = true;
    bool is_compact = true;
    std::optional<Point> violation;
    std::string reason;
    std::size_t steps = 0;
};

ZigZagReport classify_zigzag(const Tas& sys, const Box& window, std::size_t max_steps = 1000000);

struct CharacteristicSpec {
    std::set<std::string> marked;             // exact tile names
    std::vector<std::string> marked_prefixes;  // name prefixes
    bool is_marked(const std::string& name) const;
};

struct RReport {
    int bit = 0;
    std::size_t peak_live = 0;
    long f = 0;  // widest row among rows 0..n
    std::size_t steps = 0;
};

// Grows the zig-zag keeping only the top two rows live.
RReport characteristic_r(const Tas& sys, const CharacteristicSpec& spec, long n,
                         std::size_t max_steps = 50000000);
long row_width_f(const Tas& sys, long n, std::size_t max_steps = 50000000);

}  // namespace atam
