#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "atam/core.hpp"

namespace atam {

struct InvalidRepr : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Partial map from m-blocks of S to tile types of T.
//
// Prefix rule: a tile named "M[t]..." marks its block as representing t;
// unmarked tiles are fuzz. A block maps to t when it holds at least one
// mark and every mark names t.
//
// Table rule: an entry matches a block when every non-null cell of the
// entry equals the block's tile there. Rows of `block` run bottom to top.
struct BlockRepr {
    enum class Rule { Prefix, Table };
    using Cells = std::vector<std::vector<std::optional<std::string>>>;  // [row][col]

    struct Entry {
        Cells block;
        std::string maps_to;
    };

    int m = 1;
    Rule rule = Rule::Table;
    std::vector<Entry> table;

    // Rejects empty or misshapen entries and pairs of entries that agree on
    // a common superblock but disagree on the image.
    void validate() const;
};

std::string macro_mark(const std::string& t_name);
// T-tile named by a prefix mark, if the name carries one.
std::optional<std::string> decode_mark(const std::string& s_name);

BlockRepr repr_from_json(const nlohmann::json& j);
nlohmann::json repr_to_json(const BlockRepr& r);

// Block coordinates of a lattice point (floor division).
Point block_of(Point p, int m);

// R applied to the block with block coordinates b; nullopt when undefined.
std::optional<std::string> repr_block(const BlockRepr& r, const TileSet& s, const Assembly& a, Point b);

// R*: the T-assembly represented by an S-assembly.
Assembly apply_repr(const BlockRepr& r, const TileSet& s, const TileSet& t, const Assembly& a);

struct CleanReport {
    bool clean = true;
    std::optional<Point> violation;  // block coordinates
};

CleanReport check_clean(const BlockRepr& r, const TileSet& s, const Assembly& a);

enum class Clause { EquivProductions, Follows, Models, CleanMapping };
std::string clause_name(Clause c);

struct SimLimits {
    std::size_t max_states = 1000000;  // per explored system
    bool parallel = false;
};

struct SimulationVerdict {
    bool passed = false;
    bool inconclusive = false;  // an exploration budget ran out
    std::optional<Clause> failed_clause;
    bool bounded = true;  // always: every check is window limited
    std::string detail;
    std::vector<AssemblySequence> witness;  // S sequences
    std::vector<Assembly> t_witness;
    std::size_t s_states = 0;
    std::size_t t_states = 0;
};

// Each checker explores S inside the m-scaled window and T inside
// t_window. check_simulation shares one exploration and tests the clauses
// in the order clean, follows, models, equivalent productions.
SimulationVerdict check_equiv_productions(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r,
                                          const Box& t_window, const SimLimits& lim = {});
SimulationVerdict check_follows(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r,
                                const Box& t_window, const SimLimits& lim = {});
SimulationVerdict check_models(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r, const Box& t_window,
                               const SimLimits& lim = {});
SimulationVerdict check_clean_all(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r,
                                  const Box& t_window, const SimLimits& lim = {});
SimulationVerdict check_simulation(const Tas& s_sys, const Tas& t_sys, const BlockRepr& r,
                                   const Box& t_window, const SimLimits& lim = {});

// Whether beta is reachable from alpha in T by single attachments.
bool t_reachable(const Tas& t_sys, const Assembly& alpha, const Assembly& beta);

struct Scaled {
    Tas sys;
    BlockRepr repr;
};

// Each T-tile becomes one m×m macrotile per minimal set of input sides. The
// first tile reads the inputs at a corner and the rest of the block fills
// along a serpentine; glues are shown only on non-input sides and only where
// a neighbour's first tile reads them, placed as late in the fill as the
// layout allows. Port labels carry the position along the edge and the flow
// direction. For m >= 2, binding that needs two opposite sides or three sides
// is not reproduced; the checkers report systems that rely on it.
Scaled scale_system(const Tas& t_sys, int m);

// The S-assembly built from complete macrotiles of a T-assembly.
Assembly expand_assembly(const TileSet& s, const TileSet& t, const Assembly& a, int m);

Box scale_window(const Box& b, int m);

}  // namespace atam
