#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace atam {

enum Dir : int { N = 0, E = 1, S = 2, W = 3 };

constexpr std::array<Dir, 4> kDirs{N, E, S, W};
constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {1, 0, -1, 0};

inline Dir opposite(Dir d) { return static_cast<Dir>((d + 2) & 3); }
char dir_char(Dir d);
Dir dir_from_char(char c);

struct Glue {
    std::string label;
    int strength = 0;

    bool is_null() const { return label.empty() || strength <= 0; }
    bool operator==(const Glue&) const = default;
};

struct TileType {
    std::string name;
    std::array<Glue, 4> glues;

    const Glue& glue(Dir d) const { return glues[d]; }
};

// A tile set with interned glue labels. Tiles are addressed by index.
class TileSet {
public:
    TileSet() = default;
    explicit TileSet(std::vector<TileType> tiles);

    std::size_t size() const { return tiles_.size(); }
    const TileType& operator[](int i) const { return tiles_[i]; }
    const std::vector<TileType>& tiles() const { return tiles_; }

    std::optional<int> find(const std::string& name) const;
    int index(const std::string& name) const;

    // Interned glue id on side d of tile t, or -1 for the null glue.
    int glue_id(int t, Dir d) const { return gid_[t][d]; }
    int glue_strength(int gid) const { return gid < 0 ? 0 : strength_[gid]; }
    const std::string& glue_label(int gid) const { return labels_[gid]; }
    std::size_t glue_count() const { return labels_.size(); }
    std::optional<int> glue_lookup(const std::string& label) const;

    // Tiles whose side d carries glue gid.
    const std::vector<int>& tiles_with(Dir d, int gid) const;

private:
    std::vector<TileType> tiles_;
    std::unordered_map<std::string, int> by_name_;
    std::unordered_map<std::string, int> glue_index_;
    std::vector<std::string> labels_;
    std::vector<int> strength_;
    std::vector<std::array<int, 4>> gid_;
    std::array<std::vector<std::vector<int>>, 4> by_side_;
};

inline TileType make_tile(std::string name, Glue n = {}, Glue e = {}, Glue s = {}, Glue w = {}) {
    return TileType{std::move(name), {std::move(n), std::move(e), std::move(s), std::move(w)}};
}

struct Point {
    int x = 0;
    int y = 0;

    bool operator==(const Point&) const = default;
    auto operator<=>(const Point& o) const {
        if (auto c = y <=> o.y; c != 0) return c;
        return x <=> o.x;
    }
    Point step(Dir d) const { return {x + kDx[d], y + kDy[d]}; }
};

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        std::uint64_t k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                          static_cast<std::uint32_t>(p.y);
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

// Inclusive bounding box.
struct Box {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

    bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    bool empty() const { return x1 < x0 || y1 < y0; }
    long long width() const { return empty() ? 0 : static_cast<long long>(x1) - x0 + 1; }
    long long height() const { return empty() ? 0 : static_cast<long long>(y1) - y0 + 1; }
    bool intersects(const Box& o) const {
        return !empty() && !o.empty() && x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
    }
    bool covers(const Box& o) const {
        return o.empty() || (x0 <= o.x0 && o.x1 <= x1 && y0 <= o.y0 && o.y1 <= y1);
    }
    void include(Point p);
    bool operator==(const Box&) const = default;
};

struct Placement {
    Point loc;
    int tile = -1;

    bool operator==(const Placement&) const = default;
};

// Sparse partial map from lattice points to tile indices.
class Assembly {
public:
    using Map = std::unordered_map<Point, int, PointHash>;

    Assembly() = default;

    bool contains(Point p) const { return cells_.count(p) != 0; }
    int at(Point p) const {
        auto it = cells_.find(p);
        return it == cells_.end() ? -1 : it->second;
    }
    void place(Point p, int tile) { cells_[p] = tile; }
    void erase(Point p) { cells_.erase(p); }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const Map& cells() const { return cells_; }

    // Placements ordered by (y, x).
    std::vector<Placement> sorted() const;
    Box bounds() const;
    bool operator==(const Assembly& o) const { return cells_ == o.cells_; }

private:
    Map cells_;
};

struct Tas {
    TileSet tiles;
    Assembly seed;
    int temperature = 2;
};

struct FrontierSite {
    Point loc;
    int tile = -1;
    int strength = 0;
    unsigned input_sides = 0;  // bit d set when side d contributes

    bool operator==(const FrontierSite&) const = default;
};

struct OccupiedLocation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientStrength : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SizeLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Strength with which `tile` would bind at `loc`, and the contributing sides.
int binding_strength(const TileSet& ts, const Assembly& asm_, Point loc, int tile,
                     unsigned* sides = nullptr);

// All attachable (location, tile) pairs, ordered by (y, x, tile name).
std::vector<FrontierSite> frontier(const Tas& sys, const Assembly& asm_,
                                   const std::optional<Box>& window = std::nullopt);

Assembly attach(const Tas& sys, const Assembly& asm_, const FrontierSite& site);

// Bond strength between two adjacent placed tiles (0 when the glues differ).
int bond_strength(const TileSet& ts, int a, Dir side_of_a, int b);

constexpr std::size_t kStableSizeLimit = 4096;
bool is_stable(const TileSet& ts, const Assembly& asm_, int temperature,
               std::size_t size_limit = kStableSizeLimit);

enum class PolicyKind { LexMin, LexMax, Fifo, Random };

struct Policy {
    PolicyKind kind = PolicyKind::LexMin;
    std::uint64_t seed = 0;

    static Policy lexmin() { return {PolicyKind::LexMin, 0}; }
    static Policy lexmax() { return {PolicyKind::LexMax, 0}; }
    static Policy fifo() { return {PolicyKind::Fifo, 0}; }
    static Policy random(std::uint64_t s) { return {PolicyKind::Random, s}; }
};

struct AssemblySequence {
    Assembly seed;
    std::vector<Placement> steps;

    Assembly result() const;
    // Index of the step that placed loc, -1 for seed tiles, nullopt if absent.
    std::optional<long> index_of(Point loc) const;
};

// Replays a sequence, checking each step against the frontier.
Assembly replay(const Tas& sys, const AssemblySequence& seq);

AssemblySequence run_sequence(const Tas& sys, const Policy& policy, std::size_t max_steps,
                              const Box& window);

struct Conflict {
    Point loc;
    int tile_a = -1;
    int tile_b = -1;
    std::size_t step = 0;  // non-seed placements made when observed
};

// Dense single-threaded grower over a finite window with an incremental frontier.
class Grower {
public:
    Grower(const Tas& sys, const Box& window, const Policy& policy);

    // Returns to the seed-only state under a new policy, reusing allocations.
    void reset(const Policy& policy);

    // Attaches one tile; false when no site remains inside the window.
    bool step();
    std::size_t run(std::size_t max_steps);

    int at(Point p) const;
    const std::vector<Placement>& order() const { return order_; }
    Assembly assembly() const;
    std::size_t placed() const { return placed_count_; }
    std::size_t frontier_cells() const { return active_.size(); }
    // First cell observed holding two attachable tile types.
    const std::optional<Conflict>& conflict() const { return conflict_; }
    std::uint64_t order_hash() const { return hash_; }
    const Box& window() const { return win_; }

private:
    int cell(Point p) const {
        return (p.y - win_.y0) * width_ + (p.x - win_.x0);
    }
    Point point(int c) const { return {win_.x0 + c % width_, win_.y0 + c / width_}; }
    void refresh(int c);
    void activate(int c);
    void deactivate(int c);
    void place(int c, int tile);
    int choose();

    const Tas* sys_;
    Box win_;
    Policy policy_;
    int width_ = 0;
    std::vector<int> grid_;
    std::vector<int> cand_;  // first attachable tile per cell, -1 if none
    std::unordered_map<int, std::vector<int>> multi_;  // cells with two or more
    std::vector<int> dirty_;
    std::vector<int> active_;
    std::vector<int> pos_;
    std::vector<int> fifo_;
    std::size_t fifo_head_ = 0;
    std::set<int> ordered_;
    std::vector<int> rank_;
    std::vector<int> scratch_;
    std::vector<int> touched_;
    std::vector<Placement> order_;
    std::size_t placed_count_ = 0;
    std::uint64_t rng_ = 0;
    std::uint64_t hash_ = 1469598103934665603ULL;
    std::optional<Conflict> conflict_;
};

struct ExploreLimits {
    std::size_t max_states = 1000000;
    bool keep_graph = false;
    bool parallel = false;
};

struct StateGraph {
    std::vector<std::vector<Placement>> states;  // canonical, sorted by (y, x)
    std::vector<std::vector<int>> succ;
    std::vector<int> parent;
    std::vector<Placement> via;  // placement leading from parent
};

struct ExploreResult {
    std::size_t states = 0;
    bool exhausted = false;
    std::map<Point, std::vector<int>> types;  // sorted tile ids ever placed per location
    StateGraph graph;                          // filled when keep_graph
    std::vector<int> terminal;                 // graph ids of terminal states (keep_graph)
    // Witness of two tiles at one location: graph-independent sequences.
    std::optional<std::pair<AssemblySequence, AssemblySequence>> split;
    std::optional<Point> split_loc;
};

ExploreResult explore(const Tas& sys, const Box& window, const ExploreLimits& limits = {});

struct DirectedLimits {
    std::size_t max_states = 1000000;
    std::size_t interleavings = 0;  // random interleavings tried when exploration is cut short
    std::uint64_t seed = 1;
    bool parallel = false;
};

struct DirectednessVerdict {
    enum class Kind { Directed, NotDirected, Inconclusive };
    Kind kind = Kind::Inconclusive;
    std::string method;  // "exhaustive" | "certificate" | "witness"
    std::string reason;
    std::size_t states = 0;
    std::size_t interleavings = 0;
    Point witness_loc;
    int tile_a = -1;
    int tile_b = -1;
    std::optional<AssemblySequence> seq_a;
    std::optional<AssemblySequence> seq_b;
};

DirectednessVerdict is_directed_within(const Tas& sys, const Box& window,
                                       const DirectedLimits& limits = {});

// Local determinism check on a terminal sequence; empty string when it holds.
std::string local_determinism_failure(const Tas& sys, const AssemblySequence& seq,
                                      const Box& window);

}  // namespace atam
