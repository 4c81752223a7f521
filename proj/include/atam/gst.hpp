#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "atam/core.hpp"

namespace atam {

struct ClaimViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConnectingPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotDirected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Glue on side `dir` of a real or assumed tile at `loc`.
struct GlueEvent {
    Glue glue;
    Dir dir = N;
    Point loc;

    Point target() const { return loc.step(dir); }
    bool operator==(const GlueEvent&) const = default;
    bool operator<(const GlueEvent& o) const;
};

std::string to_string(const GlueEvent& e);

// Horizontal line at y_left + 1/2 up to x_left, a vertical step at
// x_left + 1/2, then y_right + 1/2 to the east. (x_left, y_left) and
// (x_right, y_right) are the located tl and tr tiles; the region split does
// not depend on x_right.
struct CutSpec {
    int y_left = 0, x_left = 0, y_right = 0, x_right = 0;

    bool below(Point p) const { return p.x <= x_left ? p.y <= y_left : p.y <= y_right; }
    bool down_crossing(const GlueEvent& e) const { return !below(e.loc) && below(e.target()); }
    bool up_crossing(const GlueEvent& e) const { return below(e.loc) && !below(e.target()); }
    int lowest() const { return std::min(y_left, y_right); }
    int highest() const { return std::max(y_left, y_right); }
    bool operator==(const CutSpec&) const = default;
};

struct GstOptions {
    std::size_t max_placements = 20000000;  // per procedure or table evaluation
    std::size_t max_entries = 2000000;      // backfill
};

// Maps sequences of glue events crossing a cut downward to the events that
// then cross back upward once everything below has grown. Entries are
// evaluated on first lookup from a retained copy of the strip; a frozen
// table answers only what it has already evaluated.
class GlueSequenceTable {
public:
    using Sequence = std::vector<GlueEvent>;

    struct Context;

    GlueSequenceTable() = default;
    GlueSequenceTable(std::shared_ptr<const Context> ctx, std::shared_ptr<GlueSequenceTable> older);

    const CutSpec& cut() const { return cut_; }
    int max_length() const { return max_len_; }

    // Downward events with both cells empty, restricted to the x-extent of
    // the retained strip. Only the backfill enumerates it; lookups accept
    // any relevant event.
    const std::vector<GlueEvent>& domain() const { return domain_; }

    // Whether a downward crossing carries a glue that some tile type can bind
    // on the far side; callers also check that the target is free.
    bool relevant(const GlueEvent& e) const;

    const std::set<GlueEvent>& lookup(const Sequence& seq);

    // Evaluates every sequence over the domain; returns the entry count.
    std::size_t backfill();

    const std::map<Sequence, std::set<GlueEvent>>& entries() const { return memo_; }
    std::size_t size() const { return memo_.size(); }

    void freeze();
    bool frozen() const { return ctx_ == nullptr; }
    std::size_t retained_cells() const;
    // Largest number of cells added by one evaluation so far.
    std::size_t peak_work() const { return peak_work_; }
    const std::shared_ptr<GlueSequenceTable>& older() const { return older_; }

private:
    void evaluate(const Sequence& seq);

    CutSpec cut_;
    int max_len_ = 0;
    std::vector<GlueEvent> domain_;
    std::shared_ptr<const Context> ctx_;
    std::shared_ptr<GlueSequenceTable> older_;
    std::map<Sequence, std::set<GlueEvent>> memo_;
    std::map<Sequence, std::pair<int, std::string>> failed_;
    std::size_t peak_work_ = 0;
};

// (g + 1)^{4c} (4c)!, saturating at the largest double.
double k_gst_bound(std::size_t glues, int c);
std::size_t glue_count(const TileSet& ts);

int strip_pitch(int c, int h);  // max(c^2 + 2c + 2, h)

// Every tile attachable at y <= y_max, grown to a fixpoint.
Assembly grow_below(const Tas& sys, int y_max, const GstOptions& opts = {});
inline Assembly init_assembly(const Tas& sys, int k, const GstOptions& opts = {}) {
    return grow_below(sys, 2 * k, opts);
}

// Cut through the first block row inside [band*k, (band+1)*k) whose
// leftmost and rightmost blocks are joined by bonded tiles that stay at or
// above the seed.
CutSpec find_cut(const Tas& sys, const Assembly& strip, int k, int c, int band = 1);

// Table for a cut over a configuration that holds everything below it.
GlueSequenceTable init_gst(const Tas& sys, const Assembly& strip, const CutSpec& cut, int c,
                           const GstOptions& opts = {});

struct StripState {
    std::shared_ptr<const Tas> sys;
    int k = 0;
    int c = 1;
    int i = 2;        // tiles cover (i-2)k <= y <= top
    long cap = 0;     // never attach above this row
    int top = 0;
    Assembly tiles;
    CutSpec cut;      // the cut `gst` answers for
    std::shared_ptr<GlueSequenceTable> gst;
    std::vector<GlueEvent> sigma;     // downward crossings of `cut`, in arrival order
    std::set<GlueEvent> phantoms;     // assumed present, from gst(sigma)
    GstOptions opts;
    Box extent;  // tiles with 0 <= y <= cap
    std::size_t peak_cells = 0;
    std::size_t max_entries = 0;
    std::size_t lookups = 0;

    std::size_t live_cells() const;
};

// InitAssembly and InitGST; the state is ready for update_assembly.
StripState init_strips(const Tas& sys, int k, int c, long cap, const GstOptions& opts = {});
// Grows the next strip; true when a tile can still attach above it.
bool update_assembly(StripState& st);
void update_gst(StripState& st, const std::optional<CutSpec>& forced = std::nullopt);

struct CharacteristicPrimeSpec {
    long n = 0;
    std::vector<Point> L;                            // offsets from (0, n)
    std::vector<std::map<Point, std::string>> C_n;  // offset -> tile name
};

CharacteristicPrimeSpec prime_spec_from_json(const nlohmann::json& j);
nlohmann::json prime_spec_to_json(const CharacteristicPrimeSpec& s);
// Height of the bounding rectangle of L together with (0, 0).
int template_height(const std::vector<Point>& L);

struct RPrimeReport {
    int bit = 0;
    std::map<Point, std::string> observed;  // offset -> tile name over L
    int k = 0;
    long f_prime = 0;  // x-extent of the tiles with 0 <= y <= n
    std::size_t peak_cells = 0;
    std::size_t strips = 0;
    std::size_t max_gst_entries = 0;
    std::size_t lookups = 0;  // non-empty sequences queried
};

RPrimeReport characteristic_r_prime(const Tas& sys, const CharacteristicPrimeSpec& spec, int c,
                                    const GstOptions& opts = {});

}  // namespace atam
