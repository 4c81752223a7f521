#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "atam/gst.hpp"

namespace atam {

struct GlueSequenceTable::Context {
    std::shared_ptr<const Tas> sys;
    Assembly snapshot;                     // every tile of the strip between floor and cut
    std::vector<GlueEvent> base_phantoms;  // assumed glues coming up through the floor
    std::vector<GlueEvent> base_sigma;     // floor crossings made before this table existed
    CutSpec cut;
    std::optional<CutSpec> floor;
    int c = 1;
    GstOptions opts;
};

}  // namespace atam
