#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "atam/core.hpp"

namespace atam::cli {

enum Exit : int { kPass = 0, kVerdictFail = 1, kInputError = 2, kGenerationLimit = 3, kBudget = 4 };

constexpr const char* kToolVersion = "atam-forge 0.1.0";
constexpr std::size_t kDefaultBudget = 1000000;

// FNV-1a 64, as 16 hex digits.
std::string digest(const std::string& bytes);
std::string file_digest(const std::string& path);

// One character per tile, top row first, '.' for empty cells. Characters are
// handed out in order of first appearance; a legend follows the grid.
std::string render_text(const TileSet& ts, const Assembly& a, const std::optional<Box>& crop = std::nullopt);
// One unit square per tile, coloured by module or name prefix.
std::string render_svg(const TileSet& ts, const Assembly& a, const std::optional<Box>& crop = std::nullopt);

// "x0,y0,x1,y1"
Box parse_box(const std::string& s);

// Budget from ATAM_FORGE_BUDGET, else kDefaultBudget.
std::size_t default_budget();

// Runs one command; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace atam::cli
