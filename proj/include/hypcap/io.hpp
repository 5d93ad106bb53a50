#pragma once

// File formats: constellation JSON, CSV tables, result JSON and the run metadata sidecar.

#include "json.hpp"

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "hypcap/capacity.hpp"
#include "hypcap/constellation.hpp"
#include "hypcap/optimize.hpp"

namespace hypcap {

inline constexpr const char* version = "1.0.0";

// {"geometry":"hyperbolic"|"euclidean","delta":0.02,"disks":[{"center":[x,y],"radius":M},...]}
// Euclidean disks are converted to hyperbolic ones. The result is validated.
Constellation parseConstellation(const nlohmann::json& j);
Constellation parseConstellation(const std::string& text);
Constellation loadConstellation(const std::filesystem::path& path);
nlohmann::json toJson(const Constellation& c);

nlohmann::json toJson(const CapacityResult& r);
nlohmann::json toJson(const OptimizationResult& r);
nlohmann::json metadata(const SolverConfig& cfg, double delta);

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

// Doubles with 17 significant digits via to_chars (no locale), empty cells for monostate, LF endings.
std::string formatCell(const Cell& c);
std::string formatTable(const Table& t);
void writeTable(const Table& t, const std::filesystem::path& path);
void writeText(const std::string& text, const std::filesystem::path& path);

// Parses a file written by writeTable; numeric fields become doubles, empty fields monostate.
Table parseTable(const std::string& text);
Table readTable(const std::filesystem::path& path);

}  // namespace hypcap
