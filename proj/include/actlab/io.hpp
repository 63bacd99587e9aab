#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "actlab/maxmin.hpp"
#include "actlab/neural.hpp"
#include "actlab/simulate.hpp"
#include "actlab/surrogate.hpp"

namespace actlab {

// Writes to a temporary file next to path, then renames; a failed run never
// leaves a partial artifact at path.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// All doubles are serialized with 17 significant digits so CSV round-trips
// are bit-exact.
std::string value_dataset_csv(const ValueDataset& data);
ValueDataset parse_value_dataset_csv(const std::string& text);

// Lower triangle of Pi, row-major by (i, j) with i >= j.
std::string riccati_dataset_csv(const RiccatiDataset& data);
RiccatiDataset parse_riccati_dataset_csv(const std::string& text);

std::string trajectory_csv(const Trajectory& traj);

std::string heatmap_csv(const std::vector<std::pair<DenseVector, double>>& rows);

// Shared by PGDA and CBO-SP: iter, consensus_r_1..m, consensus_z0_1..n, value.
std::string history_csv(const std::vector<SaddleHistoryEntry>& history);

std::string loss_history_csv(const std::vector<std::pair<std::size_t, double>>& history);

nlohmann::json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

using SurrogateBundle = std::variant<StructuredSurrogate, UnstructuredSurrogate>;

nlohmann::json bundle_to_json(const StructuredSurrogate& s);
nlohmann::json bundle_to_json(const UnstructuredSurrogate& s);
SurrogateBundle bundle_from_json(const nlohmann::json& j);
SurrogateBundle load_bundle(const std::string& path);

}  // namespace actlab
