#pragma once

#include <filesystem>
#include <istream>
#include <string_view>

#include "clusterks/empirical.hpp"

namespace clusterks::cli {

// CSV with header `value,cluster` (or just `value`, in which case every row
// becomes its own cluster and the sample reports labels_inferred()).
ClusteredSample parse_clustered_csv(std::istream& in);
ClusteredSample ingest_clustered_csv(const std::filesystem::path& path);

// CSV with header `time,unit_1,...,unit_n`; times strictly increasing in
// [0, 1], values in [0, 1], paths consistent with k_lip.
TrajectoryPanel parse_trajectory_csv(std::istream& in, double k_lip);
TrajectoryPanel ingest_trajectory_csv(const std::filesystem::path& path, double k_lip);

// Locale-independent decimal parse of a whole field. Returns false on any
// trailing garbage or non-finite result.
bool parse_decimal(std::string_view text, double& out);

}  // namespace clusterks::cli
