#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "neurowf/ensemble.hpp"
#include "neurowf/wasserstein.hpp"

namespace neurowf {

/// Everything needed to reproduce predictions: both group models on the shared
/// quantile grid, the selected threshold, an optional channel-ensemble forest,
/// and provenance.
struct ModelBundle {
    int schema_version = 1;
    FrechetModel control;
    FrechetModel mtbi;
    double k = 1.0;
    std::optional<ForestModel> forest;
    /// KDE settings used at fit time; prediction applies the same ones.
    std::size_t n_grid = 4096;
    double pad_fraction = 0.1;
    std::uint64_t seed = 0;
    std::string config_hash;
};

/// JSON persistence. Doubles are written in shortest round-trip form, so a
/// save/load cycle reproduces predictions exactly. load validates the schema
/// (version, shared grid, matching covariate dimensions) and throws
/// InvalidInput on mismatch.
void save_model_bundle(const std::string& path, const ModelBundle& bundle);
ModelBundle load_model_bundle(const std::string& path);

void save_forest(const std::string& path, const ForestModel& model);
ForestModel load_forest(const std::string& path);

/// FNV-1a hash of a canonical configuration string, hex-encoded.
std::string config_hash_of(const std::string& canonical);

}  // namespace neurowf
