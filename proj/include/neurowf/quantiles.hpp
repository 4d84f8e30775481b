#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace neurowf {

/// A quantile function sampled on a fixed level grid. After the monotone
/// refit, values are nondecreasing exactly.
struct QuantileFunction {
    std::vector<double> levels;
    std::vector<double> values;
};

/// The shared level grid {0, 1/1024, ..., 1} (1025 points). Every subject and
/// prototype in a model uses this grid.
std::vector<double> standard_levels();
inline constexpr std::size_t kStandardLevelCount = 1025;

/// Quantiles by linear interpolation of the grid against a nondecreasing CDF
/// with cdf.back() == 1. Levels at or below cdf.front() map to grid.front();
/// level 1 maps to grid.back(). Throws InvalidInput on a non-monotone CDF.
std::vector<double> invert_cdf(std::span<const double> grid, std::span<const double> cdf,
                               std::span<const double> levels);

/// Weighted least-squares projection onto the nondecreasing cone
/// (pool-adjacent-violators). Weights must be positive.
std::vector<double> monotone_refit(std::span<const double> q, std::span<const double> weights);

/// Unweighted refit.
std::vector<double> monotone_refit(std::span<const double> q);

/// Weighting of the refit objective.
enum class RefitWeights {
    uniform,        ///< plain L2 metric projection (default)
    level_squared,  ///< weights t_j^2 (floored at 1e-12 so t_0 = 0 stays valid)
};

std::vector<double> refit_weights_for(std::span<const double> levels, RefitWeights mode);

}  // namespace neurowf
