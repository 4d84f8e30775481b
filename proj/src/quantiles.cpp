#include "neurowf/quantiles.hpp"

#include <algorithm>
#include <cmath>

#include "neurowf/error.hpp"

namespace neurowf {

std::vector<double> standard_levels() {
    std::vector<double> levels(kStandardLevelCount);
    for (std::size_t j = 0; j < kStandardLevelCount; ++j) {
        levels[j] = static_cast<double>(j) / 1024.0;
    }
    return levels;
}

std::vector<double> invert_cdf(std::span<const double> grid, std::span<const double> cdf,
                               std::span<const double> levels) {
    if (grid.size() != cdf.size() || grid.size() < 2) {
        throw InvalidInput("invert_cdf: grid and cdf must have equal length >= 2");
    }
    for (std::size_t j = 1; j < cdf.size(); ++j) {
        if (cdf[j] < cdf[j - 1]) throw InvalidInput("invert_cdf: cdf is not nondecreasing");
    }

    std::vector<double> q(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double t = levels[i];
        if (!(t >= 0.0 && t <= 1.0)) throw InvalidInput("invert_cdf: level outside [0,1]");
        if (t >= 1.0) {
            q[i] = grid.back();
            continue;
        }
        if (t <= cdf.front()) {
            q[i] = grid.front();
            continue;
        }
        // first index with cdf[j] >= t; cdf[j-1] < t guarantees a nonzero step
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), t);
        const auto j = static_cast<std::size_t>(it - cdf.begin());
        const double w = (t - cdf[j - 1]) / (cdf[j] - cdf[j - 1]);
        q[i] = grid[j - 1] + w * (grid[j] - grid[j - 1]);
    }
    return q;
}

std::vector<double> monotone_refit(std::span<const double> q, std::span<const double> weights) {
    if (q.size() != weights.size()) {
        throw InvalidInput("monotone_refit: value/weight length mismatch");
    }
    for (double w : weights) {
        if (!(w > 0.0)) throw InvalidInput("monotone_refit: weights must be positive");
    }
    const std::size_t n = q.size();
    std::vector<double> mean(n), weight(n);
    std::vector<std::size_t> size(n);
    std::size_t blocks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mean[blocks] = q[i];
        weight[blocks] = weights[i];
        size[blocks] = 1;
        ++blocks;
        // merge while the nondecreasing constraint is violated
        while (blocks > 1 && mean[blocks - 2] > mean[blocks - 1]) {
            const double w = weight[blocks - 2] + weight[blocks - 1];
            mean[blocks - 2] =
                (weight[blocks - 2] * mean[blocks - 2] + weight[blocks - 1] * mean[blocks - 1]) / w;
            weight[blocks - 2] = w;
            size[blocks - 2] += size[blocks - 1];
            --blocks;
        }
    }
    std::vector<double> out(n);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(pos), size[b], mean[b]);
        pos += size[b];
    }
    return out;
}

std::vector<double> monotone_refit(std::span<const double> q) {
    const std::vector<double> uniform(q.size(), 1.0);
    return monotone_refit(q, uniform);
}

std::vector<double> refit_weights_for(std::span<const double> levels, RefitWeights mode) {
    std::vector<double> w(levels.size(), 1.0);
    if (mode == RefitWeights::level_squared) {
        for (std::size_t j = 0; j < levels.size(); ++j) {
            w[j] = std::max(levels[j] * levels[j], 1e-12);
        }
    }
    return w;
}

}  // namespace neurowf
