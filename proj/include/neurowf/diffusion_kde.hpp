#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "neurowf/grid_dct.hpp"

namespace neurowf {

/// Squared bandwidths selected by the fixed-point search, expressed in the
/// coordinate system that rescales [lo, hi] to [0, 1]. Conversion to data
/// units: t_data = t * R^2 with R = hi - lo, i.e. the kernel bandwidth is
/// h = sqrt(t) * R.
struct BandwidthResult {
    double t_star = 0.0;  ///< density smoothing squared-bandwidth
    double t_cdf = 0.0;   ///< CDF smoothing squared-bandwidth
    /// (s, t_s) pairs from the staged plug-in descent, s = l-1 down to 2.
    std::vector<std::pair<int, double>> stages;
    bool converged = false;
};

/// Density and CDF estimate on the binned grid.
struct DensityEstimate {
    std::vector<double> grid;     ///< bin centers, data units
    std::vector<double> density;  ///< nonnegative, unit trapezoidal integral
    std::vector<double> cdf;      ///< nondecreasing, cdf.back() == 1 exactly
    BandwidthResult bandwidth;
};

/// Spectral approximation of the squared L2 norm of the j-th density
/// derivative: 2 * pi^(2j) * sum_{k>=1} k^(2j) * a[k-1] * exp(-k^2*pi^2*t_j).
/// `a` holds the squared DCT coefficients for k >= 1 (see
/// squared_dct_coefficients); t_j and the result are in rescaled coordinates.
/// R (the data range) only validates the rescaling context; converting the
/// result to data units divides by R^(2j+1).
double l2_norm_derivative_spectral(std::span<const double> a, int j, double t_j, double R);

/// Fixed-point bandwidth selection on the rescaled-to-[0,1] binned data:
/// staged plug-in descent from order l = 7, then the root of
/// t - (2*n*sqrt(pi)*|f''|^2(t))^(-2/5) by bisection on [n^-2, 0.1]. The CDF
/// bandwidth is (sqrt(pi)*n*|f'|^2)^(-2/3) with |f'|^2 evaluated at t_star.
/// When no root is bracketed, falls back to t = 0.28*n^(-2/5) with
/// converged = false.
BandwidthResult select_bandwidth(const BinnedData& binned);

/// Smooths the DCT coefficients by exp(-t_star*(pi*k)^2/2), inverts, clips
/// negatives to zero and renormalizes to unit trapezoidal integral.
DensityEstimate estimate_density(const BinnedData& binned, const BandwidthResult& bw);

/// CDF on the bin-center grid: coefficients smoothed with t_cdf, inverse DCT,
/// cumulative sum scaled by 1/(n_grid-1), then normalized so the last value is
/// exactly 1 and clipped to be nondecreasing in [0, 1].
std::vector<double> estimate_cdf(const BinnedData& binned, const BandwidthResult& bw);

}  // namespace neurowf
