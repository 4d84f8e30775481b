#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace neurowf {

/// Samples binned onto a uniform grid over [lo, hi]. `counts` are relative
/// frequencies (they sum to 1); `n_samples` is the size of the original sample.
struct BinnedData {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t n_grid = 0;
    std::vector<double> counts;
    std::size_t n_samples = 0;

    double range() const { return hi - lo; }
    double bin_width() const { return (hi - lo) / static_cast<double>(n_grid); }
    /// Bin centers in data units.
    std::vector<double> grid() const;
};

/// Type-II DCT coefficients v_k of a binned data vector, k = 0..n_grid-1.
struct DctCoefficients {
    std::vector<double> values;
};

/// Bins samples onto n_grid equal-width bins over [min - pad*range,
/// max + pad*range]. Bins are left-closed; the rightmost bin is also
/// right-closed. A degenerate sample range (all values equal) is widened to 1
/// before padding. Throws InvalidInput on empty or non-finite input.
BinnedData bin_samples(std::span<const double> samples, std::size_t n_grid, double pad_fraction);

/// Type-II DCT: y_k = 2 * sum_{j=0}^{N-1} x_j * cos(pi*k*(2j+1)/(2N)).
/// Length must be a power of two. O(N log N).
std::vector<double> dct2(std::span<const double> x);

/// Type-III DCT normalized to be the exact inverse of dct2:
/// x_j = (y_0 + 2 * sum_{k=1}^{N-1} y_k * cos(pi*k*(2j+1)/(2N))) / (2N).
std::vector<double> dct3(std::span<const double> y);

inline DctCoefficients dct_coefficients(const BinnedData& binned) {
    return DctCoefficients{dct2(binned.counts)};
}

/// Squared coefficients a_k = (v_k/2)^2 for k = 1..N-1 (a[i] corresponds to
/// k = i+1). These feed the spectral derivative-norm formulas.
std::vector<double> squared_dct_coefficients(const DctCoefficients& dct);

}  // namespace neurowf
