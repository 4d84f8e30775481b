#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurowf/quantiles.hpp"

namespace neurowf {

using CovariateVector = std::vector<double>;

/// Row-major matrix of doubles. Small utility shared by the regression and
/// serialization code.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
};

/// Fitted global Wasserstein-Fréchet regression for one group: the training
/// quantile matrix plus the covariate statistics that define the empirical
/// weights s_in(z) = 1 + (Z_i - z_bar)' * (sigma_hat + ridge*I)^-1 * (z - z_bar).
struct FrechetModel {
    std::vector<double> levels;   ///< shared quantile level grid
    Matrix quantile_matrix;       ///< n x m, each row nondecreasing
    Matrix covariates;            ///< n x p
    std::vector<double> z_bar;    ///< p
    Matrix sigma_hat;             ///< p x p sample covariance (without ridge)
    double ridge = 0.0;
    std::string group_tag;

    std::size_t n_subjects() const { return quantile_matrix.rows; }
    std::size_t n_covariates() const { return covariates.cols; }
};

/// L2 distance between quantile functions on their shared level grid
/// (trapezoidal quadrature); this is the 2-Wasserstein distance between the
/// underlying distributions. Throws InvalidInput if the grids differ.
double wasserstein_distance(const QuantileFunction& qa, const QuantileFunction& qb);

/// Fits the group model: sample mean and covariance of the covariates plus the
/// stored quantile rows. `ridge` defaults to 1e-8 * trace(sigma_hat)/p (with a
/// 1e-8 floor when the covariates are degenerate); pass 0 to disable
/// regularization, in which case a singular covariance throws
/// SingularCovariance.
FrechetModel fit_frechet_model(std::span<const QuantileFunction> quantiles,
                               std::span<const CovariateVector> covariates,
                               std::string group_tag,
                               std::optional<double> ridge = std::nullopt);

/// Empirical regression weights s_in(z), i = 1..n. They sum to n.
std::vector<double> empirical_weights(const FrechetModel& model, const CovariateVector& z);

/// Covariate-conditioned prototype: the weighted average of training quantile
/// rows projected onto the nondecreasing cone.
QuantileFunction prototype_quantile(const FrechetModel& model, const CovariateVector& z);

/// Pointwise average of the rows followed by the monotone refit.
QuantileFunction frechet_mean(const Matrix& quantile_matrix, std::span<const double> levels);

/// Mean squared Wasserstein distance of the rows to their Fréchet mean.
double frechet_variance(const Matrix& quantile_matrix, std::span<const double> levels);

/// Training diagnostic: mean squared distance of each subject to the prototype
/// at its own covariates. Never exceeds the Fréchet variance of the rows.
double residual_variance(const FrechetModel& model);

}  // namespace neurowf
