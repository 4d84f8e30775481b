#include "neurowf/wasserstein.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "neurowf/error.hpp"

namespace neurowf {

namespace {

double trapezoid_squared_diff(std::span<const double> levels, std::span<const double> a,
                              std::span<const double> b) {
    double integral = 0.0;
    double prev = (a[0] - b[0]) * (a[0] - b[0]);
    for (std::size_t j = 1; j < levels.size(); ++j) {
        const double cur = (a[j] - b[j]) * (a[j] - b[j]);
        integral += 0.5 * (prev + cur) * (levels[j] - levels[j - 1]);
        prev = cur;
    }
    return integral;
}

void check_same_grid(std::span<const double> la, std::span<const double> lb) {
    if (la.size() != lb.size() || !std::equal(la.begin(), la.end(), lb.begin())) {
        throw InvalidInput("wasserstein_distance: quantile level grids differ");
    }
}

Eigen::MatrixXd regularized_covariance(const FrechetModel& model) {
    const auto p = static_cast<Eigen::Index>(model.n_covariates());
    Eigen::MatrixXd sigma(p, p);
    for (Eigen::Index r = 0; r < p; ++r)
        for (Eigen::Index c = 0; c < p; ++c)
            sigma(r, c) = model.sigma_hat.at(static_cast<std::size_t>(r),
                                             static_cast<std::size_t>(c));
    sigma.diagonal().array() += model.ridge;
    return sigma;
}

// Solves (sigma_hat + ridge*I) x = (z - z_bar) via Cholesky.
Eigen::VectorXd solve_centered(const FrechetModel& model, const CovariateVector& z) {
    const auto p = static_cast<Eigen::Index>(model.n_covariates());
    if (z.size() != model.n_covariates()) {
        throw InvalidInput("empirical_weights: covariate dimension mismatch");
    }
    Eigen::VectorXd rhs(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        rhs(i) = z[static_cast<std::size_t>(i)] - model.z_bar[static_cast<std::size_t>(i)];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(regularized_covariance(model));
    if (llt.info() != Eigen::Success) {
        throw SingularCovariance("covariate covariance is not positive definite (ridge = " +
                                 std::to_string(model.ridge) + ")");
    }
    return llt.solve(rhs);
}

}  // namespace

double wasserstein_distance(const QuantileFunction& qa, const QuantileFunction& qb) {
    check_same_grid(qa.levels, qb.levels);
    return std::sqrt(trapezoid_squared_diff(qa.levels, qa.values, qb.values));
}

FrechetModel fit_frechet_model(std::span<const QuantileFunction> quantiles,
                               std::span<const CovariateVector> covariates,
                               std::string group_tag, std::optional<double> ridge) {
    if (quantiles.empty() || quantiles.size() != covariates.size()) {
        throw InvalidInput("fit_frechet_model: need matching nonempty quantiles and covariates");
    }
    const std::size_t n = quantiles.size();
    const std::size_t m = quantiles[0].levels.size();
    const std::size_t p = covariates[0].size();
    if (p == 0) throw InvalidInput("fit_frechet_model: covariate dimension must be positive");

    FrechetModel model;
    model.levels = quantiles[0].levels;
    model.group_tag = std::move(group_tag);
    model.quantile_matrix = Matrix(n, m);
    model.covariates = Matrix(n, p);

    for (std::size_t i = 0; i < n; ++i) {
        check_same_grid(model.levels, quantiles[i].levels);
        if (covariates[i].size() != p) {
            throw InvalidInput("fit_frechet_model: inconsistent covariate dimension");
        }
        for (std::size_t j = 0; j < m; ++j) model.quantile_matrix.at(i, j) = quantiles[i].values[j];
        for (std::size_t c = 0; c < p; ++c) model.covariates.at(i, c) = covariates[i][c];
    }

    model.z_bar.assign(p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < p; ++c) model.z_bar[c] += model.covariates.at(i, c);
    for (double& v : model.z_bar) v /= static_cast<double>(n);

    model.sigma_hat = Matrix(p, p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < p; ++r) {
            const double dr = model.covariates.at(i, r) - model.z_bar[r];
            for (std::size_t c = 0; c < p; ++c) {
                model.sigma_hat.at(r, c) +=
                    dr * (model.covariates.at(i, c) - model.z_bar[c]) / static_cast<double>(n);
            }
        }
    }

    if (ridge.has_value()) {
        if (*ridge < 0.0) throw InvalidInput("fit_frechet_model: ridge must be >= 0");
        model.ridge = *ridge;
    } else {
        double trace = 0.0;
        for (std::size_t c = 0; c < p; ++c) trace += model.sigma_hat.at(c, c);
        // degenerate covariates (n = 1, or all subjects identical) get an
        // absolute floor so the weight formula stays defined; s_in is then 1
        model.ridge = trace > 0.0 ? 1e-8 * trace / static_cast<double>(p) : 1e-8;
    }

    // fail fast on a covariance that cannot back the weight formula
    Eigen::LLT<Eigen::MatrixXd> llt(regularized_covariance(model));
    if (llt.info() != Eigen::Success) {
        throw SingularCovariance("fit_frechet_model: covariance not positive definite");
    }
    return model;
}

std::vector<double> empirical_weights(const FrechetModel& model, const CovariateVector& z) {
    const std::size_t n = model.n_subjects();
    const std::size_t p = model.n_covariates();
    const Eigen::VectorXd solved = solve_centered(model, z);

    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (std::size_t c = 0; c < p; ++c) {
            dot += (model.covariates.at(i, c) - model.z_bar[c]) *
                   solved(static_cast<Eigen::Index>(c));
        }
        weights[i] = 1.0 + dot;
    }
    return weights;
}

QuantileFunction prototype_quantile(const FrechetModel& model, const CovariateVector& z) {
    const auto weights = empirical_weights(model, z);
    const std::size_t n = model.n_subjects();
    const std::size_t m = model.levels.size();

    std::vector<double> avg(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights[i] / static_cast<double>(n);
        const auto row = model.quantile_matrix.row(i);
        for (std::size_t j = 0; j < m; ++j) avg[j] += w * row[j];
    }
    return QuantileFunction{model.levels, monotone_refit(avg)};
}

QuantileFunction frechet_mean(const Matrix& quantile_matrix, std::span<const double> levels) {
    if (quantile_matrix.rows == 0 || quantile_matrix.cols != levels.size()) {
        throw InvalidInput("frechet_mean: empty matrix or level mismatch");
    }
    std::vector<double> avg(levels.size(), 0.0);
    for (std::size_t i = 0; i < quantile_matrix.rows; ++i) {
        const auto row = quantile_matrix.row(i);
        for (std::size_t j = 0; j < levels.size(); ++j) avg[j] += row[j];
    }
    for (double& v : avg) v /= static_cast<double>(quantile_matrix.rows);
    return QuantileFunction{{levels.begin(), levels.end()}, monotone_refit(avg)};
}

double frechet_variance(const Matrix& quantile_matrix, std::span<const double> levels) {
    const QuantileFunction mean = frechet_mean(quantile_matrix, levels);
    double total = 0.0;
    for (std::size_t i = 0; i < quantile_matrix.rows; ++i) {
        total += trapezoid_squared_diff(levels, quantile_matrix.row(i), mean.values);
    }
    return total / static_cast<double>(quantile_matrix.rows);
}

double residual_variance(const FrechetModel& model) {
    const std::size_t n = model.n_subjects();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CovariateVector z(model.n_covariates());
        for (std::size_t c = 0; c < z.size(); ++c) z[c] = model.covariates.at(i, c);
        const QuantileFunction proto = prototype_quantile(model, z);
        total += trapezoid_squared_diff(model.levels, model.quantile_matrix.row(i), proto.values);
    }
    return total / static_cast<double>(n);
}

}  // namespace neurowf
