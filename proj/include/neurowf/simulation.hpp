#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurowf/pipeline.hpp"

namespace neurowf {

/// The three-component Gaussian benchmark mixture: weights (0.3, 0.6, 0.1),
/// means (6, 9.5, 12), standard deviations (1, 0.7, 0.5).
struct MixtureDensity {
    std::array<double, 3> weights{0.3, 0.6, 0.1};
    std::array<double, 3> means{6.0, 9.5, 12.0};
    std::array<double, 3> sds{1.0, 0.7, 0.5};
};

std::vector<double> sample_mixture(const MixtureDensity& mix, std::size_t n, std::uint64_t seed);
double mixture_pdf(const MixtureDensity& mix, double x);

/// Total variation distance (1/2) * integral |p - q| by the trapezoidal rule
/// on a common grid. Throws InvalidInput on a grid-length mismatch.
double total_variation(std::span<const double> p_grid, std::span<const double> q_grid,
                       std::span<const double> grid);

/// Generator parameters for one simulated group. Observations are Gaussian
/// with subject-specific mean b0 + b1*age + b2*gender and variance
/// 0.25 + sigma1^2*age^2 + sigma2^2*gender^2, where b0 ~ N(0, 0.5^2),
/// b1 ~ N(nu1, sigma1^2), b2 ~ N(nu2, sigma2^2).
struct GroupConfig {
    double nu1 = 0.1;
    double nu2 = 2.0;
    double sigma1 = 0.1;
    double sigma2 = 0.5;
    std::size_t n_subjects = 400;
    std::size_t n_obs_per_subject = 500;
    double age_min = 18.0;
    double age_max = 90.0;
    std::uint64_t seed = 1;
    /// Standard deviation of the intercept b0 (0 makes subjects with equal
    /// covariates identical in mean when sigma1 = sigma2 = 0).
    double b0_sd = 0.5;
};

std::vector<SampleSet> generate_group(const GroupConfig& config, Label label,
                                      const std::string& id_prefix);

/// Full two-group experiment configuration: the control parameters, the case
/// grid over (nu1, sigma1), and pipeline knobs.
struct ExperimentConfig {
    GroupConfig control;  ///< nu1=0.1, nu2=2, sigma1=0.1, sigma2=0.5
    double case_nu2 = 1.0;
    double case_sigma2 = 0.5;
    std::vector<double> nu1_grid{0.1, 0.3, 0.5, 0.7};
    std::vector<double> sigma1_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    double train_fraction = 0.7;
    std::uint64_t seed = 1;
    std::size_t n_grid = 4096;
    double pad_fraction = 0.1;
    std::size_t cv_folds = 5;
    double k_lo = 0.5, k_hi = 2.0, k_step = 0.05;
};

struct CellResult {
    double nu1 = 0.0;
    double sigma1 = 0.0;
    double acc_wf = 0.0;
    double acc_linear = 0.0;
    double k_selected = 1.0;
    std::uint64_t seed = 0;
};

/// Runs the Wasserstein-Fréchet pipeline and the linear baseline on every
/// (nu1, sigma1) cell of the case grid. Cells derive independent seeds from
/// (config.seed, cell indices) and run in parallel.
std::vector<CellResult> run_experiment_3_2(const ExperimentConfig& config);

}  // namespace neurowf
