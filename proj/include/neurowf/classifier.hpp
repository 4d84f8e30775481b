#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neurowf/wasserstein.hpp"

namespace neurowf {

enum class Label : int { control = 0, mtbi = 1 };

std::string to_string(Label label);
Label parse_label(const std::string& text);

/// Outcome of the two-prototype decision rule: control iff d1 <= k * d2.
struct Decision {
    Label label = Label::control;
    double d1 = 0.0;  ///< distance to the control prototype
    double d2 = 0.0;  ///< distance to the mTBI prototype
    double k = 1.0;   ///< threshold used
};

/// A subject reduced to its quantile function, with covariates and label.
struct LabeledQuantile {
    QuantileFunction quantile;
    CovariateVector covariates;
    Label label = Label::control;
};

/// Per-group OLS of the subject mean on (1, covariates).
struct LinearBaselineModel {
    std::vector<double> control_coef;  ///< p+1 coefficients, intercept first
    std::vector<double> mtbi_coef;
};

struct Metrics {
    double acc = 0.0;
    double f1 = 0.0;  ///< balanced F1: unweighted mean of per-class F1
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
};

/// Distances of q0 to the covariate-matched prototypes of both groups and the
/// threshold rule label. Throws InvalidInput on level-grid mismatch or k <= 0.
Decision classify(const FrechetModel& ctl, const FrechetModel& mtbi, const QuantileFunction& q0,
                  const CovariateVector& z0, double k);

/// Selects the threshold k maximizing the mean across stratified folds of the
/// balanced F1 score. Prototypes stay fixed (fitted on the full training
/// split); only the scored subjects rotate through folds. Ties are broken
/// toward the grid point nearest 1, then toward the smaller k. The fold
/// assignment is a seeded shuffle, so results are deterministic.
double select_threshold(const FrechetModel& ctl, const FrechetModel& mtbi,
                        std::span<const LabeledQuantile> subjects, std::size_t folds,
                        std::span<const double> k_grid, std::uint64_t seed = 1);

/// Threshold grid lo..hi inclusive in steps of `step` (values are exact
/// multiples, generated from integer arithmetic).
std::vector<double> make_k_grid(double lo = 0.5, double hi = 2.0, double step = 0.05);

LinearBaselineModel fit_linear_baseline(std::span<const double> subject_means,
                                        std::span<const CovariateVector> covariates,
                                        std::span<const Label> labels);

/// Control iff |prediction_ctl - ybar0| <= |prediction_mtbi - ybar0|.
Label classify_linear(const LinearBaselineModel& model, const CovariateVector& z0, double ybar0);

Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> actual);

}  // namespace neurowf
