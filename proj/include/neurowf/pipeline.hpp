#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurowf/classifier.hpp"
#include "neurowf/diffusion_kde.hpp"
#include "neurowf/quantiles.hpp"

namespace neurowf {

/// One subject's raw observations plus covariates and optional label.
struct SampleSet {
    std::string id;
    std::vector<double> values;
    CovariateVector covariates;  ///< (age, gender) in the standard pipeline
    std::optional<Label> label;
};

struct PipelineOptions {
    std::size_t n_grid = 4096;
    double pad_fraction = 0.1;
    RefitWeights refit = RefitWeights::uniform;
};

/// Subject reduced to its quantile function on the standard level grid.
struct SubjectQuantile {
    std::string id;
    QuantileFunction quantile;
    CovariateVector covariates;
    std::optional<Label> label;
    bool bandwidth_converged = true;
};

/// samples -> binned grid -> fixed-point bandwidth -> smoothed CDF ->
/// interpolated quantiles -> monotone refit, on the standard 1025-level grid.
QuantileFunction estimate_quantile_function(std::span<const double> samples,
                                            const PipelineOptions& options = {});

SubjectQuantile estimate_subject_quantile(const SampleSet& subject,
                                          const PipelineOptions& options = {});

/// Per-subject estimation across a cohort (parallel over subjects).
std::vector<SubjectQuantile> estimate_subject_quantiles(std::span<const SampleSet> subjects,
                                                        const PipelineOptions& options = {});

struct GroupModels {
    FrechetModel control;
    FrechetModel mtbi;
};

/// Fits one Fréchet model per class from labeled subjects. Throws InvalidInput
/// if either class is absent or a subject is unlabeled.
GroupModels fit_group_models(std::span<const SubjectQuantile> subjects);

std::vector<LabeledQuantile> to_labeled(std::span<const SubjectQuantile> subjects);

}  // namespace neurowf
