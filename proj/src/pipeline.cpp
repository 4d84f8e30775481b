#include "neurowf/pipeline.hpp"

#include "neurowf/error.hpp"
#include "neurowf/parallel.hpp"

namespace neurowf {

namespace {

struct EstimateResult {
    QuantileFunction quantile;
    bool converged = true;
};

EstimateResult estimate_impl(std::span<const double> samples, const PipelineOptions& options) {
    const BinnedData binned = bin_samples(samples, options.n_grid, options.pad_fraction);
    const BandwidthResult bw = select_bandwidth(binned);
    const std::vector<double> cdf = estimate_cdf(binned, bw);
    const std::vector<double> levels = standard_levels();
    const std::vector<double> raw = invert_cdf(binned.grid(), cdf, levels);
    const std::vector<double> weights = refit_weights_for(levels, options.refit);
    return EstimateResult{QuantileFunction{levels, monotone_refit(raw, weights)}, bw.converged};
}

}  // namespace

QuantileFunction estimate_quantile_function(std::span<const double> samples,
                                            const PipelineOptions& options) {
    return estimate_impl(samples, options).quantile;
}

SubjectQuantile estimate_subject_quantile(const SampleSet& subject,
                                          const PipelineOptions& options) {
    EstimateResult estimated = estimate_impl(subject.values, options);
    SubjectQuantile out;
    out.id = subject.id;
    out.quantile = std::move(estimated.quantile);
    out.covariates = subject.covariates;
    out.label = subject.label;
    out.bandwidth_converged = estimated.converged;
    return out;
}

std::vector<SubjectQuantile> estimate_subject_quantiles(std::span<const SampleSet> subjects,
                                                        const PipelineOptions& options) {
    std::vector<SubjectQuantile> out(subjects.size());
    parallel_for(subjects.size(),
                 [&](std::size_t i) { out[i] = estimate_subject_quantile(subjects[i], options); });
    return out;
}

GroupModels fit_group_models(std::span<const SubjectQuantile> subjects) {
    std::vector<QuantileFunction> q_ctl, q_mtbi;
    std::vector<CovariateVector> z_ctl, z_mtbi;
    for (const auto& s : subjects) {
        if (!s.label.has_value()) {
            throw InvalidInput("fit_group_models: subject '" + s.id + "' has no label");
        }
        if (*s.label == Label::control) {
            q_ctl.push_back(s.quantile);
            z_ctl.push_back(s.covariates);
        } else {
            q_mtbi.push_back(s.quantile);
            z_mtbi.push_back(s.covariates);
        }
    }
    if (q_ctl.empty() || q_mtbi.empty()) {
        throw InvalidInput("fit_group_models: both classes must be present");
    }
    return GroupModels{fit_frechet_model(q_ctl, z_ctl, "control"),
                       fit_frechet_model(q_mtbi, z_mtbi, "mtbi")};
}

std::vector<LabeledQuantile> to_labeled(std::span<const SubjectQuantile> subjects) {
    std::vector<LabeledQuantile> out;
    out.reserve(subjects.size());
    for (const auto& s : subjects) {
        if (!s.label.has_value()) {
            throw InvalidInput("to_labeled: subject '" + s.id + "' has no label");
        }
        out.push_back(LabeledQuantile{s.quantile, s.covariates, *s.label});
    }
    return out;
}

}  // namespace neurowf
