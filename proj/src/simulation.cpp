#include "neurowf/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "neurowf/error.hpp"
#include "neurowf/parallel.hpp"
#include "neurowf/rng.hpp"

namespace neurowf {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

// 70/30-style split of [0, n) into train/test index sets by a seeded shuffle.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n,
                                                                            double train_fraction,
                                                                            Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
    const auto n_train = static_cast<std::size_t>(
        std::round(train_fraction * static_cast<double>(n)));
    return {{idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train)},
            {idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end()}};
}

double subject_mean(const SampleSet& s) {
    double sum = 0.0;
    for (double v : s.values) sum += v;
    return sum / static_cast<double>(s.values.size());
}

}  // namespace

std::vector<double> sample_mixture(const MixtureDensity& mix, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidInput("sample_mixture: n must be >= 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        std::size_t c = 0;
        double cum = mix.weights[0];
        while (c + 1 < mix.weights.size() && u >= cum) cum += mix.weights[++c];
        out[i] = rng.normal(mix.means[c], mix.sds[c]);
    }
    return out;
}

double mixture_pdf(const MixtureDensity& mix, double x) {
    double pdf = 0.0;
    for (std::size_t c = 0; c < mix.weights.size(); ++c) {
        const double z = (x - mix.means[c]) / mix.sds[c];
        pdf += mix.weights[c] * kInvSqrt2Pi / mix.sds[c] * std::exp(-0.5 * z * z);
    }
    return pdf;
}

double total_variation(std::span<const double> p_grid, std::span<const double> q_grid,
                       std::span<const double> grid) {
    if (p_grid.size() != grid.size() || q_grid.size() != grid.size() || grid.size() < 2) {
        throw InvalidInput("total_variation: densities and grid must share a length >= 2");
    }
    double integral = 0.0;
    double prev = std::abs(p_grid[0] - q_grid[0]);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const double cur = std::abs(p_grid[j] - q_grid[j]);
        integral += 0.5 * (prev + cur) * (grid[j] - grid[j - 1]);
        prev = cur;
    }
    return 0.5 * integral;
}

std::vector<SampleSet> generate_group(const GroupConfig& config, Label label,
                                      const std::string& id_prefix) {
    if (config.n_obs_per_subject < 1 || config.n_subjects < 1) {
        throw InvalidInput("generate_group: need at least one subject and one observation");
    }
    if (!(config.sigma1 >= 0.0) || !(config.sigma2 >= 0.0)) {
        throw InvalidInput("generate_group: sigma1 and sigma2 must be >= 0");
    }
    Rng rng(config.seed);
    std::vector<SampleSet> out;
    out.reserve(config.n_subjects);
    for (std::size_t i = 0; i < config.n_subjects; ++i) {
        const double age = rng.uniform(config.age_min, config.age_max);
        const double gender = rng.uniform01() < 0.5 ? 0.0 : 1.0;
        const double b0 = rng.normal(0.0, config.b0_sd);
        const double b1 = rng.normal(config.nu1, config.sigma1);
        const double b2 = rng.normal(config.nu2, config.sigma2);
        const double mu = b0 + b1 * age + b2 * gender;
        const double var = 0.25 + config.sigma1 * config.sigma1 * age * age +
                           config.sigma2 * config.sigma2 * gender * gender;
        const double sd = std::sqrt(var);

        SampleSet s;
        s.id = id_prefix + std::to_string(i);
        s.covariates = {age, gender};
        s.label = label;
        s.values.resize(config.n_obs_per_subject);
        for (double& v : s.values) v = rng.normal(mu, sd);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<CellResult> run_experiment_3_2(const ExperimentConfig& config) {
    const std::size_t cells = config.nu1_grid.size() * config.sigma1_grid.size();
    std::vector<CellResult> results(cells);

    parallel_for(cells, [&](std::size_t cell) {
        const std::size_t ia = cell / config.sigma1_grid.size();
        const std::size_t ib = cell % config.sigma1_grid.size();
        const double nu1 = config.nu1_grid[ia];
        const double sigma1 = config.sigma1_grid[ib];
        const std::uint64_t cell_seed = Rng::derive(config.seed, ia + 1, ib + 1);

        GroupConfig ctl_cfg = config.control;
        ctl_cfg.seed = Rng::derive(cell_seed, 1);
        GroupConfig case_cfg = config.control;
        case_cfg.nu1 = nu1;
        case_cfg.sigma1 = sigma1;
        case_cfg.nu2 = config.case_nu2;
        case_cfg.sigma2 = config.case_sigma2;
        case_cfg.seed = Rng::derive(cell_seed, 2);

        auto controls = generate_group(ctl_cfg, Label::control, "ctl_");
        auto cases = generate_group(case_cfg, Label::mtbi, "mtbi_");

        Rng split_rng(Rng::derive(cell_seed, 3));
        const auto [ctl_train, ctl_test] =
            split_indices(controls.size(), config.train_fraction, split_rng);
        const auto [case_train, case_test] =
            split_indices(cases.size(), config.train_fraction, split_rng);

        std::vector<SampleSet> train, test;
        for (auto i : ctl_train) train.push_back(controls[i]);
        for (auto i : case_train) train.push_back(cases[i]);
        for (auto i : ctl_test) test.push_back(controls[i]);
        for (auto i : case_test) test.push_back(cases[i]);

        PipelineOptions options;
        options.n_grid = config.n_grid;
        options.pad_fraction = config.pad_fraction;
        const auto train_q = estimate_subject_quantiles(train, options);
        const auto test_q = estimate_subject_quantiles(test, options);

        const GroupModels models = fit_group_models(train_q);
        const auto k_grid = make_k_grid(config.k_lo, config.k_hi, config.k_step);
        const double k = select_threshold(models.control, models.mtbi, to_labeled(train_q),
                                          config.cv_folds, k_grid, Rng::derive(cell_seed, 4));

        std::vector<Label> wf_pred, actual;
        for (const auto& s : test_q) {
            wf_pred.push_back(
                classify(models.control, models.mtbi, s.quantile, s.covariates, k).label);
            actual.push_back(*s.label);
        }

        // linear baseline on subject means, same split
        std::vector<double> train_means;
        std::vector<CovariateVector> train_z;
        std::vector<Label> train_labels;
        for (const auto& s : train) {
            train_means.push_back(subject_mean(s));
            train_z.push_back(s.covariates);
            train_labels.push_back(*s.label);
        }
        const LinearBaselineModel baseline =
            fit_linear_baseline(train_means, train_z, train_labels);
        std::vector<Label> lin_pred;
        for (const auto& s : test) {
            lin_pred.push_back(classify_linear(baseline, s.covariates, subject_mean(s)));
        }

        CellResult& r = results[cell];
        r.nu1 = nu1;
        r.sigma1 = sigma1;
        r.acc_wf = compute_metrics(wf_pred, actual).acc;
        r.acc_linear = compute_metrics(lin_pred, actual).acc;
        r.k_selected = k;
        r.seed = config.seed;
    });
    return results;
}

}  // namespace neurowf
