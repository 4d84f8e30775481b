#include <doctest.h>

#include <cmath>
#include <vector>

#include "neurowf/error.hpp"
#include "neurowf/rng.hpp"
#include "neurowf/simulation.hpp"
#include "oracles.hpp"

using namespace neurowf;

TEST_CASE("mixture_pdf: normalization and mode ordering") {
    const MixtureDensity mix;
    const std::size_t n = 200001;
    std::vector<double> grid(n), pdf(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = 18.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        pdf[i] = mixture_pdf(mix, grid[i]);
    }
    CHECK(std::abs(oracles::trapezoid(pdf, grid) - 1.0) <= 1e-6);

    CHECK(mixture_pdf(mix, 9.5) > mixture_pdf(mix, 6.0));
    CHECK(mixture_pdf(mix, 6.0) > mixture_pdf(mix, 12.0));
}

TEST_CASE("sample_mixture: law of large numbers for the mean") {
    const MixtureDensity mix;
    const auto samples = sample_mixture(mix, 1000000, 424242);
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    CHECK(std::abs(mean - 8.7) <= 0.01);  // 0.3*6 + 0.6*9.5 + 0.1*12
}

TEST_CASE("sample_mixture: deterministic per seed") {
    const MixtureDensity mix;
    const auto a = sample_mixture(mix, 1000, 7);
    const auto b = sample_mixture(mix, 1000, 7);
    CHECK(a == b);
    const auto c = sample_mixture(mix, 1000, 8);
    CHECK(a != c);
}

TEST_CASE("total_variation: identity, disjoint supports, closed form") {
    const std::size_t n = 4001;
    std::vector<double> grid(n), p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = -5.0 + 20.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    const auto gauss = [](double x, double mu, double sd) {
        const double z = (x - mu) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * 3.14159265358979323846));
    };

    for (std::size_t i = 0; i < n; ++i) p[i] = q[i] = gauss(grid[i], 0.0, 1.0);
    CHECK(total_variation(p, q, grid) == 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        p[i] = gauss(grid[i], 0.0, 0.5);
        q[i] = gauss(grid[i], 10.0, 0.5);
    }
    CHECK(std::abs(total_variation(p, q, grid) - 1.0) <= 1e-3);

    // equal-variance Gaussians: TV = 2*Phi(delta/2) - 1
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = gauss(grid[i], 0.0, 1.0);
        q[i] = gauss(grid[i], 0.1, 1.0);
    }
    const double expected = 2.0 * oracles::normal_cdf(0.05) - 1.0;
    CHECK(std::abs(total_variation(p, q, grid) - expected) <= 1e-3);

    CHECK(std::abs(total_variation(p, q, grid) - total_variation(q, p, grid)) == 0.0);
    CHECK_THROWS_AS(total_variation(p, std::vector<double>(7, 0.0), grid), InvalidInput);
}

TEST_CASE("generate_group: stock control-group parameters") {
    const GroupConfig config;
    CHECK(config.nu1 == 0.1);
    CHECK(config.nu2 == 2.0);
    CHECK(config.sigma1 == 0.1);
    CHECK(config.sigma2 == 0.5);
    CHECK(config.age_min == 18.0);
    CHECK(config.age_max == 90.0);
}

TEST_CASE("generate_group: degenerate randomness pins the distribution") {
    GroupConfig config;
    config.sigma1 = 0.0;
    config.sigma2 = 0.0;
    config.b0_sd = 0.0;
    config.age_min = config.age_max = 50.0;
    config.n_subjects = 6;
    config.n_obs_per_subject = 100000;
    config.seed = 11;
    const auto group = generate_group(config, Label::control, "s");
    // all subjects with equal gender share mean nu1*50 + nu2*gender and sd 0.5
    for (const auto& s : group) {
        const double expected_mean = 0.1 * 50.0 + 2.0 * s.covariates[1];
        double mean = 0.0;
        for (double v : s.values) mean += v;
        mean /= static_cast<double>(s.values.size());
        CHECK(std::abs(mean - expected_mean) <= 0.01);
    }
}

TEST_CASE("generate_group: per-subject variance follows the formula") {
    GroupConfig config;
    config.n_subjects = 5;
    config.n_obs_per_subject = 100000;
    config.seed = 13;
    const auto group = generate_group(config, Label::control, "s");
    for (const auto& s : group) {
        const double age = s.covariates[0];
        const double gender = s.covariates[1];
        const double expected =
            0.25 + config.sigma1 * config.sigma1 * age * age +
            config.sigma2 * config.sigma2 * gender * gender;
        double mean = 0.0;
        for (double v : s.values) mean += v;
        mean /= static_cast<double>(s.values.size());
        double var = 0.0;
        for (double v : s.values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(s.values.size() - 1);
        CHECK(std::abs(var - expected) <= 0.02 * expected);
    }
}

TEST_CASE("generate_group: subject means converge to nu1*age + nu2*gender") {
    GroupConfig config;
    config.age_min = config.age_max = 50.0;
    config.n_subjects = 4000;
    config.n_obs_per_subject = 10;
    config.seed = 17;
    const auto group = generate_group(config, Label::control, "s");
    double sum1 = 0.0;
    std::size_t count1 = 0;
    for (const auto& s : group) {
        if (s.covariates[1] != 1.0) continue;
        double mean = 0.0;
        for (double v : s.values) mean += v;
        sum1 += mean / static_cast<double>(s.values.size());
        ++count1;
    }
    REQUIRE(count1 > 100);
    const double expected = 0.1 * 50.0 + 2.0;  // mu* at (50, 1)
    CHECK(std::abs(sum1 / static_cast<double>(count1) - expected) <= 0.5);
}

TEST_CASE("generate_group: seeds are reproducible, different seeds indistinguishable") {
    GroupConfig config;
    config.n_subjects = 50;
    config.n_obs_per_subject = 200;
    config.seed = 19;
    const auto a = generate_group(config, Label::control, "s");
    const auto b = generate_group(config, Label::control, "s");
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].values == b[i].values);
        CHECK(a[i].covariates == b[i].covariates);
    }

    // smoke comparison of two seeds: one observation per subject makes the
    // pooled samples independent draws from the marginal mixture
    GroupConfig marginal;
    marginal.n_subjects = 4000;
    marginal.n_obs_per_subject = 1;
    marginal.seed = 19;
    const auto ga = generate_group(marginal, Label::control, "s");
    marginal.seed = 20;
    const auto gc = generate_group(marginal, Label::control, "s");
    std::vector<double> pooled_a, pooled_c;
    for (const auto& s : ga) pooled_a.push_back(s.values[0]);
    for (const auto& s : gc) pooled_c.push_back(s.values[0]);
    CHECK(oracles::ks_two_sample_pvalue(pooled_a, pooled_c) > 0.01);
}

TEST_CASE("run_experiment_3_2: indistinguishable groups score near chance") {
    ExperimentConfig config;
    config.control.n_subjects = 200;
    config.control.n_obs_per_subject = 200;
    config.nu1_grid = {0.1};    // identical to the control parameters
    config.sigma1_grid = {0.1};
    config.case_nu2 = 2.0;
    config.case_sigma2 = 0.5;
    config.n_grid = 1024;
    config.seed = 21;
    const auto results = run_experiment_3_2(config);
    REQUIRE(results.size() == 1);
    CHECK(std::abs(results[0].acc_wf - 0.5) <= 0.07);
    CHECK(std::abs(results[0].acc_linear - 0.5) <= 0.07);
}

TEST_CASE("run_experiment_3_2: variance-only shift favors the distributional method") {
    // matched means (nu1 equal to control), inflated sigma1: the linear
    // baseline sees nothing while the Wasserstein pipeline does
    ExperimentConfig config;
    config.control.n_subjects = 200;
    config.control.n_obs_per_subject = 200;
    config.nu1_grid = {0.1};
    config.sigma1_grid = {0.6};
    config.n_grid = 1024;
    config.seed = 23;
    const auto results = run_experiment_3_2(config);
    REQUIRE(results.size() == 1);
    CHECK(results[0].acc_wf > results[0].acc_linear);
    CHECK(results[0].acc_wf >= 0.8);
    CHECK(results[0].acc_linear <= 0.65);
}

TEST_CASE("run_experiment_3_2: nu1 = 0.7, sigma1 = 0.6 cell beats the linear baseline") {
    ExperimentConfig config;
    config.control.n_subjects = 200;
    config.control.n_obs_per_subject = 200;
    config.nu1_grid = {0.7};
    config.sigma1_grid = {0.6};
    config.n_grid = 1024;
    config.seed = 25;
    const auto results = run_experiment_3_2(config);
    REQUIRE(results.size() == 1);
    CHECK(results[0].acc_wf > results[0].acc_linear);
}

TEST_CASE("run_experiment_3_2: full default grid has 24 cells") {
    ExperimentConfig config;
    config.control.n_subjects = 30;
    config.control.n_obs_per_subject = 60;
    config.n_grid = 256;
    config.cv_folds = 3;
    config.seed = 27;
    const auto results = run_experiment_3_2(config);
    CHECK(results.size() == 24);
    for (const auto& r : results) {
        CHECK(r.acc_wf >= 0.0);
        CHECK(r.acc_wf <= 1.0);
        CHECK(r.acc_linear >= 0.0);
        CHECK(r.acc_linear <= 1.0);
        CHECK(r.k_selected >= 0.5);
        CHECK(r.k_selected <= 2.0);
    }
}
