// Acceptance suite: one check per release criterion, one PASS/FAIL line each.
// Returns the number of failed criteria. An optional argument restricts the
// run to a comma-separated list of criterion numbers (e.g. "1,3,7").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "neurowf/classifier.hpp"
#include "neurowf/diffusion_kde.hpp"
#include "neurowf/ensemble.hpp"
#include "neurowf/grid_dct.hpp"
#include "neurowf/model_io.hpp"
#include "neurowf/pipeline.hpp"
#include "neurowf/quantiles.hpp"
#include "neurowf/rng.hpp"
#include "neurowf/simulation.hpp"
#include "neurowf/wasserstein.hpp"
#include "oracles.hpp"

using namespace neurowf;
namespace fs = std::filesystem;

namespace {

struct CheckResult {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

// --------------------------------------------------------------- criterion 1

CheckResult criterion_kde_benchmark() {
    CheckResult result;
    const MixtureDensity mix;
    const std::vector<std::size_t> sizes{50, 100, 200, 400};
    std::map<std::size_t, double> medians;
    for (const std::size_t n : sizes) {
        std::vector<double> tvs;
        for (std::size_t rep = 0; rep < 30; ++rep) {
            const auto samples = sample_mixture(mix, n, Rng::derive(1001, n, rep));
            const BinnedData binned = bin_samples(samples, 4096, 0.1);
            const DensityEstimate est = estimate_density(binned, select_bandwidth(binned));
            std::vector<double> truth(est.grid.size());
            for (std::size_t i = 0; i < truth.size(); ++i) {
                truth[i] = mixture_pdf(mix, est.grid[i]);
            }
            tvs.push_back(total_variation(est.density, truth, est.grid));
        }
        medians[n] = oracles::median(tvs);
    }
    result.require(medians[50] <= 0.22, "median TV at n=50 is " + fmt(medians[50]));
    result.require(medians[400] <= 0.12, "median TV at n=400 is " + fmt(medians[400]));
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        result.require(medians[sizes[i]] < medians[sizes[i - 1]],
                       "medians not strictly decreasing at n=" + std::to_string(sizes[i]));
    }
    result.detail = "median TV: n50=" + fmt(medians[50]) + " n100=" + fmt(medians[100]) +
                    " n200=" + fmt(medians[200]) + " n400=" + fmt(medians[400]);
    return result;
}

// --------------------------------------------------------------- criterion 2

CheckResult criterion_spectral_vs_direct() {
    CheckResult result;
    Rng rng(2002);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 100 + rng.uniform_index(401);  // n <= 500
        std::vector<double> samples(n);
        const int shape = rep % 3;
        const double mu = rng.uniform(-2.0, 2.0);
        const double sd = rng.uniform(0.5, 2.0);
        for (double& s : samples) {
            if (shape == 2) s = mu + rng.uniform(-2.0, 2.0) * sd;
            else s = rng.normal(mu, sd);
        }
        // wide padding keeps the reflected-boundary cosine basis and the
        // whole-line double sum on the same footing (uniform-shaped data has
        // positive density at its extremes, so the margin must be generous)
        const BinnedData binned = bin_samples(samples, 4096, 1.0);
        const auto a = squared_dct_coefficients(dct_coefficients(binned));
        const BandwidthResult bw = select_bandwidth(binned);
        std::vector<double> rescaled(n);
        for (std::size_t i = 0; i < n; ++i) rescaled[i] = (samples[i] - binned.lo) / binned.range();

        for (int j = 1; j <= 3; ++j) {
            double t_j = bw.t_star;
            for (const auto& [s, t_s] : bw.stages) {
                if (s == j) t_j = t_s;
            }
            const double spectral = l2_norm_derivative_spectral(a, j, t_j, binned.range());
            const double direct = oracles::direct_l2_derivative_norm(rescaled, j, t_j);
            const double rel = std::abs(spectral - direct) / std::abs(direct);
            worst = std::max(worst, rel);
        }
    }
    result.require(worst <= 0.01, "worst relative error " + fmt(worst));
    result.detail = "worst relative error " + fmt(worst) + " over 20 datasets, j in {1,2,3}";
    return result;
}

// --------------------------------------------------------------- criterion 3

CheckResult criterion_gaussian_wasserstein() {
    CheckResult result;
    Rng rng(3003);
    const auto levels = standard_levels();
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const double mu1 = rng.uniform(-2.0, 2.0);
        const double mu2 = rng.uniform(-2.0, 2.0);
        const double s1 = rng.uniform(0.5, 3.0);
        const double s2 = rng.uniform(0.5, 3.0);
        const QuantileFunction qa{levels, oracles::gaussian_quantile_row(mu1, s1, levels)};
        const QuantileFunction qb{levels, oracles::gaussian_quantile_row(mu2, s2, levels)};
        const double computed = wasserstein_distance(qa, qb);
        const double exact = std::sqrt((mu1 - mu2) * (mu1 - mu2) + (s1 - s2) * (s1 - s2));
        worst = std::max(worst, std::abs(computed - exact));
    }
    result.require(worst <= 5e-3, "worst absolute error " + fmt(worst));
    result.detail = "worst |grid - closed form| = " + fmt(worst) + " over 50 pairs";
    return result;
}

// --------------------------------------------------------------- criterion 4

CheckResult criterion_experiment_3_2() {
    CheckResult result;
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::map<std::pair<double, double>, std::pair<double, double>> cell_sums;  // (wf, linear)
    double total_wf = 0.0, total_linear = 0.0;
    std::size_t rows = 0;
    for (const std::uint64_t seed : seeds) {
        ExperimentConfig config;
        config.control.n_subjects = 400;
        config.control.n_obs_per_subject = 500;
        config.seed = seed;
        for (const CellResult& r : run_experiment_3_2(config)) {
            cell_sums[{r.nu1, r.sigma1}].first += r.acc_wf;
            cell_sums[{r.nu1, r.sigma1}].second += r.acc_linear;
            total_wf += r.acc_wf;
            total_linear += r.acc_linear;
            ++rows;
        }
    }
    result.require(rows == 24 * seeds.size(), "unexpected row count");
    result.require(total_wf / static_cast<double>(rows) >=
                       total_linear / static_cast<double>(rows),
                   "grid-average WF accuracy " + fmt(total_wf / static_cast<double>(rows)) +
                       " below linear " + fmt(total_linear / static_cast<double>(rows)));

    double worst_margin = 1.0;
    for (const auto& [cell, sums] : cell_sums) {
        if (cell.second < 0.4) continue;  // margin applies to sigma1 >= 0.4
        const double wf = sums.first / static_cast<double>(seeds.size());
        const double lin = sums.second / static_cast<double>(seeds.size());
        worst_margin = std::min(worst_margin, wf - lin);
        result.require(wf >= lin + 0.03, "cell (nu1=" + fmt(cell.first) + ", sigma1=" +
                                             fmt(cell.second) + ") margin " + fmt(wf - lin));
    }
    result.detail = "mean WF acc " + fmt(total_wf / static_cast<double>(rows)) +
                    ", mean linear acc " + fmt(total_linear / static_cast<double>(rows)) +
                    ", worst high-sigma margin " + fmt(worst_margin);
    return result;
}

// --------------------------------------------------------------- criterion 5

CheckResult criterion_property_suites() {
    CheckResult result;
    Rng rng(5005);

    // monotone refit: exact monotonicity
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> q(5 + rng.uniform_index(300));
        for (double& v : q) v = rng.normal(0.0, 3.0);
        const auto r = monotone_refit(q);
        for (std::size_t j = 1; j < r.size(); ++j) {
            result.require(r[j] >= r[j - 1], "refit output not monotone");
        }
    }

    // PAVA against the brute-force QP oracle
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.uniform_index(12);
        std::vector<double> q(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = rng.normal(0.0, 1.0);
            w[i] = rng.uniform(0.1, 3.0);
        }
        const auto fast = monotone_refit(q, w);
        const auto exact = oracles::brute_force_isotonic(q, w);
        for (std::size_t i = 0; i < n; ++i) {
            result.require(std::abs(fast[i] - exact[i]) <= 1e-8, "PAVA disagrees with QP oracle");
        }
    }

    // weight normalization and prototype-at-mean, on random models
    const auto coarse = [](std::size_t m) {
        std::vector<double> levels(m);
        for (std::size_t j = 0; j < m; ++j) {
            levels[j] = static_cast<double>(j) / static_cast<double>(m - 1);
        }
        return levels;
    };
    const auto levels = coarse(33);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t p = 1 + rng.uniform_index(3);
        const std::size_t n = p + 2 + rng.uniform_index(30);  // full-rank covariance
        std::vector<QuantileFunction> qs;
        std::vector<CovariateVector> zs;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row(levels.size());
            double v = rng.normal(0.0, 1.0);
            for (double& x : row) {
                x = v;
                v += rng.uniform(0.0, 0.4);
            }
            qs.push_back({levels, std::move(row)});
            CovariateVector z(p);
            for (double& zv : z) zv = rng.uniform(-2.0, 2.0);
            zs.push_back(z);
        }
        const FrechetModel model = fit_frechet_model(qs, zs, "prop");

        CovariateVector z(p);
        for (double& zv : z) zv = rng.uniform(-3.0, 3.0);
        const auto weights = empirical_weights(model, z);
        double sum = 0.0;
        for (double w : weights) sum += w;
        result.require(std::abs(sum - static_cast<double>(n)) <= 1e-8,
                       "weight sum differs from n by " + fmt(sum - static_cast<double>(n)));

        const auto proto = prototype_quantile(model, model.z_bar);
        const auto mean = frechet_mean(model.quantile_matrix, model.levels);
        for (std::size_t j = 0; j < proto.values.size(); ++j) {
            result.require(std::abs(proto.values[j] - mean.values[j]) <= 1e-10,
                           "prototype at z_bar differs from the Fréchet mean");
        }
    }

    // density and CDF invariants on random datasets
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 30 + rng.uniform_index(300);
        std::vector<double> samples(n);
        const int shape = rep % 3;
        for (double& s : samples) {
            if (shape == 0) s = rng.normal(0.0, 1.0);
            else if (shape == 1) s = std::exp(rng.normal(0.0, 0.5));
            else s = rng.uniform(-1.0, 4.0);
        }
        const BinnedData binned = bin_samples(samples, 1024, 0.1);
        const BandwidthResult bw = select_bandwidth(binned);
        const DensityEstimate est = estimate_density(binned, bw);
        result.require(std::abs(oracles::trapezoid(est.density, est.grid) - 1.0) <= 1e-6,
                       "density integral off by more than 1e-6");
        result.require(est.cdf.back() == 1.0, "cdf does not end at exactly 1");
        for (std::size_t j = 1; j < est.cdf.size(); ++j) {
            result.require(est.cdf[j] >= est.cdf[j - 1], "cdf decreases");
        }
    }

    // model JSON round trip: prediction equality
    const fs::path tmp = fs::temp_directory_path() / "neurowf_acceptance_bundle.json";
    for (int rep = 0; rep < 200; ++rep) {
        const auto make_model = [&](const std::string& tag) {
            const std::size_t n = 2 + rng.uniform_index(5);
            std::vector<QuantileFunction> qs;
            std::vector<CovariateVector> zs;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> row(levels.size());
                double v = rng.normal(0.0, 1.0);
                for (double& x : row) {
                    x = v;
                    v += rng.uniform(0.0, 0.4);
                }
                qs.push_back({levels, std::move(row)});
                zs.push_back({rng.uniform(18.0, 90.0), rng.uniform01() < 0.5 ? 0.0 : 1.0});
            }
            return fit_frechet_model(qs, zs, tag);
        };
        ModelBundle bundle;
        bundle.control = make_model("control");
        bundle.mtbi = make_model("mtbi");
        bundle.k = rng.uniform(0.5, 2.0);
        bundle.config_hash = config_hash_of("acceptance");
        save_model_bundle(tmp.string(), bundle);
        const ModelBundle loaded = load_model_bundle(tmp.string());

        std::vector<double> row(levels.size());
        double v = rng.normal(0.0, 1.0);
        for (double& x : row) {
            x = v;
            v += rng.uniform(0.0, 0.4);
        }
        const QuantileFunction probe{levels, row};
        const CovariateVector z{rng.uniform(18.0, 90.0), 0.0};
        const Decision before = classify(bundle.control, bundle.mtbi, probe, z, bundle.k);
        const Decision after = classify(loaded.control, loaded.mtbi, probe, z, loaded.k);
        result.require(before.d1 == after.d1 && before.d2 == after.d2 &&
                           before.label == after.label,
                       "round-tripped model predicts differently");
    }
    std::error_code ec;
    fs::remove(tmp, ec);

    if (result.pass) result.detail = "7 property suites x 200 randomized cases";
    return result;
}

// --------------------------------------------------------------- criterion 6

CheckResult criterion_ensemble_trend() {
    CheckResult result;
    std::size_t wins = 0;
    std::vector<double> margins;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(Rng::derive(6006, seed));
        const std::size_t n_train = 300, n_test = 300, per_band = 20;
        const double flip[3] = {0.38, 0.44, 0.46};  // each band carries partial signal

        const auto gen = [&](std::size_t n, PredictionMatrix& Z, std::vector<Label>& y) {
            Z.rows = n;
            Z.column_names.clear();
            for (std::size_t c = 0; c < 3 * per_band; ++c) {
                Z.column_names.push_back("ch" + std::to_string(c));
            }
            Z.data.assign(n * 3 * per_band, 0);
            y.resize(n);
            for (std::size_t r = 0; r < n; ++r) {
                y[r] = (r % 2 == 0) ? Label::control : Label::mtbi;
                for (std::size_t b = 0; b < 3; ++b) {
                    for (std::size_t c = 0; c < per_band; ++c) {
                        const bool flipped = rng.uniform01() < flip[b];
                        const bool truth = y[r] == Label::mtbi;
                        Z.set(r, b * per_band + c, (truth != flipped) ? 1 : 0);
                    }
                }
            }
        };
        PredictionMatrix Ztr, Zte;
        std::vector<Label> ytr, yte;
        gen(n_train, Ztr, ytr);
        gen(n_test, Zte, yte);

        const auto band1 = [&](const PredictionMatrix& Z) {
            PredictionMatrix B;
            B.rows = Z.rows;
            for (std::size_t c = 0; c < per_band; ++c) B.column_names.push_back(Z.column_names[c]);
            B.data.assign(B.rows * per_band, 0);
            for (std::size_t r = 0; r < Z.rows; ++r) {
                for (std::size_t c = 0; c < per_band; ++c) B.set(r, c, Z.at(r, c));
            }
            return B;
        };
        ForestConfig config;
        config.seed = seed;
        const auto accuracy = [&](const PredictionMatrix& tr, const PredictionMatrix& te) {
            const auto pred = predict_forest(fit_forest(tr, ytr, config), te);
            std::size_t correct = 0;
            for (std::size_t r = 0; r < yte.size(); ++r) {
                if (pred[r] == yte[r]) ++correct;
            }
            return static_cast<double>(correct) / static_cast<double>(yte.size());
        };
        const double acc_all = accuracy(Ztr, Zte);
        const double acc_band1 = accuracy(band1(Ztr), band1(Zte));
        margins.push_back(acc_all - acc_band1);
        if (acc_all >= acc_band1 - 0.02) ++wins;
    }
    result.require(wins >= 18, "all-band forest held up in only " + std::to_string(wins) +
                                   " of 20 seeds");
    result.detail = "all-band >= band1 - 0.02 in " + std::to_string(wins) +
                    "/20 seeds, median margin " + fmt(oracles::median(margins));
    return result;
}

// --------------------------------------------------------------- criterion 7

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NEUROWF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CheckResult criterion_cli_determinism() {
    CheckResult result;
    const fs::path dir = fs::temp_directory_path() / "neurowf_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);

    // shared synthetic cohort
    {
        Rng rng(7007);
        std::ostringstream samples, subjects;
        samples << "subject_id,value\n";
        subjects << "subject_id,age,gender,label\n";
        for (int g = 0; g < 2; ++g) {
            for (int i = 0; i < 6; ++i) {
                const std::string id = (g == 0 ? "c" : "m") + std::to_string(i);
                subjects << id << "," << rng.uniform(18.0, 90.0) << "," << (i % 2) << ","
                         << (g == 0 ? "control" : "mtbi") << "\n";
                for (int k = 0; k < 80; ++k) {
                    samples << id << "," << rng.normal(g == 0 ? 0.0 : 6.0, 1.0) << "\n";
                }
            }
        }
        std::ofstream(dir / "samples.csv") << samples.str();
        std::ofstream(dir / "subjects.csv") << subjects.str();

        std::ostringstream values;
        values << "value\n";
        for (int i = 0; i < 200; ++i) values << rng.normal(3.0, 1.5) << "\n";
        std::ofstream(dir / "values.csv") << values.str();

        std::ostringstream channels, labels;
        channels << "subject_id,ch0,ch1\n";
        labels << "subject_id,label\n";
        for (int i = 0; i < 16; ++i) {
            channels << "s" << i << "," << (i % 2) << "," << (rng.uniform01() < 0.5 ? 0 : 1)
                     << "\n";
            labels << "s" << i << "," << (i % 2 ? "mtbi" : "control") << "\n";
        }
        std::ofstream(dir / "channels.csv") << channels.str();
        std::ofstream(dir / "labels.csv") << labels.str();

        std::ofstream(dir / "sim.json")
            << R"({"subjects_per_group": 16, "obs_per_subject": 40, "n_grid": 256,)"
            << R"( "kfolds": 2, "nu1_grid": [0.1, 0.7], "sigma1_grid": [0.1, 0.6],)"
            << R"( "seeds": [9]})";
    }

    const auto twice_identical = [&](const std::string& name, const std::string& args_template,
                                     const std::vector<std::string>& outputs) {
        for (int run = 1; run <= 2; ++run) {
            std::string args = args_template;
            std::size_t pos;
            while ((pos = args.find("{run}")) != std::string::npos) {
                args.replace(pos, 5, std::to_string(run));
            }
            const int code = run_cli(args);
            result.require(code == 0, name + " exited with code " + std::to_string(code));
        }
        for (const std::string& out : outputs) {
            const std::string a = slurp(dir / (out + ".1"));
            const std::string b = slurp(dir / (out + ".2"));
            result.require(!a.empty() && a == b, name + " output '" + out + "' differs");
        }
    };

    const std::string d = dir.string() + "/";
    twice_identical("kde",
                    "kde --input " + d + "values.csv --out " + d + "kde.json.{run} --grid 1024",
                    {"kde.json"});
    twice_identical("kde-bench",
                    "kde-bench --n-list 50,100 --reps 2 --seed 3 --grid 512 --out " + d +
                        "bench.csv.{run}",
                    {"bench.csv"});
    twice_identical("fit",
                    "fit --samples " + d + "samples.csv --subjects " + d +
                        "subjects.csv --grid 512 --kfolds 2 --seed 4 --out " + d +
                        "model.json.{run}",
                    {"model.json"});
    const int fit_code =
        run_cli("fit --samples " + d + "samples.csv --subjects " + d +
                "subjects.csv --grid 512 --kfolds 2 --seed 4 --out " + d + "model.json");
    result.require(fit_code == 0, "fit for predict failed");
    twice_identical("predict",
                    "predict --model " + d + "model.json --samples " + d +
                        "samples.csv --subjects " + d + "subjects.csv --out " + d +
                        "pred.csv.{run}",
                    {"pred.csv"});
    twice_identical("ensemble",
                    "ensemble --channels " + d + "channels.csv --labels " + d +
                        "labels.csv --trees 11 --seed 6 --out " + d +
                        "forest.json.{run} --predict-channels " + d +
                        "channels.csv --predict-out " + d + "fpred.csv.{run}",
                    {"forest.json", "fpred.csv"});
    for (int run = 1; run <= 2; ++run) {
        const int code = run_cli("sim --config " + d + "sim.json --out-dir " + d + "sim_out." +
                                 std::to_string(run));
        result.require(code == 0, "sim exited with code " + std::to_string(code));
    }
    result.require(slurp(dir / "sim_out.1/results.csv") == slurp(dir / "sim_out.2/results.csv"),
                   "sim results.csv differs between runs");
    result.require(slurp(dir / "sim_out.1/summary.json") == slurp(dir / "sim_out.2/summary.json"),
                   "sim summary.json differs between runs");

    if (result.pass) result.detail = "byte-identical outputs for all six subcommands";
    fs::remove_all(dir);
    return result;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    if (argc > 1) {
        std::istringstream in(argv[1]);
        std::string token;
        while (std::getline(in, token, ',')) selected.insert(std::stoi(token));
    }

    struct Criterion {
        int number;
        const char* name;
        double budget_seconds;
        CheckResult (*check)();
    };
    const std::vector<Criterion> criteria{
        {1, "KDE benchmark total-variation medians", 60.0, criterion_kde_benchmark},
        {2, "spectral derivative norm vs direct double sum", 30.0, criterion_spectral_vs_direct},
        {3, "Gaussian Wasserstein closed form on the level grid", 5.0,
         criterion_gaussian_wasserstein},
        {4, "two-group experiment: WF vs linear baseline", 900.0, criterion_experiment_3_2},
        {5, "randomized property suites", 120.0, criterion_property_suites},
        {6, "multi-band ensemble accuracy ordering", 120.0, criterion_ensemble_trend},
        {7, "CLI determinism under fixed seeds", 0.0, criterion_cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && selected.count(c.number) == 0) continue;
        const auto start = std::chrono::steady_clock::now();
        CheckResult result;
        try {
            result = c.check();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && elapsed > c.budget_seconds) {
            result.pass = false;
            result.detail += " [runtime " + fmt(elapsed) + "s over budget " +
                             fmt(c.budget_seconds) + "s]";
        }
        std::cout << (result.pass ? "PASS" : "FAIL") << " criterion " << c.number << ": "
                  << c.name << " (" << fmt(elapsed) << "s)"
                  << (result.detail.empty() ? "" : " — " + result.detail) << "\n";
        if (!result.pass) ++failures;
    }
    return failures;
}
