// neurowf: quantile-based Wasserstein-Fréchet regression toolkit.
//
// Subcommands: kde, kde-bench, fit, predict, sim, ensemble. All tabular I/O is
// CSV, models are JSON. Exit codes: 0 success, 2 input error, 3 insufficient
// data, 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "neurowf/classifier.hpp"
#include "neurowf/csv.hpp"
#include "neurowf/diffusion_kde.hpp"
#include "neurowf/ensemble.hpp"
#include "neurowf/error.hpp"
#include "neurowf/grid_dct.hpp"
#include "neurowf/model_io.hpp"
#include "neurowf/parallel.hpp"
#include "neurowf/pipeline.hpp"
#include "neurowf/quantiles.hpp"
#include "neurowf/rng.hpp"
#include "neurowf/simulation.hpp"
#include "neurowf/wasserstein.hpp"

namespace {

using nlohmann::json;
using namespace neurowf;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInsufficientData = 3;
constexpr int kExitNumerical = 4;

/// Cohort is missing a class or is otherwise too small to fit.
class InsufficientData : public std::runtime_error {
public:
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

/// Too many subjects failed bandwidth convergence.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

struct KGridSpec {
    double lo = 0.5, hi = 2.0, step = 0.05;
};

KGridSpec parse_kgrid(const std::string& text) {
    KGridSpec spec;
    std::istringstream in(text);
    char c1 = 0, c2 = 0;
    if (!(in >> spec.lo >> c1 >> spec.hi >> c2 >> spec.step) || c1 != ':' || c2 != ':' ||
        !in.eof()) {
        throw InvalidInput("--kgrid must look like lo:hi:step, got '" + text + "'");
    }
    return spec;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        const long v = std::stol(token);
        if (v < 1) throw InvalidInput("--n-list entries must be positive, got '" + token + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw InvalidInput("--n-list is empty");
    return out;
}

// ---------------------------------------------------------------------------
// CSV cohort loading shared by fit and predict

struct SubjectRow {
    CovariateVector covariates;  // (age, gender)
    std::optional<Label> label;
};

std::map<std::string, SubjectRow> read_subjects_csv(const std::string& path,
                                                    bool label_required) {
    const CsvTable table = read_csv(path);
    const std::size_t id_col = table.require_column("subject_id");
    const std::size_t age_col = table.require_column("age");
    const std::size_t gender_col = table.require_column("gender");
    const auto label_col = table.column("label");
    if (label_required && !label_col.has_value()) {
        throw InvalidInput(path + ": missing required column 'label'");
    }

    std::map<std::string, SubjectRow> subjects;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        const std::string& id = row[id_col];
        if (subjects.count(id) > 0) {
            throw InvalidInput(path + ": duplicate subject_id '" + id + "' at line " +
                               std::to_string(line));
        }
        SubjectRow subject;
        subject.covariates = {parse_csv_double(row[age_col], line, "age"),
                              parse_csv_double(row[gender_col], line, "gender")};
        if (label_col.has_value() && !row[*label_col].empty()) {
            subject.label = parse_label(row[*label_col]);
        }
        subjects.emplace(id, std::move(subject));
    }
    if (subjects.empty()) throw InvalidInput(path + ": no subjects");
    return subjects;
}

// Joins the long-format samples file against the subjects table. The returned
// cohort is ordered by subject_id, which fixes the internal subject order
// regardless of input row order.
std::vector<SampleSet> read_cohort(const std::string& samples_path,
                                   const std::string& subjects_path, bool label_required) {
    const auto subjects = read_subjects_csv(subjects_path, label_required);

    const CsvTable samples = read_csv(samples_path);
    const std::size_t id_col = samples.require_column("subject_id");
    const std::size_t value_col = samples.require_column("value");

    std::map<std::string, std::vector<double>> values;
    for (std::size_t r = 0; r < samples.rows.size(); ++r) {
        const std::string& id = samples.rows[r][id_col];
        if (subjects.count(id) == 0) {
            throw InvalidInput(samples_path + ": subject '" + id +
                               "' is not present in the subjects file");
        }
        values[id].push_back(
            parse_csv_double(samples.rows[r][value_col], samples.line_numbers[r], "value"));
    }

    std::vector<SampleSet> cohort;
    for (const auto& [id, subject] : subjects) {
        auto it = values.find(id);
        if (it == values.end()) {
            throw InvalidInput(subjects_path + ": subject '" + id +
                               "' has no rows in the samples file");
        }
        SampleSet s;
        s.id = id;
        s.values = std::move(it->second);
        s.covariates = subject.covariates;
        s.label = subject.label;
        cohort.push_back(std::move(s));
    }
    return cohort;
}

void require_bandwidth_health(std::span<const SubjectQuantile> subjects) {
    std::size_t failed = 0;
    for (const auto& s : subjects) {
        if (!s.bandwidth_converged) ++failed;
    }
    if (2 * failed > subjects.size()) {
        throw NumericalFailure("bandwidth selection failed to converge on " +
                               std::to_string(failed) + " of " +
                               std::to_string(subjects.size()) + " subjects");
    }
}

// ---------------------------------------------------------------------------
// kde

int cmd_kde(const std::string& input, const std::string& out, std::size_t n_grid, double pad) {
    const CsvTable table = read_csv(input);
    const std::size_t value_col = table.require_column("value");
    if (table.rows.empty()) throw InvalidInput(input + ": no data rows");

    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        values.push_back(
            parse_csv_double(table.rows[r][value_col], table.line_numbers[r], "value"));
    }

    const BinnedData binned = bin_samples(values, n_grid, pad);
    const BandwidthResult bw = select_bandwidth(binned);
    const DensityEstimate est = estimate_density(binned, bw);
    const std::vector<double> levels = standard_levels();
    const std::vector<double> quantiles =
        monotone_refit(invert_cdf(est.grid, est.cdf, levels));

    const double range = binned.range();
    json stages = json::array();
    for (const auto& [s, t_s] : bw.stages) stages.push_back(json::array({s, t_s}));
    json j{{"n_samples", binned.n_samples},
           {"lo", binned.lo},
           {"hi", binned.hi},
           {"grid", est.grid},
           {"density", est.density},
           {"cdf", est.cdf},
           {"levels", levels},
           {"quantiles", quantiles},
           {"bandwidth",
            {{"t_star", bw.t_star},
             {"t_cdf", bw.t_cdf},
             {"h", std::sqrt(bw.t_star) * range},
             {"h_cdf", std::sqrt(bw.t_cdf) * range},
             {"converged", bw.converged},
             {"stages", std::move(stages)}}}};
    write_file_atomic(out, j.dump());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// kde-bench

int cmd_kde_bench(const std::string& n_list_text, std::size_t reps, std::uint64_t seed,
                  const std::string& out, std::size_t n_grid, double pad) {
    const auto n_list = parse_n_list(n_list_text);
    if (reps < 1) throw InvalidInput("--reps must be >= 1");

    const MixtureDensity mix;
    std::string csv = csv_row({"n", "rep", "tv"});
    for (const std::size_t n : n_list) {
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto samples = sample_mixture(mix, n, Rng::derive(seed, n, rep));
            const BinnedData binned = bin_samples(samples, n_grid, pad);
            const DensityEstimate est = estimate_density(binned, select_bandwidth(binned));
            std::vector<double> truth(est.grid.size());
            for (std::size_t i = 0; i < est.grid.size(); ++i) {
                truth[i] = mixture_pdf(mix, est.grid[i]);
            }
            const double tv = total_variation(est.density, truth, est.grid);
            csv += csv_row({std::to_string(n), std::to_string(rep), format_double(tv)});
        }
    }
    write_file_atomic(out, csv);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const std::string& samples_path, const std::string& subjects_path,
            const std::string& out, std::size_t kfolds, const std::string& kgrid_text,
            std::uint64_t seed, std::size_t n_grid, double pad) {
    const auto cohort = read_cohort(samples_path, subjects_path, /*label_required=*/true);

    bool has_control = false, has_mtbi = false;
    for (const auto& s : cohort) {
        if (!s.label.has_value()) {
            throw InvalidInput("subject '" + s.id + "' has an empty label");
        }
        (*s.label == Label::control ? has_control : has_mtbi) = true;
    }
    if (!has_control || !has_mtbi) {
        throw InsufficientData("cohort must contain both control and mtbi subjects");
    }

    PipelineOptions options;
    options.n_grid = n_grid;
    options.pad_fraction = pad;
    const auto quantiles = estimate_subject_quantiles(cohort, options);
    require_bandwidth_health(quantiles);

    const GroupModels models = fit_group_models(quantiles);
    const KGridSpec kspec = parse_kgrid(kgrid_text);
    const auto k_grid = make_k_grid(kspec.lo, kspec.hi, kspec.step);
    const double k = select_threshold(models.control, models.mtbi, to_labeled(quantiles), kfolds,
                                      k_grid, seed);

    ModelBundle bundle;
    bundle.control = models.control;
    bundle.mtbi = models.mtbi;
    bundle.k = k;
    bundle.n_grid = n_grid;
    bundle.pad_fraction = pad;
    bundle.seed = seed;
    bundle.config_hash = config_hash_of("fit|grid=" + std::to_string(n_grid) +
                                        "|pad=" + format_double(pad) +
                                        "|kfolds=" + std::to_string(kfolds) + "|kgrid=" +
                                        kgrid_text + "|seed=" + std::to_string(seed));
    save_model_bundle(out, bundle);
    std::cout << "fitted " << cohort.size() << " subjects, selected k = " << format_double(k)
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// predict

int cmd_predict(const std::string& model_path, const std::string& samples_path,
                const std::string& subjects_path, const std::string& out) {
    const ModelBundle bundle = load_model_bundle(model_path);
    if (bundle.control.levels != standard_levels()) {
        throw InvalidInput(model_path + ": model quantile grid is not the standard 1025-level grid");
    }
    const auto cohort = read_cohort(samples_path, subjects_path, /*label_required=*/false);
    for (const auto& s : cohort) {
        if (s.covariates.size() != bundle.control.n_covariates()) {
            throw InvalidInput("covariate dimension differs from the model");
        }
    }

    PipelineOptions options;
    options.n_grid = bundle.n_grid;
    options.pad_fraction = bundle.pad_fraction;
    const auto quantiles = estimate_subject_quantiles(cohort, options);
    require_bandwidth_health(quantiles);

    std::vector<Decision> decisions(quantiles.size());
    parallel_for(quantiles.size(), [&](std::size_t i) {
        decisions[i] = classify(bundle.control, bundle.mtbi, quantiles[i].quantile,
                                quantiles[i].covariates, bundle.k);
    });

    std::string csv = csv_row({"subject_id", "d1", "d2", "k", "label"});
    for (std::size_t i = 0; i < quantiles.size(); ++i) {
        const Decision& d = decisions[i];
        csv += csv_row({quantiles[i].id, format_double(d.d1), format_double(d.d2),
                        format_double(d.k), to_string(d.label)});
    }
    write_file_atomic(out, csv);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sim

ExperimentConfig experiment_from_json(const json& cfg, std::uint64_t seed) {
    ExperimentConfig ec;
    ec.seed = seed;
    ec.control.n_subjects = cfg.value("subjects_per_group", std::size_t{400});
    ec.control.n_obs_per_subject = cfg.value("obs_per_subject", std::size_t{500});
    ec.train_fraction = cfg.value("split", 0.7);
    if (cfg.contains("nu1_grid")) ec.nu1_grid = cfg.at("nu1_grid").get<std::vector<double>>();
    if (cfg.contains("sigma1_grid")) {
        ec.sigma1_grid = cfg.at("sigma1_grid").get<std::vector<double>>();
    }
    if (cfg.contains("control")) {
        const json& c = cfg.at("control");
        ec.control.nu1 = c.value("nu1", ec.control.nu1);
        ec.control.nu2 = c.value("nu2", ec.control.nu2);
        ec.control.sigma1 = c.value("sigma1", ec.control.sigma1);
        ec.control.sigma2 = c.value("sigma2", ec.control.sigma2);
    }
    if (cfg.contains("case")) {
        const json& c = cfg.at("case");
        ec.case_nu2 = c.value("nu2", ec.case_nu2);
        ec.case_sigma2 = c.value("sigma2", ec.case_sigma2);
    }
    ec.n_grid = cfg.value("n_grid", std::size_t{4096});
    ec.pad_fraction = cfg.value("pad", 0.1);
    ec.cv_folds = cfg.value("kfolds", std::size_t{5});
    if (cfg.contains("kgrid")) {
        const KGridSpec spec = parse_kgrid(cfg.at("kgrid").get<std::string>());
        ec.k_lo = spec.lo;
        ec.k_hi = spec.hi;
        ec.k_step = spec.step;
    }
    return ec;
}

int cmd_sim(const std::string& config_path, const std::string& out_dir) {
    json cfg = json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw InvalidInput("cannot open '" + config_path + "'");
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw InvalidInput(config_path + ": invalid JSON (" + e.what() + ")");
        }
    }
    std::vector<std::uint64_t> seeds{1};
    if (cfg.contains("seeds")) seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
    if (seeds.empty()) throw InvalidInput("config: 'seeds' must be nonempty");

    std::filesystem::create_directories(out_dir);

    std::string csv = csv_row({"nu1", "sigma1", "acc_wf", "acc_linear", "k_selected", "seed"});
    double sum_wf = 0.0, sum_linear = 0.0;
    std::size_t n_rows = 0;
    for (const std::uint64_t seed : seeds) {
        const ExperimentConfig ec = experiment_from_json(cfg, seed);
        for (const CellResult& r : run_experiment_3_2(ec)) {
            csv += csv_row({format_double(r.nu1), format_double(r.sigma1),
                            format_double(r.acc_wf), format_double(r.acc_linear),
                            format_double(r.k_selected), std::to_string(r.seed)});
            sum_wf += r.acc_wf;
            sum_linear += r.acc_linear;
            ++n_rows;
        }
    }
    write_file_atomic(out_dir + "/results.csv", csv);

    json summary{{"rows", n_rows},
                 {"seeds", seeds},
                 {"mean_acc_wf", sum_wf / static_cast<double>(n_rows)},
                 {"mean_acc_linear", sum_linear / static_cast<double>(n_rows)},
                 {"config", cfg}};
    write_file_atomic(out_dir + "/summary.json", summary.dump());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// ensemble

PredictionMatrix read_channels_csv(const std::string& path, std::vector<std::string>* ids_out) {
    const CsvTable table = read_csv(path);
    const std::size_t id_col = table.require_column("subject_id");
    if (table.header.size() < 2) throw InvalidInput(path + ": no channel columns");
    if (table.rows.empty()) throw InvalidInput(path + ": no data rows");

    // canonical subject order by id
    std::vector<std::size_t> order(table.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return table.rows[a][id_col] < table.rows[b][id_col];
    });

    PredictionMatrix Z;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c != id_col) Z.column_names.push_back(table.header[c]);
    }
    Z.rows = table.rows.size();
    Z.data.assign(Z.rows * Z.cols(), 0);
    ids_out->clear();
    for (std::size_t r = 0; r < order.size(); ++r) {
        const auto& row = table.rows[order[r]];
        const std::size_t line = table.line_numbers[order[r]];
        ids_out->push_back(row[id_col]);
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c == id_col) continue;
            const double v = parse_csv_double(row[c], line, table.header[c]);
            if (v != 0.0 && v != 1.0) {
                throw InvalidInput(path + ": line " + std::to_string(line) + ": column '" +
                                   table.header[c] + "' must be 0 or 1");
            }
            Z.set(r, out_c++, static_cast<std::uint8_t>(v));
        }
    }
    return Z;
}

int cmd_ensemble(const std::string& channels_path, const std::string& labels_path,
                 const std::string& out, const std::string& predict_channels,
                 const std::string& predict_out, const ForestConfig& config) {
    std::vector<std::string> ids;
    const PredictionMatrix Z = read_channels_csv(channels_path, &ids);

    const CsvTable labels_table = read_csv(labels_path);
    const std::size_t id_col = labels_table.require_column("subject_id");
    const std::size_t label_col = labels_table.require_column("label");
    std::map<std::string, Label> label_of;
    for (const auto& row : labels_table.rows) {
        label_of[row[id_col]] = parse_label(row[label_col]);
    }
    std::vector<Label> y;
    for (const auto& id : ids) {
        auto it = label_of.find(id);
        if (it == label_of.end()) {
            throw InvalidInput(labels_path + ": no label for subject '" + id + "'");
        }
        y.push_back(it->second);
    }
    std::size_t n_control = 0;
    for (const Label l : y) {
        if (l == Label::control) ++n_control;
    }
    if (n_control < 2 || y.size() - n_control < 2) {
        throw InsufficientData("need at least 2 subjects per class to fit the forest");
    }

    const ForestModel model = fit_forest(Z, y, config);
    save_forest(out, model);

    if (!predict_channels.empty()) {
        if (predict_out.empty()) throw InvalidInput("--predict-out required with --predict-channels");
        std::vector<std::string> test_ids;
        const PredictionMatrix Zt = read_channels_csv(predict_channels, &test_ids);
        if (Zt.column_names != Z.column_names) {
            throw InvalidInput(predict_channels + ": channel columns differ from training");
        }
        const auto predictions = predict_forest(model, Zt);
        std::string csv = csv_row({"subject_id", "label"});
        for (std::size_t i = 0; i < test_ids.size(); ++i) {
            csv += csv_row({test_ids[i], to_string(predictions[i])});
        }
        write_file_atomic(predict_out, csv);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wasserstein-Fréchet regression on quantile functions: subject-level "
                 "diffusion-KDE estimation, covariate-matched prototype distributions, and "
                 "Wasserstein-distance classification"};
    app.require_subcommand(1);

    // kde
    std::string kde_input, kde_out;
    std::size_t kde_grid = 4096;
    double kde_pad = 0.1;
    auto* kde = app.add_subcommand("kde", "Estimate density/CDF/quantiles for one sample");
    kde->add_option("--input", kde_input, "CSV with a numeric 'value' column")->required();
    kde->add_option("--out", kde_out, "output JSON path")->required();
    kde->add_option("--grid", kde_grid, "grid size (power of two)");
    kde->add_option("--pad", kde_pad, "grid padding fraction per side");

    // kde-bench
    std::string bench_nlist = "50,100,200,400", bench_out;
    std::size_t bench_reps = 30, bench_grid = 4096;
    std::uint64_t bench_seed = 1;
    double bench_pad = 0.1;
    auto* bench = app.add_subcommand("kde-bench",
                                     "Total-variation benchmark against the Gaussian mixture");
    bench->add_option("--n-list", bench_nlist, "comma-separated sample sizes");
    bench->add_option("--reps", bench_reps, "replications per sample size");
    bench->add_option("--seed", bench_seed, "master seed");
    bench->add_option("--out", bench_out, "output CSV path")->required();
    bench->add_option("--grid", bench_grid, "grid size (power of two)");
    bench->add_option("--pad", bench_pad, "grid padding fraction per side");

    // fit
    std::string fit_samples, fit_subjects, fit_out, fit_kgrid = "0.5:2.0:0.05";
    std::size_t fit_kfolds = 5, fit_grid = 4096;
    std::uint64_t fit_seed = 1;
    double fit_pad = 0.1;
    auto* fit = app.add_subcommand("fit", "Fit group models and select the threshold");
    fit->add_option("--samples", fit_samples, "CSV (subject_id,value) long format")->required();
    fit->add_option("--subjects", fit_subjects, "CSV (subject_id,age,gender,label)")->required();
    fit->add_option("--out", fit_out, "output model JSON path")->required();
    fit->add_option("--kfolds", fit_kfolds, "cross-validation folds for threshold selection");
    fit->add_option("--kgrid", fit_kgrid, "threshold grid lo:hi:step");
    fit->add_option("--seed", fit_seed, "seed for the fold shuffle");
    fit->add_option("--grid", fit_grid, "KDE grid size (power of two)");
    fit->add_option("--pad", fit_pad, "KDE padding fraction per side");

    // predict
    std::string pred_model, pred_samples, pred_subjects, pred_out;
    auto* pred = app.add_subcommand("predict", "Classify subjects with a fitted model");
    pred->add_option("--model", pred_model, "model JSON from fit")->required();
    pred->add_option("--samples", pred_samples, "CSV (subject_id,value) long format")->required();
    pred->add_option("--subjects", pred_subjects, "CSV (subject_id,age,gender)")->required();
    pred->add_option("--out", pred_out, "output CSV path")->required();

    // sim
    std::string sim_config, sim_out_dir;
    auto* sim = app.add_subcommand("sim", "Two-group simulation study over the (nu1,sigma1) grid");
    sim->add_option("--config", sim_config, "JSON config (defaults reproduce the 24-cell table)");
    sim->add_option("--out-dir", sim_out_dir, "output directory")->required();

    // ensemble
    std::string ens_channels, ens_labels, ens_out, ens_pred_channels, ens_pred_out;
    ForestConfig ens_config;
    auto* ens = app.add_subcommand("ensemble", "Fit the channel-decision random forest");
    ens->add_option("--channels", ens_channels, "CSV (subject_id, one 0/1 column per channel)")
        ->required();
    ens->add_option("--labels", ens_labels, "CSV (subject_id,label)")->required();
    ens->add_option("--out", ens_out, "output forest JSON path")->required();
    ens->add_option("--predict-channels", ens_pred_channels,
                    "optional channels CSV to classify with the fitted forest");
    ens->add_option("--predict-out", ens_pred_out, "output CSV for --predict-channels");
    ens->add_option("--trees", ens_config.n_trees, "number of trees");
    ens->add_option("--depth", ens_config.max_depth, "maximum tree depth");
    ens->add_option("--mtry", ens_config.features_per_split,
                    "features per split (0 = ceil(sqrt(columns)))");
    ens->add_option("--seed", ens_config.seed, "forest seed");

    CLI11_PARSE(app, argc, argv);

    const std::function<int()> body = [&]() -> int {
        if (kde->parsed()) return cmd_kde(kde_input, kde_out, kde_grid, kde_pad);
        if (bench->parsed()) {
            return cmd_kde_bench(bench_nlist, bench_reps, bench_seed, bench_out, bench_grid,
                                 bench_pad);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_samples, fit_subjects, fit_out, fit_kfolds, fit_kgrid, fit_seed,
                           fit_grid, fit_pad);
        }
        if (pred->parsed()) return cmd_predict(pred_model, pred_samples, pred_subjects, pred_out);
        if (sim->parsed()) return cmd_sim(sim_config, sim_out_dir);
        if (ens->parsed()) {
            return cmd_ensemble(ens_channels, ens_labels, ens_out, ens_pred_channels,
                                ens_pred_out, ens_config);
        }
        return kExitInput;
    };

    try {
        return body();
    } catch (const InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const NumericalFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SingularCovariance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const RankDeficient& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
