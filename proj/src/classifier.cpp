#include "neurowf/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "neurowf/error.hpp"
#include "neurowf/rng.hpp"

namespace neurowf {

namespace {

double f1_score(std::size_t tp, std::size_t fp, std::size_t fn) {
    const std::size_t denom = 2 * tp + fp + fn;
    if (denom == 0) return 1.0;  // vacuously perfect: no members and no mistakes
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double balanced_f1(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
    // control plays the positive role in the second term
    return 0.5 * (f1_score(tp, fp, fn) + f1_score(tn, fn, fp));
}

std::vector<double> ols_fit(const std::vector<double>& y,
                            const std::vector<const CovariateVector*>& z) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const auto p = static_cast<Eigen::Index>(z.front()->size());
    Eigen::MatrixXd design(n, p + 1);
    Eigen::VectorXd response(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (Eigen::Index c = 0; c < p; ++c) {
            design(i, c + 1) = (*z[static_cast<std::size_t>(i)])[static_cast<std::size_t>(c)];
        }
        response(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < p + 1) {
        throw RankDeficient("fit_linear_baseline: design matrix is rank deficient");
    }
    const Eigen::VectorXd coef = qr.solve(response);
    return {coef.data(), coef.data() + coef.size()};
}

double linear_predict(const std::vector<double>& coef, const CovariateVector& z) {
    if (coef.size() != z.size() + 1) {
        throw InvalidInput("classify_linear: covariate dimension mismatch");
    }
    double y = coef[0];
    for (std::size_t c = 0; c < z.size(); ++c) y += coef[c + 1] * z[c];
    return y;
}

}  // namespace

std::string to_string(Label label) { return label == Label::control ? "control" : "mtbi"; }

Label parse_label(const std::string& text) {
    if (text == "control") return Label::control;
    if (text == "mtbi") return Label::mtbi;
    throw InvalidInput("unknown label '" + text + "' (expected 'control' or 'mtbi')");
}

Decision classify(const FrechetModel& ctl, const FrechetModel& mtbi, const QuantileFunction& q0,
                  const CovariateVector& z0, double k) {
    if (!(k > 0.0)) throw InvalidInput("classify: threshold k must be positive");
    Decision d;
    d.k = k;
    d.d1 = wasserstein_distance(q0, prototype_quantile(ctl, z0));
    d.d2 = wasserstein_distance(q0, prototype_quantile(mtbi, z0));
    d.label = (d.d1 <= k * d.d2) ? Label::control : Label::mtbi;
    return d;
}

std::vector<double> make_k_grid(double lo, double hi, double step) {
    if (!(lo > 0.0) || !(step > 0.0) || hi < lo) {
        throw InvalidInput("make_k_grid: need 0 < lo <= hi and step > 0");
    }
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

double select_threshold(const FrechetModel& ctl, const FrechetModel& mtbi,
                        std::span<const LabeledQuantile> subjects, std::size_t folds,
                        std::span<const double> k_grid, std::uint64_t seed) {
    if (folds < 2) throw InvalidInput("select_threshold: need at least 2 folds");
    if (k_grid.empty()) throw InvalidInput("select_threshold: empty threshold grid");
    bool has_control = false;
    bool has_mtbi = false;
    for (const auto& s : subjects) {
        (s.label == Label::control ? has_control : has_mtbi) = true;
    }
    if (!has_control || !has_mtbi) {
        throw InvalidInput("select_threshold: both classes must be present");
    }

    const std::size_t n = subjects.size();
    std::vector<double> d1(n), d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Decision dec = classify(ctl, mtbi, subjects[i].quantile, subjects[i].covariates, 1.0);
        d1[i] = dec.d1;
        d2[i] = dec.d2;
    }

    // stratified fold assignment from a seeded shuffle within each class
    std::vector<std::size_t> fold_of(n, 0);
    Rng rng(Rng::derive(seed, 0x666f6c64ULL));  // "fold"
    for (const Label cls : {Label::control, Label::mtbi}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (subjects[i].label == cls) members.push_back(i);
        }
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[rng.uniform_index(i)]);
        }
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            fold_of[members[pos]] = pos % folds;
        }
    }

    double best_score = -1.0;
    double best_k = k_grid[0];
    for (const double k : k_grid) {
        double score_sum = 0.0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (fold_of[i] != f) continue;
                const bool predicted_mtbi = !(d1[i] <= k * d2[i]);
                const bool actual_mtbi = subjects[i].label == Label::mtbi;
                if (predicted_mtbi && actual_mtbi) ++tp;
                else if (!predicted_mtbi && !actual_mtbi) ++tn;
                else if (predicted_mtbi) ++fp;
                else ++fn;
            }
            score_sum += balanced_f1(tp, tn, fp, fn);
        }
        const double score = score_sum / static_cast<double>(folds);
        bool better = score > best_score;
        if (score == best_score) {
            const double dk = std::abs(k - 1.0);
            const double db = std::abs(best_k - 1.0);
            better = dk < db || (dk == db && k < best_k);
        }
        if (better) {
            best_score = score;
            best_k = k;
        }
    }
    return best_k;
}

LinearBaselineModel fit_linear_baseline(std::span<const double> subject_means,
                                        std::span<const CovariateVector> covariates,
                                        std::span<const Label> labels) {
    if (subject_means.size() != covariates.size() || subject_means.size() != labels.size() ||
        subject_means.empty()) {
        throw InvalidInput("fit_linear_baseline: input length mismatch or empty input");
    }
    std::vector<double> y_ctl, y_mtbi;
    std::vector<const CovariateVector*> z_ctl, z_mtbi;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Label::control) {
            y_ctl.push_back(subject_means[i]);
            z_ctl.push_back(&covariates[i]);
        } else {
            y_mtbi.push_back(subject_means[i]);
            z_mtbi.push_back(&covariates[i]);
        }
    }
    if (y_ctl.empty() || y_mtbi.empty()) {
        throw InvalidInput("fit_linear_baseline: both classes must be present");
    }
    const std::size_t p = covariates[0].size();
    if (y_ctl.size() < p + 1 || y_mtbi.size() < p + 1) {
        throw RankDeficient("fit_linear_baseline: fewer subjects than coefficients in a group");
    }
    return LinearBaselineModel{ols_fit(y_ctl, z_ctl), ols_fit(y_mtbi, z_mtbi)};
}

Label classify_linear(const LinearBaselineModel& model, const CovariateVector& z0, double ybar0) {
    const double pred_ctl = linear_predict(model.control_coef, z0);
    const double pred_mtbi = linear_predict(model.mtbi_coef, z0);
    return std::abs(pred_ctl - ybar0) <= std::abs(pred_mtbi - ybar0) ? Label::control
                                                                     : Label::mtbi;
}

Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> actual) {
    if (predicted.size() != actual.size() || predicted.empty()) {
        throw InvalidInput("compute_metrics: length mismatch or empty input");
    }
    Metrics m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool pred_mtbi = predicted[i] == Label::mtbi;
        const bool act_mtbi = actual[i] == Label::mtbi;
        if (pred_mtbi && act_mtbi) ++m.tp;
        else if (!pred_mtbi && !act_mtbi) ++m.tn;
        else if (pred_mtbi) ++m.fp;
        else ++m.fn;
    }
    const auto total = static_cast<double>(predicted.size());
    m.acc = static_cast<double>(m.tp + m.tn) / total;
    m.f1 = balanced_f1(m.tp, m.tn, m.fp, m.fn);
    return m;
}

}  // namespace neurowf
