#include "neurowf/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "neurowf/error.hpp"
#include "neurowf/rng.hpp"

namespace neurowf {

namespace {

struct ClassCounts {
    std::size_t c0 = 0;  // control
    std::size_t c1 = 0;  // mtbi

    std::size_t total() const { return c0 + c1; }
    double gini() const {
        const double n = static_cast<double>(total());
        if (n == 0.0) return 0.0;
        const double p0 = static_cast<double>(c0) / n;
        const double p1 = static_cast<double>(c1) / n;
        return 1.0 - p0 * p0 - p1 * p1;
    }
    Label majority() const { return c1 > c0 ? Label::mtbi : Label::control; }
};

class TreeBuilder {
public:
    TreeBuilder(const PredictionMatrix& Z, std::span<const Label> y, const ForestConfig& cfg,
                std::size_t features_per_split, Rng& rng)
        : Z_(Z), y_(y), cfg_(cfg), mtry_(std::min(features_per_split, Z.cols())), rng_(rng),
          feature_pool_(Z.cols()) {
        for (std::size_t f = 0; f < feature_pool_.size(); ++f) feature_pool_[f] = f;
    }

    DecisionTree build(std::vector<std::uint32_t> rows) {
        DecisionTree tree;
        grow(tree, std::move(rows), 0);
        return tree;
    }

private:
    int grow(DecisionTree& tree, std::vector<std::uint32_t> rows, std::size_t depth) {
        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        ClassCounts counts;
        for (const auto r : rows) {
            (y_[r] == Label::control ? counts.c0 : counts.c1)++;
        }
        tree.nodes[index].count_control = counts.c0;
        tree.nodes[index].count_mtbi = counts.c1;
        tree.nodes[index].label = counts.majority();

        if (depth >= cfg_.max_depth || counts.c0 == 0 || counts.c1 == 0) return index;

        // sample mtry distinct candidate features (partial Fisher-Yates)
        for (std::size_t i = 0; i < mtry_; ++i) {
            const std::size_t j = i + rng_.uniform_index(feature_pool_.size() - i);
            std::swap(feature_pool_[i], feature_pool_[j]);
        }

        const double parent_gini = counts.gini();
        const double parent_n = static_cast<double>(counts.total());
        int best_feature = -1;
        double best_decrease = 0.0;
        ClassCounts best_left, best_right;
        for (std::size_t i = 0; i < mtry_; ++i) {
            const std::size_t f = feature_pool_[i];
            ClassCounts left, right;
            for (const auto r : rows) {
                ClassCounts& side = Z_.at(r, f) == 0 ? left : right;
                (y_[r] == Label::control ? side.c0 : side.c1)++;
            }
            if (left.total() == 0 || right.total() == 0) continue;
            const double child =
                (static_cast<double>(left.total()) * left.gini() +
                 static_cast<double>(right.total()) * right.gini()) / parent_n;
            const double decrease = parent_gini - child;
            if (decrease > best_decrease) {
                best_decrease = decrease;
                best_feature = static_cast<int>(f);
                best_left = left;
                best_right = right;
            }
        }
        if (best_feature < 0) return index;  // no useful split among candidates

        std::vector<std::uint32_t> left_rows, right_rows;
        left_rows.reserve(best_left.total());
        right_rows.reserve(best_right.total());
        for (const auto r : rows) {
            (Z_.at(r, static_cast<std::size_t>(best_feature)) == 0 ? left_rows : right_rows)
                .push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        tree.nodes[index].feature = best_feature;
        const int left_child = grow(tree, std::move(left_rows), depth + 1);
        tree.nodes[index].left = left_child;
        const int right_child = grow(tree, std::move(right_rows), depth + 1);
        tree.nodes[index].right = right_child;
        return index;
    }

    const PredictionMatrix& Z_;
    std::span<const Label> y_;
    const ForestConfig& cfg_;
    std::size_t mtry_;
    Rng& rng_;
    std::vector<std::size_t> feature_pool_;
};

}  // namespace

Label DecisionTree::predict(const PredictionMatrix& Z, std::size_t row) const {
    int index = 0;
    while (nodes[static_cast<std::size_t>(index)].feature >= 0) {
        const TreeNode& node = nodes[static_cast<std::size_t>(index)];
        index = Z.at(row, static_cast<std::size_t>(node.feature)) == 0 ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(index)].label;
}

ForestModel fit_forest(const PredictionMatrix& Z, std::span<const Label> y,
                       const ForestConfig& config) {
    if (Z.rows != y.size() || Z.rows == 0 || Z.cols() == 0) {
        throw InvalidInput("fit_forest: empty matrix or label length mismatch");
    }
    if (config.n_trees == 0) throw InvalidInput("fit_forest: need at least one tree");
    std::size_t n_control = 0;
    for (const Label l : y) {
        if (l == Label::control) ++n_control;
    }
    if (n_control < 2 || y.size() - n_control < 2) {
        throw InvalidInput("fit_forest: need at least 2 subjects per class");
    }

    const std::size_t mtry =
        config.features_per_split > 0
            ? std::min(config.features_per_split, Z.cols())
            : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(Z.cols()))));

    ForestModel model;
    model.config = config;
    model.n_features = Z.cols();
    model.trees.reserve(config.n_trees);
    model.oob_rows.reserve(config.n_trees);

    const std::size_t n = Z.rows;
    for (std::size_t t = 0; t < config.n_trees; ++t) {
        Rng rng(Rng::derive(config.seed, 0x74726565ULL, t));  // "tree"
        std::vector<std::uint32_t> sample(n);
        std::vector<bool> in_bag(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            const auto r = static_cast<std::uint32_t>(rng.uniform_index(n));
            sample[i] = r;
            in_bag[r] = true;
        }
        TreeBuilder builder(Z, y, config, mtry, rng);
        model.trees.push_back(builder.build(std::move(sample)));

        std::vector<std::uint32_t> oob;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_bag[i]) oob.push_back(static_cast<std::uint32_t>(i));
        }
        model.oob_rows.push_back(std::move(oob));
    }
    return model;
}

std::vector<Label> predict_forest(const ForestModel& model, const PredictionMatrix& Z) {
    if (Z.cols() != model.n_features) {
        throw InvalidInput("predict_forest: column count differs from training");
    }
    std::vector<Label> out(Z.rows);
    for (std::size_t r = 0; r < Z.rows; ++r) {
        std::size_t votes_mtbi = 0;
        for (const auto& tree : model.trees) {
            if (tree.predict(Z, r) == Label::mtbi) ++votes_mtbi;
        }
        out[r] = 2 * votes_mtbi > model.trees.size() ? Label::mtbi : Label::control;
    }
    return out;
}

double oob_accuracy(const ForestModel& model, const PredictionMatrix& Z,
                    std::span<const Label> y) {
    if (Z.rows != y.size() || Z.cols() != model.n_features) {
        throw InvalidInput("oob_accuracy: shape mismatch with training data");
    }
    std::vector<std::size_t> votes_mtbi(Z.rows, 0), votes_total(Z.rows, 0);
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        for (const auto r : model.oob_rows[t]) {
            ++votes_total[r];
            if (model.trees[t].predict(Z, r) == Label::mtbi) ++votes_mtbi[r];
        }
    }
    std::size_t scored = 0, correct = 0;
    for (std::size_t r = 0; r < Z.rows; ++r) {
        if (votes_total[r] == 0) continue;
        ++scored;
        const Label pred =
            2 * votes_mtbi[r] > votes_total[r] ? Label::mtbi : Label::control;
        if (pred == y[r]) ++correct;
    }
    if (scored == 0) return 0.0;
    return static_cast<double>(correct) / static_cast<double>(scored);
}

}  // namespace neurowf
