#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neurowf/classifier.hpp"

namespace neurowf {

/// Subjects x channels matrix of binary per-channel decisions
/// (e.g. 68 regions x 3 bands). Entries are 0 or 1.
struct PredictionMatrix {
    std::size_t rows = 0;
    std::vector<std::string> column_names;
    std::vector<std::uint8_t> data;  ///< row-major rows x column_names.size()

    std::size_t cols() const { return column_names.size(); }
    std::uint8_t at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
    void set(std::size_t r, std::size_t c, std::uint8_t v) { data[r * cols() + c] = v; }
};

struct ForestConfig {
    std::size_t n_trees = 100;
    std::size_t max_depth = 8;
    /// Features considered per split; 0 means ceil(sqrt(n_cols)).
    std::size_t features_per_split = 0;
    std::uint64_t seed = 1;
};

/// Node of an axis-aligned tree over binary features. The split threshold is
/// always 0.5: feature value 0 goes left, 1 goes right. Leaves have
/// feature == -1 and carry the class counts seen at fit time.
struct TreeNode {
    int feature = -1;
    int left = -1;
    int right = -1;
    Label label = Label::control;
    std::size_t count_control = 0;
    std::size_t count_mtbi = 0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  ///< nodes[0] is the root
    Label predict(const PredictionMatrix& Z, std::size_t row) const;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    ForestConfig config;
    std::size_t n_features = 0;
    /// Per tree, which training rows were out-of-bag (not drawn by the
    /// bootstrap); used by oob_accuracy.
    std::vector<std::vector<std::uint32_t>> oob_rows;
};

/// Bootstrap-bagged Gini trees with per-node random feature subsets. Fully
/// deterministic given config.seed. Throws InvalidInput when y has a single
/// class or fewer than 2 subjects per class.
ForestModel fit_forest(const PredictionMatrix& Z, std::span<const Label> y,
                       const ForestConfig& config);

/// Majority vote across trees; ties go to control. Throws InvalidInput on a
/// column-count mismatch.
std::vector<Label> predict_forest(const ForestModel& model, const PredictionMatrix& Z);

/// Out-of-bag accuracy on the training data: each subject is voted on only by
/// trees whose bootstrap missed it. Subjects that are in-bag everywhere are
/// skipped.
double oob_accuracy(const ForestModel& model, const PredictionMatrix& Z,
                    std::span<const Label> y);

}  // namespace neurowf
