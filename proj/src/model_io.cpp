#include "neurowf/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "neurowf/csv.hpp"
#include "neurowf/error.hpp"

namespace neurowf {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.data = j.at("data").get<std::vector<double>>();
    if (m.data.size() != m.rows * m.cols) {
        throw InvalidInput("model file: matrix data size does not match its dimensions");
    }
    return m;
}

json frechet_to_json(const FrechetModel& model) {
    return json{{"group_tag", model.group_tag},
                {"quantile_matrix", matrix_to_json(model.quantile_matrix)},
                {"covariates", matrix_to_json(model.covariates)},
                {"z_bar", model.z_bar},
                {"sigma_hat", matrix_to_json(model.sigma_hat)},
                {"ridge", model.ridge}};
}

FrechetModel frechet_from_json(const json& j, const std::vector<double>& levels) {
    FrechetModel model;
    model.levels = levels;
    model.group_tag = j.at("group_tag").get<std::string>();
    model.quantile_matrix = matrix_from_json(j.at("quantile_matrix"));
    model.covariates = matrix_from_json(j.at("covariates"));
    model.z_bar = j.at("z_bar").get<std::vector<double>>();
    model.sigma_hat = matrix_from_json(j.at("sigma_hat"));
    model.ridge = j.at("ridge").get<double>();
    if (model.quantile_matrix.cols != levels.size()) {
        throw InvalidInput("model file: quantile matrix width differs from the level grid");
    }
    if (model.covariates.rows != model.quantile_matrix.rows ||
        model.covariates.cols != model.z_bar.size() ||
        model.sigma_hat.rows != model.z_bar.size() ||
        model.sigma_hat.cols != model.z_bar.size()) {
        throw InvalidInput("model file: inconsistent covariate dimensions");
    }
    return model;
}

json forest_to_json(const ForestModel& model) {
    json trees = json::array();
    for (const auto& tree : model.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back(json::array({n.feature, n.left, n.right, static_cast<int>(n.label),
                                         n.count_control, n.count_mtbi}));
        }
        trees.push_back(std::move(nodes));
    }
    return json{{"config",
                 {{"n_trees", model.config.n_trees},
                  {"max_depth", model.config.max_depth},
                  {"features_per_split", model.config.features_per_split},
                  {"seed", model.config.seed}}},
                {"n_features", model.n_features},
                {"trees", std::move(trees)},
                {"oob_rows", model.oob_rows}};
}

ForestModel forest_from_json(const json& j) {
    ForestModel model;
    const json& cfg = j.at("config");
    model.config.n_trees = cfg.at("n_trees").get<std::size_t>();
    model.config.max_depth = cfg.at("max_depth").get<std::size_t>();
    model.config.features_per_split = cfg.at("features_per_split").get<std::size_t>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    model.n_features = j.at("n_features").get<std::size_t>();
    for (const json& tree_json : j.at("trees")) {
        DecisionTree tree;
        for (const json& n : tree_json) {
            TreeNode node;
            node.feature = n.at(0).get<int>();
            node.left = n.at(1).get<int>();
            node.right = n.at(2).get<int>();
            node.label = static_cast<Label>(n.at(3).get<int>());
            node.count_control = n.at(4).get<std::size_t>();
            node.count_mtbi = n.at(5).get<std::size_t>();
            tree.nodes.push_back(node);
        }
        model.trees.push_back(std::move(tree));
    }
    model.oob_rows = j.at("oob_rows").get<std::vector<std::vector<std::uint32_t>>>();
    return model;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidInput(path + ": invalid JSON (" + e.what() + ")");
    }
    return j;
}

}  // namespace

void save_model_bundle(const std::string& path, const ModelBundle& bundle) {
    json j{{"schema_version", bundle.schema_version},
           {"grid", {{"m", bundle.control.levels.size()}, {"spacing", "1/1024"}}},
           {"levels", bundle.control.levels},
           {"control", frechet_to_json(bundle.control)},
           {"mtbi", frechet_to_json(bundle.mtbi)},
           {"k", bundle.k},
           {"pipeline", {{"n_grid", bundle.n_grid}, {"pad_fraction", bundle.pad_fraction}}},
           {"provenance", {{"seed", bundle.seed}, {"config_hash", bundle.config_hash}}}};
    if (bundle.forest.has_value()) j["forest"] = forest_to_json(*bundle.forest);
    write_file_atomic(path, j.dump());
}

ModelBundle load_model_bundle(const std::string& path) {
    const json j = read_json_file(path);
    ModelBundle bundle;
    if (!j.contains("schema_version")) throw InvalidInput(path + ": missing schema_version");
    bundle.schema_version = j.at("schema_version").get<int>();
    if (bundle.schema_version != 1) {
        throw InvalidInput(path + ": unsupported schema_version " +
                           std::to_string(bundle.schema_version));
    }
    const auto levels = j.at("levels").get<std::vector<double>>();
    bundle.control = frechet_from_json(j.at("control"), levels);
    bundle.mtbi = frechet_from_json(j.at("mtbi"), levels);
    if (bundle.control.n_covariates() != bundle.mtbi.n_covariates()) {
        throw InvalidInput(path + ": control and mtbi covariate dimensions differ");
    }
    bundle.k = j.at("k").get<double>();
    if (j.contains("forest")) bundle.forest = forest_from_json(j.at("forest"));
    const json& pipeline = j.at("pipeline");
    bundle.n_grid = pipeline.at("n_grid").get<std::size_t>();
    bundle.pad_fraction = pipeline.at("pad_fraction").get<double>();
    const json& prov = j.at("provenance");
    bundle.seed = prov.at("seed").get<std::uint64_t>();
    bundle.config_hash = prov.at("config_hash").get<std::string>();
    return bundle;
}

void save_forest(const std::string& path, const ForestModel& model) {
    json j{{"schema_version", 1}, {"forest", forest_to_json(model)}};
    write_file_atomic(path, j.dump());
}

ForestModel load_forest(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1) {
        throw InvalidInput(path + ": missing or unsupported schema_version");
    }
    return forest_from_json(j.at("forest"));
}

std::string config_hash_of(const std::string& canonical) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

}  // namespace neurowf
