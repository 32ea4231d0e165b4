#include "tacit/gbrt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "tacit/types.hpp"

namespace tacit {

namespace {

constexpr int kDumpVersion = 1;

void require_finite(const Eigen::MatrixXd& X) {
    if (!X.allFinite()) throw Error("regressor input contains NaN or infinite values");
}

struct TreeBuilder {
    const Eigen::MatrixXd& X;
    const std::vector<std::vector<std::int32_t>>& order;  // per feature, rows sorted by value
    const Eigen::VectorXd& residual;
    const BoostingParams& params;
    std::vector<std::int32_t> node_of;  // row -> current node during growth
    RegressionTree tree;

    std::int32_t add_leaf(double value) {
        tree.feature.push_back(-1);
        tree.threshold.push_back(0.0);
        tree.left.push_back(-1);
        tree.right.push_back(-1);
        tree.value.push_back(value);
        return static_cast<std::int32_t>(tree.value.size() - 1);
    }

    void grow(std::int32_t node, const std::vector<std::int32_t>& rows, int depth) {
        const auto n = static_cast<std::int64_t>(rows.size());
        double total = 0.0;
        for (auto i : rows) total += residual[i];
        tree.value[node] = params.learning_rate * total / static_cast<double>(n);
        if (depth >= params.max_depth || n < 2 * static_cast<std::int64_t>(params.min_leaf)) return;

        const double parent_score = total * total / static_cast<double>(n);
        double best_gain = 1e-12;
        std::int32_t best_feature = -1;
        double best_threshold = 0.0;
        for (std::size_t f = 0; f < order.size(); ++f) {
            double left_sum = 0.0;
            std::int64_t left_n = 0;
            double prev = 0.0;
            for (auto i : order[f]) {
                if (node_of[i] != node) continue;
                const double x = X(i, static_cast<Eigen::Index>(f));
                if (left_n >= params.min_leaf && n - left_n >= params.min_leaf && x > prev) {
                    const double right_sum = total - left_sum;
                    const double gain = left_sum * left_sum / static_cast<double>(left_n) +
                                        right_sum * right_sum / static_cast<double>(n - left_n) - parent_score;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_feature = static_cast<std::int32_t>(f);
                        const double mid = prev + (x - prev) / 2.0;
                        best_threshold = mid < x ? mid : prev;
                    }
                }
                left_sum += residual[i];
                ++left_n;
                prev = x;
            }
        }
        if (best_feature < 0) return;

        std::vector<std::int32_t> lrows, rrows;
        for (auto i : rows) (X(i, best_feature) <= best_threshold ? lrows : rrows).push_back(i);
        const auto l = add_leaf(0.0);
        const auto r = add_leaf(0.0);
        tree.feature[node] = best_feature;
        tree.threshold[node] = best_threshold;
        tree.left[node] = l;
        tree.right[node] = r;
        for (auto i : lrows) node_of[i] = l;
        for (auto i : rrows) node_of[i] = r;
        grow(l, lrows, depth + 1);
        grow(r, rrows, depth + 1);
    }
};

}  // namespace

void GradientBoostedTrees::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() != y.size()) throw Error("fit: rows(X) != |y|");
    if (X.rows() < 2) throw Error("fit: need at least two rows");
    if (params_.n_trees < 0 || params_.max_depth < 0 || params_.min_leaf < 1 || !(params_.learning_rate > 0.0))
        throw Error("fit: invalid boosting parameters");
    require_finite(X);
    if (!y.allFinite()) throw Error("fit: target contains NaN or infinite values");

    const auto n = static_cast<std::int32_t>(X.rows());
    num_features_ = X.cols();
    std::vector<std::vector<std::int32_t>> order(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
        auto& o = order[static_cast<std::size_t>(f)];
        o.resize(static_cast<std::size_t>(n));
        std::iota(o.begin(), o.end(), 0);
        std::stable_sort(o.begin(), o.end(), [&](std::int32_t a, std::int32_t b) { return X(a, f) < X(b, f); });
    }

    base_ = y.mean();
    Eigen::VectorXd pred = Eigen::VectorXd::Constant(n, base_);
    trees_.clear();
    loss_.assign(1, (y - pred).squaredNorm() / n);
    std::vector<std::int32_t> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    for (int t = 0; t < params_.n_trees; ++t) {
        const Eigen::VectorXd residual = y - pred;
        TreeBuilder b{X, order, residual, params_, std::vector<std::int32_t>(static_cast<std::size_t>(n), 0), {}};
        b.add_leaf(0.0);
        b.grow(0, all, 0);
        for (std::int32_t i = 0; i < n; ++i) pred[i] += b.tree.value[b.node_of[i]];
        trees_.push_back(std::move(b.tree));
        loss_.push_back((y - pred).squaredNorm() / n);
    }
}

Eigen::VectorXd GradientBoostedTrees::predict(const Eigen::MatrixXd& X) const {
    if (X.cols() != num_features_) throw Error("predict: feature count differs from training");
    require_finite(X);
    Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), base_);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (const auto& t : trees_) out[i] += t.predict(X.row(i));
    return out;
}

void GradientBoostedTrees::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["format"] = "tacit-gbrt";
    j["version"] = kDumpVersion;
    j["params"] = {{"n_trees", params_.n_trees},
                   {"learning_rate", params_.learning_rate},
                   {"max_depth", params_.max_depth},
                   {"min_leaf", params_.min_leaf},
                   {"seed", params_.seed}};
    j["num_features"] = num_features_;
    j["base_score"] = base_;
    j["loss_history"] = loss_;
    auto& trees = j["trees"] = nlohmann::json::array();
    for (const auto& t : trees_)
        trees.push_back({{"feature", t.feature}, {"threshold", t.threshold}, {"left", t.left}, {"right", t.right}, {"value", t.value}});
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream(path) << j.dump(1) << '\n';
}

GradientBoostedTrees GradientBoostedTrees::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    const auto j = nlohmann::json::parse(in);
    if (j.value("format", "") != "tacit-gbrt") throw Error(path.string() + ": not a tacit-gbrt dump");
    if (j.at("version").get<int>() != kDumpVersion) throw Error(path.string() + ": unsupported dump version");
    BoostingParams p;
    const auto& jp = j.at("params");
    p.n_trees = jp.at("n_trees");
    p.learning_rate = jp.at("learning_rate");
    p.max_depth = jp.at("max_depth");
    p.min_leaf = jp.at("min_leaf");
    p.seed = jp.at("seed");
    GradientBoostedTrees m(p);
    m.num_features_ = j.at("num_features");
    m.base_ = j.at("base_score");
    m.loss_ = j.at("loss_history").get<std::vector<double>>();
    for (const auto& jt : j.at("trees")) {
        RegressionTree t;
        t.feature = jt.at("feature").get<std::vector<std::int32_t>>();
        t.threshold = jt.at("threshold").get<std::vector<double>>();
        t.left = jt.at("left").get<std::vector<std::int32_t>>();
        t.right = jt.at("right").get<std::vector<std::int32_t>>();
        t.value = jt.at("value").get<std::vector<double>>();
        m.trees_.push_back(std::move(t));
    }
    return m;
}

std::unique_ptr<Regressor> fit_regressor(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const BoostingParams& params) {
    auto m = std::make_unique<GradientBoostedTrees>(params);
    m->fit(X, y);
    return m;
}

double r_squared(const Eigen::VectorXd& truth, const Eigen::VectorXd& predicted) {
    if (truth.size() != predicted.size() || truth.size() == 0) throw Error("r_squared: size mismatch");
    const double sse = (truth - predicted).squaredNorm();
    const double sst = (truth.array() - truth.mean()).matrix().squaredNorm();
    if (sst == 0.0) return sse == 0.0 ? 1.0 : 0.0;
    return 1.0 - sse / sst;
}

}  // namespace tacit
