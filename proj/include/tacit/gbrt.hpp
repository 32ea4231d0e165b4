#ifndef TACIT_GBRT_HPP
#define TACIT_GBRT_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace tacit {

class Regressor {
public:
    virtual ~Regressor() = default;
    virtual void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) = 0;
    virtual Eigen::VectorXd predict(const Eigen::MatrixXd& X) const = 0;
};

struct BoostingParams {
    int n_trees = 100;
    double learning_rate = 0.1;
    int max_depth = 3;
    int min_leaf = 5;
    std::uint64_t seed = 0;  // kept for interface stability; fitting draws no randomness
};

/// Flat regression tree. Node 0 is the root; leaves have feature == -1.
struct RegressionTree {
    std::vector<std::int32_t> feature;
    std::vector<double> threshold;  // go left when x[feature] <= threshold
    std::vector<std::int32_t> left, right;
    std::vector<double> value;

    template <typename Row>
    double predict(const Row& x) const {
        std::int32_t k = 0;
        while (feature[k] >= 0) k = x[feature[k]] <= threshold[k] ? left[k] : right[k];
        return value[k];
    }
};

/// Squared-error gradient boosting with exact greedy splits.
class GradientBoostedTrees final : public Regressor {
public:
    explicit GradientBoostedTrees(BoostingParams params = {}) : params_(params) {}

    void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override;
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override;

    const BoostingParams& params() const { return params_; }
    const std::vector<RegressionTree>& trees() const { return trees_; }
    double base_score() const { return base_; }
    /// Training mean squared error before the first tree and after each round.
    const std::vector<double>& loss_history() const { return loss_; }

    /// Versioned JSON dump of the fitted ensemble.
    void save(const std::filesystem::path& path) const;
    static GradientBoostedTrees load(const std::filesystem::path& path);

private:
    BoostingParams params_;
    Eigen::Index num_features_ = 0;
    double base_ = 0.0;
    std::vector<RegressionTree> trees_;
    std::vector<double> loss_;
};

std::unique_ptr<Regressor> fit_regressor(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const BoostingParams& params);

/// 1 - SSE / SST; 1 when the target is constant and matched exactly.
double r_squared(const Eigen::VectorXd& truth, const Eigen::VectorXd& predicted);

}  // namespace tacit

#endif  // TACIT_GBRT_HPP
