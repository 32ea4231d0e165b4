#include <doctest.h>

#include <cmath>
#include <limits>

#include "support.hpp"
#include "tacit/gbrt.hpp"

using namespace tacit;

namespace {

struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

Dataset random_dataset(std::uint64_t seed, Eigen::Index rows, Eigen::Index cols, int kind) {
    Rng rng(seed);
    Dataset d{Eigen::MatrixXd(rows, cols), Eigen::VectorXd(rows)};
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) d.X(i, j) = uniform01(rng);
        const double x0 = d.X(i, 0), x1 = d.X(i, cols > 1 ? 1 : 0);
        switch (kind) {
            case 0: d.y[i] = x0; break;
            case 1: d.y[i] = x0 > 0.5 ? 3.0 : 1.0; break;
            case 2: d.y[i] = std::sin(6.0 * x0) + x1 * x1; break;
            case 3: d.y[i] = x0 * x1 + 0.1 * uniform01(rng); break;
            default: d.y[i] = std::floor(5.0 * x0) - 2.0 * x1; break;
        }
    }
    return d;
}

}  // namespace

TEST_CASE("a constant target is reproduced") {
    const auto d = random_dataset(1, 50, 3, 0);
    GradientBoostedTrees model;
    model.fit(d.X, Eigen::VectorXd::Constant(50, 2.5));
    CHECK((model.predict(d.X).array() - 2.5).abs().maxCoeff() < 1e-6);
    CHECK(r_squared(Eigen::VectorXd::Constant(3, 1.0), Eigen::VectorXd::Constant(3, 1.0)) == 1.0);
}

TEST_CASE("a single stump recovers a step function exactly") {
    const auto d = random_dataset(2, 100, 2, 1);
    BoostingParams p;
    p.n_trees = 1;
    p.learning_rate = 1.0;
    p.max_depth = 1;
    p.min_leaf = 1;
    GradientBoostedTrees model(p);
    model.fit(d.X, d.y);
    REQUIRE(model.trees().size() == 1);
    CHECK(model.trees()[0].feature[0] == 0);
    CHECK((model.predict(d.X) - d.y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("training loss never increases") {
    for (int kind = 0; kind < 5; ++kind) {
        const auto d = random_dataset(10 + static_cast<std::uint64_t>(kind), 300, 4, kind);
        GradientBoostedTrees model;
        model.fit(d.X, d.y);
        const auto& loss = model.loss_history();
        REQUIRE(loss.size() == model.trees().size() + 1);
        for (std::size_t i = 1; i < loss.size(); ++i) CHECK(loss[i] <= loss[i - 1] + 1e-12);
    }
}

TEST_CASE("a linear target generalises to a holdout") {
    const auto d = random_dataset(3, 250, 3, 0);
    const Eigen::Index train = 200;
    GradientBoostedTrees model;
    model.fit(d.X.topRows(train), d.y.head(train));
    const auto pred = model.predict(d.X.bottomRows(50));
    CHECK(r_squared(d.y.tail(50), pred) >= 0.9);
}

TEST_CASE("invalid input") {
    auto d = random_dataset(4, 20, 2, 0);
    GradientBoostedTrees model;
    d.X(3, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(model.fit(d.X, d.y), Error);
    d.X(3, 1) = 0.0;
    d.y[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(model.fit(d.X, d.y), Error);
    CHECK_THROWS_AS(model.fit(d.X, d.y.head(5)), Error);
}

TEST_CASE("save and load reproduce predictions") {
    const auto d = random_dataset(5, 120, 3, 2);
    GradientBoostedTrees model;
    model.fit(d.X, d.y);
    test::TempDir dir("gbrt");
    model.save(dir.path / "m.json");
    const auto back = GradientBoostedTrees::load(dir.path / "m.json");
    CHECK(back.predict(d.X) == model.predict(d.X));
    dir.write("bad.json", R"({"format":"tacit-gbrt","version":99})");
    CHECK_THROWS_AS(GradientBoostedTrees::load(dir.path / "bad.json"), Error);
}
