#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "pathloss/ensemble.hpp"
#include "pathloss/errors.hpp"
#include "pathloss/evaluation.hpp"
#include "pathloss/rng.hpp"

using namespace pathloss;

namespace {

// brute-force rescan used as the independent oracle for the grid search
std::array<double, 3> grid_oracle(const std::array<std::vector<double>, 3>& preds,
                                  const std::vector<double>& truth, Metric metric,
                                  double step) {
    auto m = static_cast<long>(std::llround(1.0 / step));
    std::array<double, 3> best{0, 0, 1};
    double best_loss = 1e300;
    for (long i = 0; i <= m; ++i) {
        for (long j = 0; j <= m - i; ++j) {
            std::array<double, 3> w = {static_cast<double>(i) * step,
                                       static_cast<double>(j) * step,
                                       static_cast<double>(m - i - j) * step};
            std::vector<double> blend(truth.size());
            for (std::size_t s = 0; s < truth.size(); ++s)
                blend[s] = w[0] * preds[0][s] + w[1] * preds[1][s] + w[2] * preds[2][s];
            double loss = metric == Metric::kMae ? mae(blend, truth) : rmse(blend, truth);
            if (loss < best_loss) {
                best_loss = loss;
                best = w;
            }
        }
    }
    return best;
}

std::vector<LinkSample> toy_samples(std::size_t n, double slope, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LinkSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        LinkSample s;
        s.id = "t" + std::to_string(seed) + "_" + std::to_string(i);
        s.env = "rural";
        s.features.d_bs_m = 100.0 + rng.uniform() * 1500.0;
        s.features.rel_bs_height_m = 20.0 + rng.uniform() * 30.0;
        s.features.is_los = rng.uniform() < 0.7 ? 1.0 : 0.0;
        s.target_delta_rsrp = slope * s.features.d_bs_m / 100.0 + rng.normal(0, 0.5);
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST_CASE("perfect predictor takes all the weight") {
    std::vector<double> truth = {1, 2, 3, 4, 5};
    std::array<std::vector<double>, 3> preds = {truth, {0, 0, 0, 0, 0}, {9, 9, 9, 9, 9}};
    auto w = optimize_weights(preds, truth, Metric::kMae);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(0.0));
    CHECK(w[2] == doctest::Approx(0.0));
}

TEST_CASE("identical predictors fall to the tie rule") {
    std::vector<double> truth = {1, 2, 3};
    std::vector<double> p = {1.5, 2.5, 2.5};
    std::array<std::vector<double>, 3> preds = {p, p, p};
    auto w = optimize_weights(preds, truth, Metric::kRmse);
    // lexicographically smallest simplex point
    CHECK(w[0] == 0.0);
    CHECK(w[1] == 0.0);
    CHECK(w[2] == 1.0);
}

TEST_CASE("opposite equal biases blend half-and-half under RMSE") {
    Rng rng(21);
    std::vector<double> truth(400);
    std::array<std::vector<double>, 3> preds;
    for (auto& p : preds) p.resize(400);
    for (std::size_t i = 0; i < 400; ++i) {
        truth[i] = rng.uniform() * 10.0;
        preds[0][i] = truth[i] + 3.0;
        preds[1][i] = truth[i] - 3.0;
        preds[2][i] = truth[i] + rng.normal(0.0, 40.0); // useless third corner
    }
    auto w = optimize_weights(preds, truth, Metric::kRmse);
    CHECK(w[0] == doctest::Approx(0.5).epsilon(0.021));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(0.021));
    CHECK(w[2] == doctest::Approx(0.0));
}

TEST_CASE("grid argmin matches the brute-force oracle on random triplets") {
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 20 + rng.below(60);
        std::vector<double> truth(n);
        std::array<std::vector<double>, 3> preds;
        for (auto& p : preds) p.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = rng.uniform() * 20.0 - 10.0;
            for (auto& p : preds) p[i] = truth[i] + rng.normal(0, 2.0 + rng.uniform() * 3.0);
        }
        Metric metric = trial % 2 ? Metric::kMae : Metric::kRmse;
        auto fast = optimize_weights(preds, truth, metric, 0.05);
        auto oracle = grid_oracle(preds, truth, metric, 0.05);
        CHECK(fast[0] == oracle[0]);
        CHECK(fast[1] == oracle[1]);
        CHECK(fast[2] == oracle[2]);

        // optimum never loses to a corner
        std::vector<double> blend(n);
        for (std::size_t i = 0; i < n; ++i)
            blend[i] = fast[0] * preds[0][i] + fast[1] * preds[1][i] + fast[2] * preds[2][i];
        double opt = metric == Metric::kMae ? mae(blend, truth) : rmse(blend, truth);
        for (const auto& corner : preds) {
            double loss = metric == Metric::kMae ? mae(corner, truth) : rmse(corner, truth);
            CHECK(opt <= loss + 1e-12);
        }
        CHECK(fast[0] + fast[1] + fast[2] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("weight optimization rejects bad input") {
    std::vector<double> empty;
    std::array<std::vector<double>, 3> preds = {empty, empty, empty};
    CHECK_THROWS_AS(optimize_weights(preds, empty, Metric::kMae), EmptyValidation);

    std::vector<double> truth = {1.0, 2.0};
    std::array<std::vector<double>, 3> short_preds = {{{1.0}, {1.0, 2.0}, {1.0, 2.0}}};
    CHECK_THROWS_AS(optimize_weights(short_preds, truth, Metric::kMae), LengthMismatch);
    std::array<std::vector<double>, 3> ok = {{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}};
    CHECK_THROWS_AS(optimize_weights(ok, truth, Metric::kMae, 0.03), ConfigError);
}

TEST_CASE("triplet training and ensemble prediction") {
    TrainConfig cfg;
    cfg.n_trees = 20;
    cfg.max_depth = 3;
    cfg.min_samples_leaf = 5;

    auto real = toy_samples(80, -2.0, 1);
    auto synth = toy_samples(200, -2.2, 2);
    auto triplet = train_triplet(real, synth, cfg);

    // identical sources give identical models
    auto same = train_triplet(real, real, cfg);
    for (const auto& s : real) {
        auto f = s.features.to_array();
        CHECK(same.m_real.predict(f) == same.m_synth.predict(f));
    }

    EnsembleModel em;
    em.m_real = triplet.m_real;
    em.m_synth = triplet.m_synth;
    em.m_combined = triplet.m_combined;
    em.w = {1.0, 0.0, 0.0};
    auto f0 = real[0].features.to_array();
    CHECK(predict_ensemble(em, f0) == doctest::Approx(em.m_real.predict(f0)));

    em.w = {0.25, 0.35, 0.40};
    double blend = 0.25 * em.m_real.predict(f0) + 0.35 * em.m_synth.predict(f0) +
                   0.40 * em.m_combined.predict(f0);
    CHECK(predict_ensemble(em, f0) == doctest::Approx(blend).epsilon(1e-12));
}

TEST_CASE("ensemble manifest round trip") {
    TrainConfig cfg;
    cfg.n_trees = 8;
    cfg.max_depth = 3;
    cfg.min_samples_leaf = 5;
    auto triplet = train_triplet(toy_samples(60, -1.5, 3), toy_samples(90, -1.8, 4), cfg);

    EnsembleModel em;
    em.m_real = triplet.m_real;
    em.m_synth = triplet.m_synth;
    em.m_combined = triplet.m_combined;
    em.w = {0.2, 0.3, 0.5};
    em.metric = Metric::kRmse;

    auto dir = std::filesystem::temp_directory_path() / "pathloss_ens_test";
    std::filesystem::create_directories(dir);
    save_ensemble(em, dir.string());
    EnsembleModel back = load_ensemble(dir.string());
    CHECK(back.w[0] == 0.2);
    CHECK(back.w[2] == 0.5);
    CHECK(back.metric == Metric::kRmse);
    auto probe = toy_samples(5, -2.0, 9);
    for (const auto& s : probe) {
        auto f = s.features.to_array();
        CHECK(predict_ensemble(back, f) == predict_ensemble(em, f));
    }
    std::filesystem::remove_all(dir);
}
