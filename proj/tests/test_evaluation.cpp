#include <doctest.h>

#include <cmath>
#include <set>

#include "pathloss/errors.hpp"
#include "pathloss/evaluation.hpp"
#include "pathloss/rng.hpp"

using namespace pathloss;

namespace {

std::vector<LinkSample> synth_env(const std::string& env, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LinkSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        LinkSample s;
        s.id = "syn_" + env + "_" + std::to_string(i);
        s.env = env;
        s.source = SourceTag::kSynthetic;
        s.features.freq_hz = 1.96e9;
        s.features.d_bs_m = 100.0 + rng.uniform() * 1500.0;
        s.features.diffraction_loss_db = rng.uniform() < 0.4 ? rng.uniform() * 20.0 : 0.0;
        s.features.is_los = s.features.diffraction_loss_db > 0.0 ? 0.0 : 1.0;
        s.target_delta_rsrp =
            -20.0 * std::log10(s.features.d_bs_m / 300.0) - s.features.diffraction_loss_db;
        out.push_back(s);
    }
    return out;
}

std::vector<LinkSample> real_env(const std::string& env, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    auto out = synth_env(env, n, seed);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].id = "meas_" + env + "_" + std::to_string(i);
        out[i].source = SourceTag::kReal;
        out[i].target_delta_rsrp += rng.normal(0.0, 2.0) + 1.5; // site offset + fading
    }
    return out;
}

EvalConfig small_cfg() {
    EvalConfig cfg;
    cfg.train.n_trees = 40;
    cfg.train.max_depth = 4;
    cfg.train.min_samples_leaf = 3;
    cfg.smote.k_neighbors = 3;
    cfg.smote.multiplier = 1.0;
    cfg.scarcity_fraction = 0.10;
    return cfg;
}

} // namespace

TEST_CASE("mae and rmse closed forms") {
    std::vector<double> t = {0.0, 0.0};
    std::vector<double> p1 = {1.0, -1.0};
    CHECK(mae(p1, t) == doctest::Approx(1.0));
    CHECK(rmse(p1, t) == doctest::Approx(1.0));

    std::vector<double> p2 = {0.0, 2.0};
    CHECK(mae(p2, t) == doctest::Approx(1.0));
    CHECK(rmse(p2, t) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    CHECK(mae(t, t) == 0.0);
    CHECK(rmse(t, t) == 0.0);

    std::vector<double> empty;
    CHECK_THROWS_AS(mae(empty, empty), EmptyInput);
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(rmse(one, t), LengthMismatch);
}

TEST_CASE("mae never exceeds rmse") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 5 + rng.below(50);
        std::vector<double> t(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = rng.uniform() * 10.0;
            p[i] = t[i] + rng.normal(0, 3.0);
        }
        CHECK(mae(p, t) <= rmse(p, t) + 1e-12);
    }
}

TEST_CASE("dataset split is an exact stratified half with stable membership") {
    auto a = real_env("flat", 100, 1);
    auto b = real_env("hilly", 101, 2);
    std::vector<LinkSample> all = a;
    all.insert(all.end(), b.begin(), b.end());

    auto s1 = split_dataset(all, 7);
    CHECK(s1.test.size() + s1.pool.size() == 201);
    std::size_t flat_test = 0, hilly_test = 0;
    for (const auto& s : s1.test) (s.env == "flat" ? flat_test : hilly_test)++;
    CHECK(flat_test == 50);
    CHECK(hilly_test == 50); // odd count: test gets the floor

    auto s2 = split_dataset(all, 7);
    std::set<std::string> ids1, ids2;
    for (const auto& s : s1.test) ids1.insert(s.id);
    for (const auto& s : s2.test) ids2.insert(s.id);
    CHECK(ids1 == ids2);

    auto s3 = split_dataset(all, 8);
    std::set<std::string> ids3;
    for (const auto& s : s3.test) ids3.insert(s.id);
    CHECK(ids1 != ids3);
}

TEST_CASE("scarcity sampling stays inside the pool") {
    auto data = real_env("flat", 1000, 3);
    auto split = split_dataset(data, 5);
    auto sample = scarcity_sample(split.pool, 0.05, 5);
    CHECK(sample.size() == 25); // 5% of the 500-record pool

    std::set<std::string> test_ids;
    for (const auto& s : split.test) test_ids.insert(s.id);
    for (const auto& s : sample) CHECK(test_ids.count(s.id) == 0);

    CHECK(scarcity_sample(split.pool, 1.0, 5).size() == split.pool.size());
    CHECK_THROWS_AS(scarcity_sample(split.pool, 0.0, 5), ConfigError);
}

TEST_CASE("scenario runs produce rows and honor the leakage guard") {
    auto real = real_env("flat", 400, 21);
    auto synth = synth_env("flat", 800, 22);
    EvalConfig cfg = small_cfg();

    for (const auto& name : scenario_names()) {
        ScenarioSpec spec{name, "flat", 77};
        auto run = run_scenario(spec, real, synth, cfg);
        CHECK(run.row.n_test == 200);
        CHECK(run.row.mae_db <= run.row.rmse_db + 1e-12);
        CHECK(run.row.train_label == name);

        std::set<std::string> test_ids(run.test_ids.begin(), run.test_ids.end());
        for (const auto& id : run.train_real_ids) {
            CHECK(test_ids.count(id) == 0);
            for (const auto& p : smote_parent_ids(id)) CHECK(test_ids.count(p) == 0);
        }
        if (name == "5pct_real_sim" || name == "5pct_real_smote_sim") {
            CHECK(run.used_ensemble);
            CHECK(run.weights[0] + run.weights[1] + run.weights[2] ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("scenario determinism") {
    auto real = real_env("flat", 300, 31);
    auto synth = synth_env("flat", 500, 32);
    EvalConfig cfg = small_cfg();
    ScenarioSpec spec{"5pct_real_smote_sim", "flat", 3};
    auto r1 = run_scenario(spec, real, synth, cfg);
    auto r2 = run_scenario(spec, real, synth, cfg);
    CHECK(r1.row.mae_db == r2.row.mae_db);
    CHECK(r1.row.rmse_db == r2.row.rmse_db);
    CHECK(r1.weights == r2.weights);
}

TEST_CASE("unknown scenario and missing data are rejected") {
    auto real = real_env("flat", 100, 41);
    auto synth = synth_env("flat", 100, 42);
    EvalConfig cfg = small_cfg();
    CHECK_THROWS_AS(run_scenario({"bogus", "flat", 1}, real, synth, cfg), ConfigError);
    std::vector<LinkSample> empty;
    CHECK_THROWS_AS(run_scenario({"SIM", "flat", 1}, real, empty, cfg), MissingDataset);
    CHECK_THROWS_AS(run_scenario({"SIM", "flat", 1}, empty, synth, cfg), MissingDataset);
}

TEST_CASE("cross-environment matrix covers E x E cells deterministically") {
    std::map<std::string, std::vector<LinkSample>> real = {
        {"flat", real_env("flat", 240, 51)}, {"hilly", real_env("hilly", 260, 52)}};
    std::map<std::string, std::vector<LinkSample>> synth = {
        {"flat", synth_env("flat", 400, 53)}, {"hilly", synth_env("hilly", 400, 54)}};
    EvalConfig cfg = small_cfg();

    auto rows = cross_env_matrix(real, synth, MatrixMode::kRealOnly, 7, cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) CHECK(r.mae_db <= r.rmse_db + 1e-12);

    auto rows2 = cross_env_matrix(real, synth, MatrixMode::kRealOnly, 7, cfg);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].mae_db == rows2[i].mae_db);
        CHECK(rows[i].train_label == rows2[i].train_label);
    }

    auto ens = cross_env_matrix(real, synth, MatrixMode::kEnsemble, 7, cfg);
    REQUIRE(ens.size() == 4);

    std::map<std::string, std::vector<LinkSample>> single = {{"flat", real.at("flat")}};
    CHECK_THROWS_AS(cross_env_matrix(single, synth, MatrixMode::kRealOnly, 7, cfg),
                    MissingDataset);
}
