#include <doctest.h>

#include <cmath>
#include <set>

#include "pathloss/augment.hpp"
#include "pathloss/errors.hpp"
#include "pathloss/rng.hpp"

using namespace pathloss;

namespace {

LinkSample sample(const std::string& id, const std::string& env, double is_los,
                  double d_bs, double target, double freq = 1.96e9) {
    LinkSample s;
    s.id = id;
    s.bs_id = "bs1";
    s.env = env;
    s.source = SourceTag::kReal;
    s.target_delta_rsrp = target;
    s.features.freq_hz = freq;
    s.features.d_bs_m = d_bs;
    s.features.rel_bs_height_m = 25.0 + 0.01 * d_bs;
    s.features.is_los = is_los;
    return s;
}

std::vector<LinkSample> flock(const std::string& env, double is_los, std::size_t n,
                              std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LinkSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        double d = 100.0 + rng.uniform() * 2000.0;
        out.push_back(sample(env + "_" + std::to_string(i), env, is_los, d,
                             -0.02 * d + rng.normal(0, 1.0)));
    }
    return out;
}

} // namespace

TEST_CASE("standardize guards zero-variance columns and round-trips") {
    auto samples = flock("rural", 1.0, 20, 9);
    auto st = standardize(samples);
    // freq is constant: guard keeps z at 0 instead of NaN
    for (const auto& row : st.z) CHECK(row[0] == 0.0);
    CHECK(st.scaler.std[0] == 1.0);

    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto orig = samples[i].features.to_array();
        for (std::size_t c = 0; c < kNumFeatures; ++c) {
            if (c == FeatureVector::is_los_index()) continue;
            double back = st.z[i][c] * st.scaler.std[c] + st.scaler.mean[c];
            CHECK(back == doctest::Approx(orig[c]).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(standardize(std::vector<LinkSample>{samples[0]}), TooFewSamples);
}

TEST_CASE("standardize of two samples gives symmetric z-scores") {
    std::vector<LinkSample> two = {sample("a", "rural", 1.0, 100.0, -5.0),
                                   sample("b", "rural", 1.0, 300.0, -9.0)};
    auto st = standardize(two);
    std::size_t c = 1; // d_bs_m
    CHECK(st.z[0][c] == doctest::Approx(-st.z[1][c]).epsilon(1e-12));
    CHECK(std::abs(st.z[0][c]) == doctest::Approx(1.0).epsilon(1e-12)); // population std
}

TEST_CASE("smote outputs stay on the parent segment per coordinate") {
    auto samples = flock("rural", 1.0, 40, 31);
    SmoteConfig cfg;
    cfg.k_neighbors = 5;
    cfg.n_synthetic = 200;
    cfg.seed = 12;
    auto res = smote_regression(samples, cfg);
    REQUIRE(res.samples.size() == 200);

    std::set<std::string> ids;
    for (const auto& s : samples) ids.insert(s.id);

    for (const auto& syn : res.samples) {
        CHECK(syn.source == SourceTag::kSmote);
        auto parents = smote_parent_ids(syn.id);
        REQUIRE(parents.size() == 2);
        REQUIRE(ids.count(parents[0]) == 1);
        REQUIRE(ids.count(parents[1]) == 1);
        const LinkSample* base = nullptr;
        const LinkSample* nb = nullptr;
        for (const auto& s : samples) {
            if (s.id == parents[0]) base = &s;
            if (s.id == parents[1]) nb = &s;
        }
        auto fb = base->features.to_array();
        auto fn = nb->features.to_array();
        auto fs = syn.features.to_array();
        for (std::size_t c = 0; c < kNumFeatures; ++c) {
            double lo = std::min(fb[c], fn[c]) - 1e-12;
            double hi = std::max(fb[c], fn[c]) + 1e-12;
            CHECK(fs[c] >= lo);
            CHECK(fs[c] <= hi);
        }
        // frequency snaps to the base carrier, target interpolates
        CHECK(fs[0] == fb[0]);
        double lo_t = std::min(base->target_delta_rsrp, nb->target_delta_rsrp) - 1e-12;
        double hi_t = std::max(base->target_delta_rsrp, nb->target_delta_rsrp) + 1e-12;
        CHECK(syn.target_delta_rsrp >= lo_t);
        CHECK(syn.target_delta_rsrp <= hi_t);
    }
}

TEST_CASE("smote never mixes environments or LoS classes") {
    auto a = flock("rural", 1.0, 25, 1);
    auto b = flock("rural", 0.0, 25, 2);
    auto c = flock("urban", 1.0, 25, 3);
    std::vector<LinkSample> all;
    all.insert(all.end(), a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    all.insert(all.end(), c.begin(), c.end());

    SmoteConfig cfg;
    cfg.n_synthetic = 300;
    cfg.seed = 5;
    auto res = smote_regression(all, cfg);
    for (const auto& syn : res.samples) {
        auto parents = smote_parent_ids(syn.id);
        const LinkSample *p0 = nullptr, *p1 = nullptr;
        for (const auto& s : all) {
            if (s.id == parents[0]) p0 = &s;
            if (s.id == parents[1]) p1 = &s;
        }
        REQUIRE(p0 != nullptr);
        REQUIRE(p1 != nullptr);
        CHECK(p0->env == p1->env);
        CHECK(p0->features.is_los == p1->features.is_los);
        CHECK(syn.env == p0->env);
        CHECK(syn.features.is_los == p0->features.is_los);
    }
}

TEST_CASE("smote is deterministic and honors the multiplier") {
    auto samples = flock("rural", 1.0, 30, 77);
    SmoteConfig cfg;
    cfg.multiplier = 1.5;
    cfg.seed = 99;
    auto r1 = smote_regression(samples, cfg);
    auto r2 = smote_regression(samples, cfg);
    REQUIRE(r1.samples.size() == 45);
    REQUIRE(r2.samples.size() == 45);
    for (std::size_t i = 0; i < r1.samples.size(); ++i) {
        CHECK(r1.samples[i].id == r2.samples[i].id);
        CHECK(r1.samples[i].target_delta_rsrp == r2.samples[i].target_delta_rsrp);
        auto f1 = r1.samples[i].features.to_array();
        auto f2 = r2.samples[i].features.to_array();
        for (std::size_t c = 0; c < kNumFeatures; ++c) CHECK(f1[c] == f2[c]);
    }

    SmoteConfig other = cfg;
    other.seed = 100;
    auto r3 = smote_regression(samples, other);
    bool any_diff = false;
    for (std::size_t i = 0; i < r1.samples.size(); ++i)
        if (r1.samples[i].id != r3.samples[i].id) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("small groups are skipped with a warning") {
    auto big = flock("rural", 1.0, 20, 4);
    auto tiny = flock("urban", 1.0, 3, 5); // 3 <= k
    std::vector<LinkSample> all;
    all.insert(all.end(), big.begin(), big.end());
    all.insert(all.end(), tiny.begin(), tiny.end());

    SmoteConfig cfg;
    cfg.n_synthetic = 50;
    auto res = smote_regression(all, cfg);
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("urban") != std::string::npos);
    for (const auto& syn : res.samples) CHECK(syn.env == "rural");

    SmoteConfig bad;
    bad.k_neighbors = 0;
    CHECK_THROWS_AS(smote_regression(all, bad), InvalidK);
}
