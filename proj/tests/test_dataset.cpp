#include <doctest.h>

#include <sstream>

#include "pathloss/dataset.hpp"
#include "pathloss/errors.hpp"
#include "pathloss/rng.hpp"

using namespace pathloss;

TEST_CASE("feature vector array order is stable") {
    FeatureVector f;
    f.freq_hz = 1;
    f.d_bs_m = 2;
    f.is_los = 1;
    auto a = f.to_array();
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 2.0);
    CHECK(a[18] == 1.0);
    CHECK(FeatureVector::names()[0] == "freq_hz");
    CHECK(FeatureVector::names()[18] == "is_los");
    FeatureVector back = FeatureVector::from_array(a);
    CHECK(back.freq_hz == 1.0);
    CHECK(back.d_bs_m == 2.0);
}

TEST_CASE("feature table round trip preserves every field") {
    Rng rng(13);
    std::vector<LinkSample> rows;
    for (int i = 0; i < 25; ++i) {
        LinkSample s;
        s.id = "rec_" + std::to_string(i);
        s.bs_id = "bs" + std::to_string(i % 3);
        s.env = i % 2 ? "flat" : "hilly";
        s.lat = 40.0 + rng.uniform() * 0.01;
        s.lon = -86.0 - rng.uniform() * 0.01;
        s.source = i % 3 == 0 ? SourceTag::kSynthetic : SourceTag::kReal;
        s.target_delta_rsrp = rng.normal(0, 10);
        std::array<double, kNumFeatures> f{};
        for (auto& v : f) v = rng.normal(0, 100);
        f[18] = i % 2 ? 1.0 : 0.0;
        s.features = FeatureVector::from_array(f);
        rows.push_back(s);
    }

    std::ostringstream out;
    write_feature_table(rows, out);
    std::istringstream in(out.str());
    auto back = read_feature_table(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].id == rows[i].id);
        CHECK(back[i].env == rows[i].env);
        CHECK(back[i].source == rows[i].source);
        CHECK(back[i].target_delta_rsrp == rows[i].target_delta_rsrp); // bitwise
        auto fa = rows[i].features.to_array();
        auto fb = back[i].features.to_array();
        for (std::size_t c = 0; c < kNumFeatures; ++c) CHECK(fa[c] == fb[c]);
    }
}

TEST_CASE("feature table rejects malformed input") {
    CHECK_THROWS_AS(read_feature_table(*std::make_unique<std::istringstream>("")),
                    DataError);
    std::istringstream bad_header("id,bs_id\n");
    CHECK_THROWS_AS(read_feature_table(bad_header), DataError);
}

TEST_CASE("source tags and smote parent encoding") {
    CHECK(parse_source_tag("real") == SourceTag::kReal);
    CHECK(parse_source_tag("synthetic") == SourceTag::kSynthetic);
    CHECK(parse_source_tag("smote") == SourceTag::kSmote);
    CHECK_THROWS_AS(parse_source_tag("other"), DataError);

    auto id = make_smote_id(4, "meas_12", "meas_80");
    auto parents = smote_parent_ids(id);
    REQUIRE(parents.size() == 2);
    CHECK(parents[0] == "meas_12");
    CHECK(parents[1] == "meas_80");
    CHECK(smote_parent_ids("meas_12").empty());
}
