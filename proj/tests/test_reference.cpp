#include <doctest.h>

#include <cmath>

#include "pathloss/errors.hpp"
#include "pathloss/reference.hpp"
#include "pathloss/rng.hpp"

using namespace pathloss;

namespace {

// hand-built candidate: geometry and model PLs set directly
Candidate cand(const std::string& id, double rsrp, double alpha_deg, double d_m,
               std::size_t sector = 0) {
    Candidate c;
    c.rec.id = id;
    c.rec.bs_id = "bs1";
    c.rec.rsrp_dbm = rsrp;
    c.freq_hz = 1.96e9;
    c.d2d_m = d_m;
    c.d3d_m = d_m;
    c.alpha_deg = alpha_deg;
    c.los = true;
    c.sector = sector;
    for (std::size_t m = 0; m < 5; ++m)
        c.pl_db[m] = 90.0 + 22.0 * std::log10(d_m) + 1.5 * static_cast<double>(m);
    return c;
}

} // namespace

TEST_CASE("EARFCN to frequency over the embedded band table") {
    CHECK(earfcn_to_freq_hz(900) == doctest::Approx(1960e6));    // band 2
    CHECK(earfcn_to_freq_hz(2000) == doctest::Approx(2115e6));   // band 4
    CHECK(earfcn_to_freq_hz(5230) == doctest::Approx(751e6));    // band 13
    CHECK(earfcn_to_freq_hz(39948) == doctest::Approx(2525.8e6)); // band 41
    CHECK(earfcn_to_freq_hz(68586) == doctest::Approx(617e6));   // band 71 low edge
    CHECK_THROWS_AS(earfcn_to_freq_hz(3000), UnknownEarfcn);
    CHECK_THROWS_AS(earfcn_to_freq_hz(-5), UnknownEarfcn);
}

TEST_CASE("LoS candidate selection applies the inclusive RSRP threshold") {
    std::vector<Candidate> cands = {cand("a", -79.0, 4.0, 500.0),
                                    cand("b", -80.0, 4.0, 500.0),
                                    cand("c", -81.0, 4.0, 500.0)};
    cands[2].los = true;
    auto kept = select_los_candidates(cands, -80.0);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].rec.id == "a");
    CHECK(kept[1].rec.id == "b");

    cands[0].los = false; // NLoS drops regardless of signal strength
    kept = select_los_candidates(cands, -80.0);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].rec.id == "b");
}

TEST_CASE("main-lobe window is closed on both ends") {
    std::vector<Candidate> cands = {cand("a", -70, 1.0, 400.0), cand("b", -70, 7.0, 400.0),
                                    cand("c", -70, 7.1, 400.0), cand("d", -70, 4.0, 400.0)};
    auto idx = mainlobe_subset(cands, 4.0, 6.0);
    REQUIRE(idx.size() == 3); // [1, 7] keeps a, b, d
    CHECK(cands[idx[0]].rec.id == "a");
    CHECK(cands[idx[1]].rec.id == "b");
    CHECK(cands[idx[2]].rec.id == "d");
}

TEST_CASE("downtilt estimation recovers a planted antenna pattern") {
    // RSRP = C - PL + G(alpha); G is a cos^n pattern centered on the true
    // tilt. Within the correct window the pattern is nearly flat, so the
    // window centered at the planted tilt minimizes the consensus MAE.
    for (double theta_true : {3.0, 8.0}) {
        Rng rng(101 + static_cast<std::uint64_t>(theta_true));
        std::vector<Candidate> cands;
        for (int i = 0; i < 400; ++i) {
            double alpha = 0.5 + 14.0 * rng.uniform();
            double d = 45.0 / std::tan(alpha * kPi / 180.0);
            Candidate c = cand("p" + std::to_string(i), 0.0, alpha, d);
            double gain =
                185.0 * 20.0 * std::log10(std::cos((alpha - theta_true) * kPi / 180.0));
            c.rec.rsrp_dbm = 30.0 - (90.0 + 22.0 * std::log10(d)) + gain +
                             rng.normal(0.0, 0.5);
            cands.push_back(c);
        }
        auto est = estimate_downtilt(cands, 7.0, 10);
        CHECK(std::abs(est.theta_est_deg - theta_true) <= 1.0);
    }
}

TEST_CASE("downtilt ties resolve toward the smaller angle") {
    // constant RSRP and constant per-model PL make every window's MAE zero
    std::vector<Candidate> cands;
    for (int i = 0; i < 200; ++i) {
        Candidate c = cand("p" + std::to_string(i), -70.0,
                           15.0 * static_cast<double>(i) / 199.0, 500.0);
        for (auto& pl : c.pl_db) pl = 120.0;
        cands.push_back(c);
    }
    auto est = estimate_downtilt(cands, 7.0, 10);
    CHECK(est.theta_est_deg == 0);
}

TEST_CASE("downtilt estimation needs enough reference points") {
    std::vector<Candidate> cands = {cand("a", -70, 4.0, 500.0)};
    CHECK_THROWS_AS(estimate_downtilt(cands, 7.0, 10), InsufficientReferencePoints);
}

TEST_CASE("the estimate depends only on the averaged-MAE objective") {
    // same candidates, models re-labeled (permuted columns): the averaged
    // objective and therefore the argmin cannot change
    Rng rng(55);
    std::vector<Candidate> cands;
    for (int i = 0; i < 300; ++i) {
        double alpha = 0.5 + 14.0 * rng.uniform();
        double d = 45.0 / std::tan(alpha * kPi / 180.0);
        Candidate c = cand("p" + std::to_string(i), 0.0, alpha, d);
        c.rec.rsrp_dbm =
            std::max(-159.0, -45.0 - (90.0 + 22.0 * std::log10(d)) + rng.normal(0.0, 2.0));
        cands.push_back(c);
    }
    auto base = estimate_downtilt(cands, 7.0, 10);
    auto permuted = cands;
    for (auto& c : permuted) {
        auto pl = c.pl_db;
        c.pl_db = {pl[4], pl[0], pl[1], pl[2], pl[3]};
    }
    auto est2 = estimate_downtilt(permuted, 7.0, 10);
    CHECK(base.theta_est_deg == est2.theta_est_deg);
    for (std::size_t t = 0; t < base.table.size(); ++t)
        CHECK(base.table[t].mae_mean_db ==
              doctest::Approx(est2.table[t].mae_mean_db).epsilon(1e-12));
}

TEST_CASE("baselines are plain means without sectors") {
    BaseStation bs;
    bs.id = "bs1";
    std::vector<Candidate> subset = {cand("a", -75, 4, 500), cand("b", -77, 4, 500),
                                     cand("c", -79, 4, 500)};
    auto b = compute_baselines(subset, bs, 4.0, 3);
    CHECK(b.rsrp_ref_dbm == doctest::Approx(-77.0).epsilon(1e-12));
    CHECK(b.n_ref == 3);

    // single-model constant PL
    for (auto& c : subset)
        for (auto& pl : c.pl_db) pl = 100.0;
    b = compute_baselines(subset, bs, 4.0, 3);
    for (auto id : consensus_models())
        CHECK(b.pl_ref_db.at(id) == doctest::Approx(100.0));

    // oracle mean on the original subset
    std::vector<Candidate> subset2 = {cand("a", -75, 4, 400), cand("b", -77, 4, 700),
                                      cand("c", -79, 4, 950)};
    b = compute_baselines(subset2, bs, 4.0, 3);
    double oracle = (subset2[0].pl_db[0] + subset2[1].pl_db[0] + subset2[2].pl_db[0]) / 3.0;
    CHECK(b.pl_ref_db.at(EmpiricalModelId::kFspl) == doctest::Approx(oracle).epsilon(1e-12));

    CHECK_THROWS_AS(compute_baselines(subset, bs, 4.0, 10), InsufficientReferencePoints);
}

TEST_CASE("sectored baselines average the sector means") {
    BaseStation bs;
    bs.id = "bs1";
    bs.sector_azimuths_deg = {0.0, 120.0, 240.0};
    // unbalanced sectors: two-stage averaging weighs sectors equally
    std::vector<Candidate> subset = {cand("a", -60, 4, 500, 0), cand("b", -70, 4, 500, 0),
                                     cand("c", -90, 4, 500, 1)};
    auto b = compute_baselines(subset, bs, 4.0, 3);
    CHECK(b.rsrp_ref_dbm == doctest::Approx((-65.0 + -90.0) / 2.0));
}

TEST_CASE("delta-RSRP differencing") {
    BaseStation bs;
    bs.id = "bs1";
    std::vector<Candidate> subset = {cand("a", -75, 4, 500), cand("b", -77, 4, 500),
                                     cand("c", -79, 4, 500)};
    auto b = compute_baselines(subset, bs, 4.0, 3);

    MeasurementRecord rec;
    rec.bs_id = "bs1";
    rec.rsrp_dbm = -90.0;
    CHECK(delta_rsrp_real(rec, b) == doctest::Approx(-13.0));
    rec.rsrp_dbm = b.rsrp_ref_dbm;
    CHECK(delta_rsrp_real(rec, b) == 0.0);

    MeasurementRecord foreign = rec;
    foreign.bs_id = "bs9";
    CHECK_THROWS_AS(delta_rsrp_real(foreign, b), BaselineMismatch);

    double pl_ref = b.pl_ref_db.at(EmpiricalModelId::kFspl);
    CHECK(delta_rsrp_model(pl_ref, EmpiricalModelId::kFspl, b) == 0.0);
    CHECK(delta_rsrp_model(pl_ref + 10.0, EmpiricalModelId::kFspl, b) ==
          doctest::Approx(-10.0));

    SiteBaseline empty;
    empty.bs_id = "bs1";
    CHECK_THROWS_AS(delta_rsrp_model(100.0, EmpiricalModelId::kSpm, empty),
                    UnknownModelBaseline);
}

TEST_CASE("uniform offsets cancel bit-identically") {
    BaseStation bs;
    bs.id = "bs1";
    // dyadic RSRP values and a grid-aligned shift keep the arithmetic exact
    std::vector<Candidate> subset;
    Rng rng(71);
    for (int i = 0; i < 16; ++i) {
        double rsrp = -88.0 + static_cast<double>(rng.below(4096)) / 256.0;
        subset.push_back(cand("p" + std::to_string(i), rsrp, 4.0, 400.0 + 10.0 * i));
    }
    auto base = compute_baselines(subset, bs, 4.0, 10);

    const double c = 4.0;
    auto shifted = subset;
    for (auto& s : shifted) s.rec.rsrp_dbm += c;
    auto base_shift = compute_baselines(shifted, bs, 4.0, 10);

    for (std::size_t i = 0; i < subset.size(); ++i) {
        double d1 = delta_rsrp_real(subset[i].rec, base);
        double d2 = delta_rsrp_real(shifted[i].rec, base_shift);
        CHECK(d1 == d2); // bitwise
    }

    // model-PL side of the cancellation
    auto pl_shifted = subset;
    for (auto& s : pl_shifted)
        for (auto& pl : s.pl_db) pl += c;
    auto base_pl = compute_baselines(pl_shifted, bs, 4.0, 10);
    for (std::size_t i = 0; i < subset.size(); ++i) {
        double d1 = delta_rsrp_model(subset[i].pl_db[0], EmpiricalModelId::kFspl, base);
        double d2 =
            delta_rsrp_model(pl_shifted[i].pl_db[0], EmpiricalModelId::kFspl, base_pl);
        CHECK(d1 == d2);
    }

    // Eq. 7 construction: the reference subset's deltas average to zero
    long double acc = 0.0;
    for (const auto& s : subset) acc += delta_rsrp_real(s.rec, base);
    CHECK(std::abs(static_cast<double>(acc / 16.0L)) == 0.0);
}
