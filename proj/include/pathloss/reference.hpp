#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathloss/empirical.hpp"
#include "pathloss/features.hpp"

namespace pathloss {

/// One drive/walk-test row from the measurement CSV.
struct MeasurementRecord {
    std::string id;
    GeoPoint rx;
    double rsrp_dbm = 0.0;
    long earfcn = 0;
    std::string cell_id;
    std::string bs_id;
    std::string env;
    std::optional<double> timestamp;
};

// Measurement CSV columns:
//   id,lat,lon,rsrp_dbm,earfcn,cell_id,bs_id,env,timestamp  (timestamp may be empty)
std::vector<MeasurementRecord> read_measurement_csv(const std::string& path);
void write_measurement_csv(const std::vector<MeasurementRecord>& records,
                           const std::string& path);

// BS registry CSV columns:
//   bs_id,lat,lon,tower_height_agl_m,vbw_deg,sector_azimuths,carriers_hz
// (the last two are semicolon-separated lists, either may be empty)
std::vector<BaseStation> read_bs_registry_csv(const std::string& path);
void write_bs_registry_csv(const std::vector<BaseStation>& bss, const std::string& path);

// LTE downlink EARFCN -> carrier frequency. Bands 2, 4, 5, 12, 13, 17, 25,
// 26, 41, 66, 71; anything else throws UnknownEarfcn.
double earfcn_to_freq_hz(long earfcn);

struct ReferenceConfig {
    double rsrp_threshold_dbm = -80.0;
    std::size_t n_min = 10;
    double default_vbw_deg = 7.0;
    FeatureConfig feature_cfg;
    SpmCoefficients spm;
};

/// A measurement enriched with link geometry and per-model path loss,
/// the working unit of downtilt estimation and baseline construction.
struct Candidate {
    MeasurementRecord rec;
    double freq_hz = 0.0;
    double d2d_m = 0.0;
    double d3d_m = 0.0;
    double alpha_deg = 0.0; // downward look angle from the BS antenna
    bool los = false;
    std::size_t sector = 0; // index into bs.sector_azimuths_deg (0 if none)
    std::array<double, 5> pl_db{}; // consensus_models() order, diffraction included
};

// Geometry + model evaluation for every record of one BS.
std::vector<Candidate> build_candidates(const std::vector<MeasurementRecord>& records,
                                        const BaseStation& bs, const Terrain& terrain,
                                        Environment env_category, SuiTerrain sui_terrain,
                                        const ReferenceConfig& cfg);

// LoS reference candidates: unobstructed path AND rsrp >= threshold.
std::vector<Candidate> select_los_candidates(const std::vector<Candidate>& candidates,
                                             double threshold_dbm);
std::vector<MeasurementRecord> select_los_candidates(
    const std::vector<MeasurementRecord>& records, const BaseStation& bs,
    const Terrain& terrain, const ReferenceConfig& cfg);

// Indices of candidates whose look angle lies in [theta - vbw/2, theta + vbw/2].
std::vector<std::size_t> mainlobe_subset(const std::vector<Candidate>& candidates,
                                         double theta_deg, double vbw_deg);

struct DowntiltRow {
    int theta_deg = 0;
    std::size_t count = 0;
    std::array<double, 5> mae_db{}; // per model
    double mae_mean_db = 0.0;       // equal-weight average of the five
    bool qualified = false;         // count >= n_min
};

struct DowntiltEstimate {
    int theta_est_deg = 0;
    std::vector<DowntiltRow> table; // one row per candidate tilt 0..15
};

// Consensus downtilt: integer sweep over 0..15 deg; per tilt, the main-lobe
// subset is compared model-vs-measured in relative (mean-differenced) form
// and the tilt minimizing the five-model average MAE wins, ties to the
// smaller angle. Throws InsufficientReferencePoints when no tilt reaches
// n_min.
DowntiltEstimate estimate_downtilt(const std::vector<Candidate>& los_candidates,
                                   double vbw_deg, std::size_t n_min);

/// Per-site baselines from the selected reference subset.
struct SiteBaseline {
    std::string bs_id;
    double theta_est_deg = 0.0;
    std::vector<std::string> subset_ids;
    double rsrp_ref_dbm = 0.0;
    std::map<EmpiricalModelId, double> pl_ref_db;
    std::size_t n_ref = 0;
};

// Means over the reference subset. With sector azimuths present the mean is
// two-stage (per-sector means averaged); otherwise a plain mean, in which
// case rsrp_ref equals the subset mean exactly.
SiteBaseline compute_baselines(const std::vector<Candidate>& subset,
                               const BaseStation& bs, double theta_est_deg,
                               std::size_t n_min);

double delta_rsrp_real(const MeasurementRecord& rec, const SiteBaseline& baseline);
double delta_rsrp_model(double pl_db, EmpiricalModelId model, const SiteBaseline& baseline);

// Full per-site chain: candidates -> LoS filter -> downtilt -> reference
// subset -> baselines.
struct SiteResult {
    SiteBaseline baseline;
    DowntiltEstimate downtilt;
};
SiteResult site_baseline(const std::vector<MeasurementRecord>& records,
                         const BaseStation& bs, const Terrain& terrain,
                         Environment env_category, SuiTerrain sui_terrain,
                         const ReferenceConfig& cfg);

} // namespace pathloss
