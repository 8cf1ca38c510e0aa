#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathloss/augment.hpp"
#include "pathloss/empirical.hpp"
#include "pathloss/ensemble.hpp"
#include "pathloss/geodesy.hpp"
#include "pathloss/learner.hpp"

namespace pathloss {

struct EnvSpec {
    std::string name;
    std::string dsm_path; // absolute after load
    std::string dhm_path;
    bool units_feet = false;
    Environment category = Environment::kSuburban;
    std::optional<std::array<double, 4>> sim_bbox; // x0,y0,x1,y1 local meters
};

/// Parsed key=value run manifest. Every referenced file is known to exist
/// once loading succeeds; unknown keys are rejected.
struct RunManifest {
    GeoPoint origin;
    std::string measurements_csv;
    std::string bs_registry_csv;
    std::vector<EnvSpec> envs;

    double rsrp_threshold_dbm = -80.0;
    std::size_t n_min = 10;
    double vbw_default_deg = 7.0;
    double rx_height_agl_m = 1.5;
    std::optional<double> profile_step_m;
    std::uint64_t seed = 0;

    double sim_spacing_m = 30.0;
    EmpiricalModelId sim_model = EmpiricalModelId::kFspl;
    double sim_ref_tilt_deg = 4.0;

    SmoteConfig smote;
    TrainConfig gbdt;
    Metric ensemble_metric = Metric::kMae;
    double ensemble_step = 0.01;
    double scarcity_fraction = 0.05;

    SpmCoefficients spm;
    std::map<Environment, SuiTerrain> sui_map = {
        {Environment::kUrban, SuiTerrain::kA},
        {Environment::kSuburban, SuiTerrain::kB},
        {Environment::kRural, SuiTerrain::kC},
    };

    std::string base_dir;     // directory of the manifest file
    std::uint64_t fingerprint = 0; // FNV-1a of the raw manifest text

    const EnvSpec& env(const std::string& name) const;
};

RunManifest load_manifest(const std::string& path);

} // namespace pathloss
