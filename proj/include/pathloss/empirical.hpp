#pragma once

#include <array>
#include <string>

#include "pathloss/raster.hpp"

namespace pathloss {

/// The five-model consensus set used for downtilt estimation and the
/// configurable simulator core.
enum class EmpiricalModelId { kFspl, kCost231Hata, kSui, kTgppUma, kSpm };

enum class Environment { kUrban, kSuburban, kRural };
enum class SuiTerrain { kA, kB, kC };

const char* model_name(EmpiricalModelId id);
EmpiricalModelId parse_model_id(const std::string& name);
const char* environment_name(Environment env);
Environment parse_environment(const std::string& name);
SuiTerrain parse_sui_terrain(const std::string& name);

// default terrain-category mapping; overridable via the run manifest
SuiTerrain sui_terrain_for(Environment env);

constexpr std::array<EmpiricalModelId, 5> consensus_models() {
    return {EmpiricalModelId::kFspl, EmpiricalModelId::kCost231Hata,
            EmpiricalModelId::kSui, EmpiricalModelId::kTgppUma,
            EmpiricalModelId::kSpm};
}

/// Standard Propagation Model coefficients. d in meters, heights in meters.
/// Defaults are the common calibration starting values; k4 multiplies an
/// externally supplied diffraction loss.
struct SpmCoefficients {
    double k1 = 23.5;
    double k2 = 44.9;
    double k3 = 5.83;
    double k4 = 0.0;
    double k5 = 0.0;
    double k6 = 0.0;
    double k7 = 0.0;
};

struct LinkBudgetInput {
    double freq_hz = 0.0;
    double d3d_m = 0.0;
    double d2d_m = 0.0;
    double h_bs_agl_m = 0.0;
    double h_ue_agl_m = 1.5;
    Environment environment = Environment::kSuburban;
    SuiTerrain terrain_category = SuiTerrain::kB;
    bool los = true;             // selects the 3GPP UMa branch
    double diffraction_db = 0.0; // SPM k4 slot
};

struct PathLossValue {
    double db = 0.0;
    bool clamped = false; // an input was pulled to its validity bound
};

// Median path loss of the published closed forms. Out-of-validity inputs
// are clamped to the nearest bound and flagged, never rejected.
PathLossValue path_loss(EmpiricalModelId model, const LinkBudgetInput& in,
                        const SpmCoefficients& spm = {});

// path_loss plus Deygout knife-edge loss over the profile.
PathLossValue path_loss_over_profile(EmpiricalModelId model, const LinkBudgetInput& in,
                                     const Profile& profile, double freq_hz,
                                     const SpmCoefficients& spm = {});

} // namespace pathloss
