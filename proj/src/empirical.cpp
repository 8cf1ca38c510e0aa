#include "pathloss/empirical.hpp"

#include <cmath>

#include "pathloss/diffraction.hpp"
#include "pathloss/errors.hpp"

namespace pathloss {

const char* model_name(EmpiricalModelId id) {
    switch (id) {
        case EmpiricalModelId::kFspl: return "FSPL";
        case EmpiricalModelId::kCost231Hata: return "COST231_HATA";
        case EmpiricalModelId::kSui: return "SUI";
        case EmpiricalModelId::kTgppUma: return "TGPP_UMA";
        case EmpiricalModelId::kSpm: return "SPM";
    }
    return "?";
}

EmpiricalModelId parse_model_id(const std::string& name) {
    for (auto id : consensus_models())
        if (name == model_name(id)) return id;
    throw UnsupportedModel("unknown path loss model '" + name + "'");
}

const char* environment_name(Environment env) {
    switch (env) {
        case Environment::kUrban: return "urban";
        case Environment::kSuburban: return "suburban";
        case Environment::kRural: return "rural";
    }
    return "?";
}

Environment parse_environment(const std::string& name) {
    if (name == "urban") return Environment::kUrban;
    if (name == "suburban") return Environment::kSuburban;
    if (name == "rural") return Environment::kRural;
    throw ConfigError("unknown environment category '" + name + "'");
}

SuiTerrain parse_sui_terrain(const std::string& name) {
    if (name == "A") return SuiTerrain::kA;
    if (name == "B") return SuiTerrain::kB;
    if (name == "C") return SuiTerrain::kC;
    throw ConfigError("unknown SUI terrain category '" + name + "'");
}

SuiTerrain sui_terrain_for(Environment env) {
    switch (env) {
        case Environment::kUrban: return SuiTerrain::kA;
        case Environment::kSuburban: return SuiTerrain::kB;
        case Environment::kRural: return SuiTerrain::kC;
    }
    return SuiTerrain::kB;
}

namespace {

double clamped(double v, double lo, double hi, bool& flag) {
    if (v < lo) { flag = true; return lo; }
    if (v > hi) { flag = true; return hi; }
    return v;
}

double fspl_db(const LinkBudgetInput& in, bool& flag) {
    double f_mhz = in.freq_hz / 1e6;
    double d_km = clamped(in.d3d_m, 1.0, 1e7, flag) / 1000.0;
    return 32.45 + 20.0 * std::log10(f_mhz) + 20.0 * std::log10(d_km);
}

double cost231_hata_db(const LinkBudgetInput& in, bool& flag) {
    double f = clamped(in.freq_hz / 1e6, 1500.0, 2000.0, flag);
    double hb = clamped(in.h_bs_agl_m, 30.0, 200.0, flag);
    double hm = clamped(in.h_ue_agl_m, 1.0, 10.0, flag);
    double d = clamped(in.d3d_m / 1000.0, 1.0, 20.0, flag);

    double logf = std::log10(f);
    double a_hm;
    if (in.environment == Environment::kUrban) {
        double t = std::log10(11.75 * hm);
        a_hm = 3.2 * t * t - 4.97;
    } else {
        a_hm = (1.1 * logf - 0.7) * hm - (1.56 * logf - 0.8);
    }
    double cm = (in.environment == Environment::kUrban) ? 3.0 : 0.0;
    double pl = 46.3 + 33.9 * logf - 13.82 * std::log10(hb) - a_hm +
                (44.9 - 6.55 * std::log10(hb)) * std::log10(d) + cm;
    if (in.environment == Environment::kRural)
        pl += -4.78 * logf * logf + 18.33 * logf - 40.94; // open-area correction
    return pl;
}

double sui_db(const LinkBudgetInput& in, bool& flag) {
    double f = clamped(in.freq_hz / 1e6, 1900.0, 3500.0, flag);
    double hb = clamped(in.h_bs_agl_m, 10.0, 80.0, flag);
    double hr = clamped(in.h_ue_agl_m, 2.0, 10.0, flag);
    double d = clamped(in.d3d_m, 100.0, 8000.0, flag);

    double a, b, c;
    switch (in.terrain_category) {
        case SuiTerrain::kA: a = 4.6; b = 0.0075; c = 12.6; break;
        case SuiTerrain::kB: a = 4.0; b = 0.0065; c = 17.1; break;
        default:             a = 3.6; b = 0.0050; c = 20.0; break;
    }
    const double d0 = 100.0;
    double lambda = kSpeedOfLightMps / (f * 1e6);
    double A = 20.0 * std::log10(4.0 * kPi * d0 / lambda);
    double gamma = a - b * hb + c / hb;
    double xf = 6.0 * std::log10(f / 2000.0);
    double xh = (in.terrain_category == SuiTerrain::kC)
                    ? -20.0 * std::log10(hr / 2.0)
                    : -10.8 * std::log10(hr / 2.0);
    return A + 10.0 * gamma * std::log10(d / d0) + xf + xh;
}

// TR 36.873 3D-UMa with default street width 20 m and building height 20 m.
double tgpp_uma_db(const LinkBudgetInput& in, bool& flag) {
    double fc_ghz = clamped(in.freq_hz / 1e9, 2.0, 6.0, flag);
    double hbs = clamped(in.h_bs_agl_m, 10.0, 150.0, flag);
    double hut = clamped(in.h_ue_agl_m, 1.5, 22.5, flag);
    double d2d = clamped(in.d2d_m, 10.0, 5000.0, flag);
    double dh = hbs - hut;
    double d3d = std::sqrt(d2d * d2d + dh * dh);

    double hbs_eff = hbs - 1.0;
    double hut_eff = hut - 1.0;
    double dbp = 4.0 * hbs_eff * hut_eff * (fc_ghz * 1e9) / kSpeedOfLightMps;

    double pl_los;
    if (d2d <= dbp) {
        pl_los = 22.0 * std::log10(d3d) + 28.0 + 20.0 * std::log10(fc_ghz);
    } else {
        pl_los = 40.0 * std::log10(d3d) + 28.0 + 20.0 * std::log10(fc_ghz) -
                 9.0 * std::log10(dbp * dbp + dh * dh);
    }
    if (in.los) return pl_los;

    const double w = 20.0, h = 20.0;
    double t = std::log10(11.75 * hut);
    double pl_nlos = 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
                     (24.37 - 3.7 * (h / hbs) * (h / hbs)) * std::log10(hbs) +
                     (43.42 - 3.1 * std::log10(hbs)) * (std::log10(d3d) - 3.0) +
                     20.0 * std::log10(fc_ghz) - (3.2 * t * t - 4.97) -
                     0.6 * (hut - 1.5);
    return std::max(pl_los, pl_nlos);
}

double spm_db(const LinkBudgetInput& in, const SpmCoefficients& k, bool& flag) {
    double d = clamped(in.d3d_m, 1.0, 1e7, flag);
    double h_eff = clamped(in.h_bs_agl_m, 1.0, 1e4, flag);
    double h_ue = std::max(in.h_ue_agl_m, 0.1);
    return k.k1 + k.k2 * std::log10(d) + k.k3 * std::log10(h_eff) +
           k.k4 * in.diffraction_db + k.k5 * std::log10(d) * std::log10(h_eff) +
           k.k6 * h_ue + k.k7 * std::log10(h_ue);
}

} // namespace

PathLossValue path_loss(EmpiricalModelId model, const LinkBudgetInput& in,
                        const SpmCoefficients& spm) {
    if (in.freq_hz <= 0.0) throw ComputeError("path_loss requires freq > 0");
    if (in.d3d_m < 0.0 || in.d2d_m < 0.0) throw ComputeError("negative distance");
    PathLossValue out;
    switch (model) {
        case EmpiricalModelId::kFspl: out.db = fspl_db(in, out.clamped); break;
        case EmpiricalModelId::kCost231Hata: out.db = cost231_hata_db(in, out.clamped); break;
        case EmpiricalModelId::kSui: out.db = sui_db(in, out.clamped); break;
        case EmpiricalModelId::kTgppUma: out.db = tgpp_uma_db(in, out.clamped); break;
        case EmpiricalModelId::kSpm: out.db = spm_db(in, spm, out.clamped); break;
        default: throw UnsupportedModel("unhandled model id");
    }
    return out;
}

PathLossValue path_loss_over_profile(EmpiricalModelId model, const LinkBudgetInput& in,
                                     const Profile& profile, double freq_hz,
                                     const SpmCoefficients& spm) {
    PathLossValue base = path_loss(model, in, spm);
    DiffractionResult d = deygout_loss(profile, freq_hz, in.h_bs_agl_m, in.h_ue_agl_m, 3);
    base.db += d.loss_db;
    return base;
}

} // namespace pathloss
