#include "pathloss/features.hpp"

#include <algorithm>
#include <cmath>

#include "pathloss/diffraction.hpp"
#include "pathloss/errors.hpp"

namespace pathloss {

Terrain make_terrain(Raster dsm, Raster dhm, const GeoPoint& origin) {
    Terrain t;
    t.ground = ground_from(dsm, dhm);
    t.dsm = std::move(dsm);
    t.dhm = std::move(dhm);
    t.origin = origin;
    t.profile_step_m = std::min(t.dsm.cellsize, 5.0);
    return t;
}

Terrain load_terrain(const std::string& dsm_path, const std::string& dhm_path,
                     const GeoPoint& origin, bool units_feet) {
    Raster dsm = load_ascii_grid(dsm_path);
    Raster dhm = load_ascii_grid(dhm_path);
    if (units_feet) {
        convert_feet_to_meters(dsm);
        convert_feet_to_meters(dhm);
    }
    return make_terrain(std::move(dsm), std::move(dhm), origin);
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw DegenerateProfile("percentile of empty sample");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0];
    double pos = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= values.size() - 1) return values.back();
    double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double terrain_roughness(const Profile& profile) {
    if (profile.size() < 2) throw DegenerateProfile("roughness needs >= 2 samples");
    return percentile(profile.ground, 0.90) - percentile(profile.ground, 0.10);
}

TerrainPercentiles terrain_percentiles(const Profile& profile) {
    if (profile.size() < 2) throw DegenerateProfile("percentiles need >= 2 samples");
    TerrainPercentiles p;
    p.p25 = percentile(profile.ground, 0.25);
    p.p50 = percentile(profile.ground, 0.50);
    p.p75 = percentile(profile.ground, 0.75);
    return p;
}

namespace {

// Shared obstruction test: interior sample i is obstructed when its surface
// lies strictly above the straight ray. Keeping one predicate guarantees
// los_classify, blockage_fraction and diffraction_points agree.
struct RayScan {
    const Profile& p;
    double tx_z;
    double rx_z;

    explicit RayScan(const Profile& profile, double tx_h_agl, double rx_h_agl)
        : p(profile),
          tx_z(profile.ground.front() + tx_h_agl),
          rx_z(profile.ground.back() + rx_h_agl) {
        if (profile.size() < 3)
            throw DegenerateProfile("ray scan needs >= 3 profile samples");
    }

    double ray_z(std::size_t i) const {
        double t = p.distances[i] / p.length();
        return tx_z + (rx_z - tx_z) * t;
    }
    bool obstructed(std::size_t i) const { return p.surface[i] > ray_z(i); }
    std::size_t interior_count() const { return p.size() - 2; }
};

} // namespace

double blockage_fraction(const Profile& profile, double tx_h_agl_m, double rx_h_agl_m) {
    RayScan scan(profile, tx_h_agl_m, rx_h_agl_m);
    std::size_t blocked = 0;
    for (std::size_t i = 1; i + 1 < profile.size(); ++i)
        if (scan.obstructed(i)) ++blocked;
    return static_cast<double>(blocked) / static_cast<double>(scan.interior_count());
}

DiffractionPoints diffraction_points(const Profile& profile, double tx_h_agl_m,
                                     double rx_h_agl_m) {
    RayScan scan(profile, tx_h_agl_m, rx_h_agl_m);
    DiffractionPoints out;
    std::size_t first = 0, last = 0;
    for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
        if (!scan.obstructed(i)) continue;
        if (!out.any) first = i;
        last = i;
        out.any = true;
    }
    if (!out.any) {
        out.d_first_m = out.d_last_m = profile.length();
        return out;
    }
    auto dist3d = [&](std::size_t i) {
        double dz = profile.surface[i] - scan.tx_z;
        return std::hypot(profile.distances[i], dz);
    };
    out.d_first_m = dist3d(first);
    out.d_last_m = dist3d(last);
    return out;
}

bool los_classify(const Profile& profile, double tx_h_agl_m, double rx_h_agl_m) {
    RayScan scan(profile, tx_h_agl_m, rx_h_agl_m);
    for (std::size_t i = 1; i + 1 < profile.size(); ++i)
        if (scan.obstructed(i)) return false;
    return true;
}

double bs_antenna_asl(const BaseStation& bs, const Terrain& terrain) {
    LocalXY p = project(terrain.origin, bs.location);
    double ground = sample_bilinear(terrain.ground, p.x, p.y);
    return ground + bs.tower_height_agl_m;
}

FeatureVector compute_features(const BaseStation& bs, const GeoPoint& rx,
                               const Terrain& terrain, double freq_hz,
                               const FeatureConfig& cfg) {
    LocalXY bs_xy = project(terrain.origin, bs.location);
    LocalXY rx_xy = project(terrain.origin, rx);
    double d_bs = horizontal_distance(bs_xy, rx_xy);
    if (d_bs == 0.0) throw CoincidentPoints("receiver coincides with the BS");

    Profile prof = extract_profile(terrain.dsm, terrain.dhm, bs_xy, rx_xy,
                                   terrain.profile_step_m);
    double tx_h = bs.tower_height_agl_m;
    double rx_h = cfg.rx_h_agl_m;

    double bs_ant_asl = prof.ground.front() + tx_h;
    double rx_asl = prof.ground.back() + rx_h;

    FeatureVector f;
    f.freq_hz = freq_hz;
    f.d_bs_m = d_bs;
    f.rel_bs_height_m = bs_ant_asl - rx_asl;

    f.avg_clutter_height_m =
        neighborhood_stats(terrain.dhm, rx_xy, cfg.neighborhood_radius_m).mean;
    f.terrain_roughness_m = terrain_roughness(prof);

    double ground_at_bs_mean =
        neighborhood_stats(terrain.ground, bs_xy, cfg.neighborhood_radius_m).mean;
    f.tx_haat_m = bs_ant_asl - ground_at_bs_mean;

    double surface_at_rx_mean =
        neighborhood_stats(terrain.dsm, rx_xy, cfg.neighborhood_radius_m).mean;
    f.ratio_alpha = (bs_ant_asl - surface_at_rx_mean) / d_bs;

    double clutter_at_bs_mean =
        neighborhood_stats(terrain.dhm, bs_xy, cfg.neighborhood_radius_m).mean;
    f.ratio_beta = clutter_at_bs_mean / d_bs;

    f.azimuth_aoa_deg = azimuth_aoa_deg(bs_xy, rx_xy);
    f.tilt_aoa_deg = elevation_angle_deg(d_bs, rx_asl - bs_ant_asl);

    DiffractionPoints dp = diffraction_points(prof, tx_h, rx_h);
    f.d_diff_first_m = dp.d_first_m;
    f.d_diff_last_m = dp.d_last_m;

    f.mean_terrain_m = 0.0;
    for (double g : prof.ground) f.mean_terrain_m += g;
    f.mean_terrain_m /= static_cast<double>(prof.size());

    TerrainPercentiles tp = terrain_percentiles(prof);
    f.terrain_p25_m = tp.p25;
    f.terrain_p50_m = tp.p50;
    f.terrain_p75_m = tp.p75;

    f.blockage_pct = blockage_fraction(prof, tx_h, rx_h);
    f.diffraction_loss_db =
        deygout_loss(prof, freq_hz, tx_h, rx_h, cfg.max_diffraction_edges).loss_db;
    f.is_los = dp.any ? 0.0 : 1.0;
    return f;
}

} // namespace pathloss
