#include "pathloss/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "pathloss/csv.hpp"
#include "pathloss/diffraction.hpp"
#include "pathloss/errors.hpp"

namespace pathloss {

namespace {

bool sampleable(const Terrain& t, double x, double y) {
    if (!t.dsm.in_extent(x, y)) return false;
    try {
        sample_bilinear(t.dsm, x, y);
        sample_bilinear(t.dhm, x, y);
    } catch (const ComputeError&) {
        return false;
    }
    return true;
}

struct GridPoint {
    std::size_t index; // row-major grid index before nodata removal
    LocalXY xy;
};

std::vector<GridPoint> grid_points(const SimConfig& c, const Terrain& t) {
    if (c.spacing_m <= 0.0) throw ConfigError("grid spacing must be positive");
    double w = c.x1 - c.x0;
    double h = c.y1 - c.y0;
    if (w < 0.0 || h < 0.0) throw ConfigError("degenerate simulation bbox");
    auto nx = static_cast<std::size_t>(std::floor(w / c.spacing_m)) + 1;
    auto ny = static_cast<std::size_t>(std::floor(h / c.spacing_m)) + 1;

    std::vector<GridPoint> pts;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            LocalXY p;
            p.x = c.x0 + static_cast<double>(i) * c.spacing_m;
            p.y = c.y0 + static_cast<double>(j) * c.spacing_m;
            p.origin = t.origin;
            if (!sampleable(t, p.x, p.y)) continue;
            pts.push_back({j * nx + i, p});
        }
    }
    if (pts.empty()) throw EmptyGrid("no valid grid points inside the bbox");
    return pts;
}

} // namespace

std::vector<GeoPoint> generate_grid(const SimConfig& config, const Terrain& terrain) {
    std::vector<GeoPoint> out;
    for (const auto& gp : grid_points(config, terrain))
        out.push_back(unproject(terrain.origin, gp.xy.x, gp.xy.y));
    return out;
}

SiteBaseline simulated_baseline(const SimConfig& config, const BaseStation& bs,
                                const Terrain& terrain) {
    LocalXY bs_xy = project(terrain.origin, bs.location);
    double bs_ant_asl = sample_bilinear(terrain.ground, bs_xy.x, bs_xy.y) +
                        bs.tower_height_agl_m;
    double vbw = bs.vbw_deg > 0.0 ? bs.vbw_deg : config.vbw_deg;
    double lo = config.ref_tilt_deg - vbw / 2.0;
    double hi = config.ref_tilt_deg + vbw / 2.0;
    // lowest carrier is the canonical reference frequency
    double freq = config.freqs_hz.empty()
                      ? 0.0
                      : *std::min_element(config.freqs_hz.begin(), config.freqs_hz.end());
    if (freq <= 0.0) throw ConfigError("simulated baseline needs a carrier frequency");

    std::vector<double> pls;
    std::vector<std::string> ids;
    for (const auto& gp : grid_points(config, terrain)) {
        double d2d = horizontal_distance(bs_xy, gp.xy);
        if (d2d == 0.0) continue;
        Profile prof = extract_profile(terrain.dsm, terrain.dhm, bs_xy, gp.xy,
                                       terrain.profile_step_m);
        if (!los_classify(prof, bs.tower_height_agl_m, config.rx_h_agl_m)) continue;
        double rx_asl = prof.ground.back() + config.rx_h_agl_m;
        double alpha = elevation_angle_deg(d2d, bs_ant_asl - rx_asl);
        if (alpha < lo || alpha > hi) continue;

        LinkBudgetInput lb;
        lb.freq_hz = freq;
        lb.d2d_m = d2d;
        lb.d3d_m = std::hypot(d2d, bs_ant_asl - rx_asl);
        lb.h_bs_agl_m = bs.tower_height_agl_m;
        lb.h_ue_agl_m = config.rx_h_agl_m;
        lb.environment = config.env_category;
        lb.terrain_category = config.sui_terrain;
        lb.los = true;
        pls.push_back(path_loss_over_profile(config.sim_model, lb, prof, freq, config.spm).db);
        ids.push_back("simref_" + bs.id + "_" + std::to_string(gp.index));
    }
    if (pls.size() < config.n_min)
        throw InsufficientReferencePoints(
            "simulated reference subset for BS '" + bs.id + "' has " +
            std::to_string(pls.size()) + " < n_min=" + std::to_string(config.n_min) +
            " LoS main-lobe points");

    SiteBaseline b;
    b.bs_id = bs.id;
    b.theta_est_deg = config.ref_tilt_deg;
    b.subset_ids = std::move(ids);
    b.n_ref = pls.size();
    double sum = 0.0;
    for (double p : pls) sum += p;
    b.pl_ref_db[config.sim_model] = sum / static_cast<double>(pls.size());
    b.rsrp_ref_dbm = 0.0; // no measured RSRP behind a simulated baseline
    return b;
}

std::vector<LinkSample> simulate_links(
    const SimConfig& config, const std::vector<BaseStation>& registry,
    const Terrain& terrain,
    const std::map<std::string, SiteBaseline>& measured_baselines) {
    if (config.freqs_hz.empty()) throw ConfigError("simulate_links needs frequencies");

    // deterministic order: bs ids sorted, then freq ascending, then grid index
    std::vector<std::string> bs_ids = config.bs_ids;
    std::sort(bs_ids.begin(), bs_ids.end());
    std::vector<double> freqs = config.freqs_hz;
    std::sort(freqs.begin(), freqs.end());
    auto pts = grid_points(config, terrain);

    FeatureConfig fcfg;
    fcfg.rx_h_agl_m = config.rx_h_agl_m;

    std::vector<LinkSample> out;
    for (const auto& bs_id : bs_ids) {
        auto it = std::find_if(registry.begin(), registry.end(),
                               [&](const BaseStation& b) { return b.id == bs_id; });
        if (it == registry.end())
            throw MissingDataset("BS '" + bs_id + "' not found in the registry");
        const BaseStation& bs = *it;

        SiteBaseline baseline;
        auto mb = measured_baselines.find(bs_id);
        if (mb != measured_baselines.end() &&
            mb->second.pl_ref_db.count(config.sim_model)) {
            baseline = mb->second;
        } else {
            baseline = simulated_baseline(config, bs, terrain);
        }

        LocalXY bs_xy = project(terrain.origin, bs.location);
        for (double freq : freqs) {
            for (const auto& gp : pts) {
                if (gp.xy.x == bs_xy.x && gp.xy.y == bs_xy.y) continue;
                GeoPoint rx = unproject(terrain.origin, gp.xy.x, gp.xy.y);

                LinkSample s;
                s.features = compute_features(bs, rx, terrain, freq, fcfg);

                LinkBudgetInput lb;
                lb.freq_hz = freq;
                lb.d2d_m = s.features.d_bs_m;
                lb.d3d_m = std::hypot(s.features.d_bs_m, s.features.rel_bs_height_m);
                lb.h_bs_agl_m = bs.tower_height_agl_m;
                lb.h_ue_agl_m = config.rx_h_agl_m;
                lb.environment = config.env_category;
                lb.terrain_category = config.sui_terrain;
                lb.los = s.features.is_los > 0.5;

                // diffraction is already a feature; reuse it instead of
                // re-running deygout over the same profile
                double pl = path_loss(config.sim_model, lb, config.spm).db +
                            s.features.diffraction_loss_db;
                s.target_delta_rsrp = delta_rsrp_model(pl, config.sim_model, baseline);
                s.id = "syn_" + config.env + "_" + bs.id + "_" +
                       format_double(freq / 1e6) + "_" + std::to_string(gp.index);
                s.bs_id = bs.id;
                s.env = config.env;
                s.lat = rx.lat;
                s.lon = rx.lon;
                s.source = SourceTag::kSynthetic;
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

} // namespace pathloss
