#include "pathloss/pipeline.hpp"

#include <algorithm>
#include <set>

#include "pathloss/errors.hpp"

namespace pathloss {

Pipeline Pipeline::load(const RunManifest& manifest) {
    Pipeline p;
    p.manifest_ = manifest;
    p.registry_ = read_bs_registry_csv(manifest.bs_registry_csv);
    p.records_ = read_measurement_csv(manifest.measurements_csv);
    for (const auto& e : manifest.envs) {
        Terrain t = load_terrain(e.dsm_path, e.dhm_path, manifest.origin, e.units_feet);
        if (manifest.profile_step_m) t.profile_step_m = *manifest.profile_step_m;
        p.terrains_.emplace(e.name, std::move(t));
    }
    // every measurement must reference a known BS and environment
    std::set<std::string> bs_ids;
    for (const auto& b : p.registry_) bs_ids.insert(b.id);
    for (const auto& r : p.records_) {
        if (!bs_ids.count(r.bs_id))
            throw DataError("measurement " + r.id + " references unknown BS '" + r.bs_id + "'");
        if (!p.terrains_.count(r.env))
            throw DataError("measurement " + r.id + " references unknown env '" + r.env + "'");
    }
    return p;
}

Pipeline Pipeline::load(const std::string& manifest_path) {
    return load(load_manifest(manifest_path));
}

const Terrain& Pipeline::terrain(const std::string& env) const {
    auto it = terrains_.find(env);
    if (it == terrains_.end())
        throw ConfigError("environment '" + env + "' not declared in the manifest");
    return it->second;
}

std::vector<std::string> Pipeline::env_names() const {
    std::vector<std::string> out;
    for (const auto& e : manifest_.envs) out.push_back(e.name);
    return out;
}

std::vector<MeasurementRecord> Pipeline::records_in(const std::string& env) const {
    std::vector<MeasurementRecord> out;
    for (const auto& r : records_)
        if (r.env == env) out.push_back(r);
    return out;
}

std::vector<BaseStation> Pipeline::stations_in(const std::string& env) const {
    const Terrain& t = terrain(env);
    std::vector<BaseStation> out;
    for (const auto& b : registry_) {
        LocalXY p = project(t.origin, b.location);
        if (t.dsm.in_extent(p.x, p.y)) out.push_back(b);
    }
    std::sort(out.begin(), out.end(),
              [](const BaseStation& a, const BaseStation& b) { return a.id < b.id; });
    return out;
}

ReferenceConfig Pipeline::reference_config() const {
    ReferenceConfig cfg;
    cfg.rsrp_threshold_dbm = manifest_.rsrp_threshold_dbm;
    cfg.n_min = manifest_.n_min;
    cfg.default_vbw_deg = manifest_.vbw_default_deg;
    cfg.feature_cfg.rx_h_agl_m = manifest_.rx_height_agl_m;
    cfg.spm = manifest_.spm;
    return cfg;
}

SuiTerrain Pipeline::sui_terrain(const std::string& env) const {
    Environment cat = manifest_.env(env).category;
    auto it = manifest_.sui_map.find(cat);
    return it != manifest_.sui_map.end() ? it->second : sui_terrain_for(cat);
}

std::map<std::string, SiteResult> Pipeline::site_results(const std::string& env) const {
    const Terrain& t = terrain(env);
    Environment cat = manifest_.env(env).category;
    SuiTerrain sui = sui_terrain(env);
    ReferenceConfig cfg = reference_config();

    std::map<std::string, std::vector<MeasurementRecord>> by_bs;
    for (const auto& r : records_in(env)) by_bs[r.bs_id].push_back(r);

    std::map<std::string, SiteResult> out;
    for (const auto& [bs_id, recs] : by_bs) {
        auto it = std::find_if(registry_.begin(), registry_.end(),
                               [&](const BaseStation& b) { return b.id == bs_id; });
        if (it == registry_.end())
            throw DataError("BS '" + bs_id + "' missing from the registry");
        out.emplace(bs_id, site_baseline(recs, *it, t, cat, sui, cfg));
    }
    if (out.empty())
        throw MissingDataset("no measurements in environment '" + env + "'");
    return out;
}

std::map<std::string, SiteBaseline> Pipeline::baselines(const std::string& env) const {
    std::map<std::string, SiteBaseline> out;
    for (auto& [bs_id, res] : site_results(env)) out.emplace(bs_id, res.baseline);
    return out;
}

SimConfig Pipeline::sim_config(const std::string& env) const {
    const EnvSpec& spec = manifest_.env(env);
    const Terrain& t = terrain(env);

    SimConfig c;
    c.env = env;
    if (spec.sim_bbox) {
        c.x0 = (*spec.sim_bbox)[0];
        c.y0 = (*spec.sim_bbox)[1];
        c.x1 = (*spec.sim_bbox)[2];
        c.y1 = (*spec.sim_bbox)[3];
    } else {
        // raster extent inset one cell so bilinear sampling stays clean
        c.x0 = t.dsm.xll + t.dsm.cellsize;
        c.y0 = t.dsm.yll + t.dsm.cellsize;
        c.x1 = t.dsm.xmax() - t.dsm.cellsize;
        c.y1 = t.dsm.ymax() - t.dsm.cellsize;
    }
    c.spacing_m = manifest_.sim_spacing_m;
    for (const auto& b : stations_in(env)) c.bs_ids.push_back(b.id);

    // carriers: every frequency observed in this environment's measurements,
    // falling back to the registry carriers of its stations
    std::set<double> freqs;
    for (const auto& r : records_in(env)) freqs.insert(earfcn_to_freq_hz(r.earfcn));
    if (freqs.empty())
        for (const auto& b : stations_in(env))
            for (double f : b.carriers_hz) freqs.insert(f);
    c.freqs_hz.assign(freqs.begin(), freqs.end());

    c.sim_model = manifest_.sim_model;
    c.rx_h_agl_m = manifest_.rx_height_agl_m;
    c.ref_tilt_deg = manifest_.sim_ref_tilt_deg;
    c.env_category = spec.category;
    c.sui_terrain = sui_terrain(env);
    c.spm = manifest_.spm;
    c.n_min = manifest_.n_min;
    c.vbw_deg = manifest_.vbw_default_deg;
    return c;
}

std::vector<LinkSample> Pipeline::build_real_table(
    const std::string& env, const std::map<std::string, SiteBaseline>& baselines) const {
    const Terrain& t = terrain(env);
    FeatureConfig fcfg;
    fcfg.rx_h_agl_m = manifest_.rx_height_agl_m;

    std::vector<LinkSample> out;
    for (const auto& r : records_in(env)) {
        auto bl = baselines.find(r.bs_id);
        if (bl == baselines.end())
            throw MissingDataset("no baseline for BS '" + r.bs_id + "' in env " + env);
        auto it = std::find_if(registry_.begin(), registry_.end(),
                               [&](const BaseStation& b) { return b.id == r.bs_id; });
        LinkSample s;
        s.id = r.id;
        s.bs_id = r.bs_id;
        s.env = env;
        s.lat = r.rx.lat;
        s.lon = r.rx.lon;
        s.source = SourceTag::kReal;
        s.features = compute_features(*it, r.rx, t, earfcn_to_freq_hz(r.earfcn), fcfg);
        s.target_delta_rsrp = delta_rsrp_real(r, bl->second);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<LinkSample> Pipeline::build_real_table(const std::string& env) const {
    return build_real_table(env, baselines(env));
}

std::vector<LinkSample> Pipeline::build_synth_table(
    const std::string& env, const std::map<std::string, SiteBaseline>& baselines) const {
    return simulate_links(sim_config(env), registry_, terrain(env), baselines);
}

std::vector<LinkSample> Pipeline::build_synth_table(const std::string& env) const {
    return build_synth_table(env, baselines(env));
}

EvalConfig Pipeline::eval_config() const {
    EvalConfig cfg;
    cfg.train = manifest_.gbdt;
    cfg.smote = manifest_.smote;
    cfg.metric = manifest_.ensemble_metric;
    cfg.weight_step = manifest_.ensemble_step;
    cfg.scarcity_fraction = manifest_.scarcity_fraction;
    return cfg;
}

} // namespace pathloss
