#pragma once

#include <map>
#include <string>
#include <vector>

#include "pathloss/dataset.hpp"
#include "pathloss/evaluation.hpp"
#include "pathloss/manifest.hpp"
#include "pathloss/reference.hpp"
#include "pathloss/simulator.hpp"

namespace pathloss {

/// Loaded working set behind the CLI subcommands: rasters, registry and
/// measurements from one manifest, plus the derived products each stage
/// needs.
class Pipeline {
public:
    static Pipeline load(const RunManifest& manifest);
    static Pipeline load(const std::string& manifest_path);

    const RunManifest& manifest() const { return manifest_; }
    const std::vector<BaseStation>& registry() const { return registry_; }
    const std::vector<MeasurementRecord>& records() const { return records_; }
    const Terrain& terrain(const std::string& env) const;
    std::vector<std::string> env_names() const;

    // measurements of one environment
    std::vector<MeasurementRecord> records_in(const std::string& env) const;
    // stations whose location falls inside the environment's raster extent
    std::vector<BaseStation> stations_in(const std::string& env) const;

    ReferenceConfig reference_config() const;
    SuiTerrain sui_terrain(const std::string& env) const;

    // per-BS downtilt + baselines for every site serving records in `env`
    std::map<std::string, SiteResult> site_results(const std::string& env) const;
    std::map<std::string, SiteBaseline> baselines(const std::string& env) const;

    SimConfig sim_config(const std::string& env) const;

    // real feature table: engineered features + Delta-RSRP targets
    std::vector<LinkSample> build_real_table(
        const std::string& env, const std::map<std::string, SiteBaseline>& baselines) const;
    std::vector<LinkSample> build_real_table(const std::string& env) const;

    // synthetic dataset for one environment
    std::vector<LinkSample> build_synth_table(
        const std::string& env, const std::map<std::string, SiteBaseline>& baselines) const;
    std::vector<LinkSample> build_synth_table(const std::string& env) const;

    EvalConfig eval_config() const;

private:
    RunManifest manifest_;
    std::vector<BaseStation> registry_;
    std::vector<MeasurementRecord> records_;
    std::map<std::string, Terrain> terrains_;
};

} // namespace pathloss
