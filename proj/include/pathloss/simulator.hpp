#pragma once

#include <map>
#include <string>
#include <vector>

#include "pathloss/dataset.hpp"
#include "pathloss/features.hpp"
#include "pathloss/reference.hpp"

namespace pathloss {

/// Synthetic-dataset generation parameters for one environment.
struct SimConfig {
    std::string env;
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0; // bbox, local frame meters
    double spacing_m = 30.0;
    std::vector<std::string> bs_ids;
    std::vector<double> freqs_hz;
    EmpiricalModelId sim_model = EmpiricalModelId::kFspl;
    double rx_h_agl_m = 1.5;
    double ref_tilt_deg = 4.0; // main-lobe center for simulated reference subsets
    Environment env_category = Environment::kSuburban;
    SuiTerrain sui_terrain = SuiTerrain::kB;
    SpmCoefficients spm;
    std::size_t n_min = 10;
    double vbw_deg = 7.0;
};

// Regular receive grid at `spacing_m` over the bbox; points whose raster
// neighborhood is nodata (or outside the extent) are dropped. Throws
// EmptyGrid when nothing remains.
std::vector<GeoPoint> generate_grid(const SimConfig& config, const Terrain& terrain);

// Reference baseline from simulated data: LoS grid points whose look angle
// falls in the main-lobe window at config.ref_tilt_deg, mirroring the
// measured-reference construction. Only the sim model's PL baseline is
// populated.
SiteBaseline simulated_baseline(const SimConfig& config, const BaseStation& bs,
                                const Terrain& terrain);

// Full synthetic dataset: one LinkSample per (bs, freq, grid point), tagged
// `synthetic`, ordered by bs id, then frequency, then grid index. Baselines
// are taken from `measured_baselines` when present, otherwise computed from
// a simulated LoS reference subset.
std::vector<LinkSample> simulate_links(
    const SimConfig& config, const std::vector<BaseStation>& registry,
    const Terrain& terrain,
    const std::map<std::string, SiteBaseline>& measured_baselines);

} // namespace pathloss
