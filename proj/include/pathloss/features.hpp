#pragma once

#include <string>
#include <vector>

#include "pathloss/dataset.hpp"
#include "pathloss/empirical.hpp"
#include "pathloss/geodesy.hpp"
#include "pathloss/raster.hpp"

namespace pathloss {

/// Cell site description from the BS registry.
struct BaseStation {
    std::string id;
    GeoPoint location;
    double tower_height_agl_m = 0.0;
    double vbw_deg = 7.0; // vertical 3 dB beamwidth
    std::vector<double> sector_azimuths_deg;
    std::vector<double> carriers_hz;
};

/// DSM/DHM pair for one environment, pre-validated to share a grid, plus
/// the projection origin tying raster coordinates to the world.
struct Terrain {
    Raster dsm;
    Raster dhm;
    Raster ground; // DSM - DHM
    GeoPoint origin;
    double profile_step_m = 5.0;
};

Terrain make_terrain(Raster dsm, Raster dhm, const GeoPoint& origin);
Terrain load_terrain(const std::string& dsm_path, const std::string& dhm_path,
                     const GeoPoint& origin, bool units_feet);

struct FeatureConfig {
    double rx_h_agl_m = 1.5;
    double neighborhood_radius_m = 50.0;
    int max_diffraction_edges = 3;
};

// Linear-interpolated percentile of an unsorted sample, q in [0,1].
double percentile(std::vector<double> values, double q);

// P90 - P10 of the ground profile.
double terrain_roughness(const Profile& profile);

struct TerrainPercentiles {
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
};
TerrainPercentiles terrain_percentiles(const Profile& profile);

// Fraction of interior samples whose surface lies strictly above the direct
// TX->RX ray.
double blockage_fraction(const Profile& profile, double tx_h_agl_m, double rx_h_agl_m);

struct DiffractionPoints {
    double d_first_m = 0.0; // 3D distance from BS antenna to first obstruction
    double d_last_m = 0.0;
    bool any = false;       // when false both distances hold the path length
};
DiffractionPoints diffraction_points(const Profile& profile, double tx_h_agl_m,
                                     double rx_h_agl_m);

// true iff no interior surface sample strictly exceeds the direct ray
bool los_classify(const Profile& profile, double tx_h_agl_m, double rx_h_agl_m);

// BS antenna height ASL: bare-ground elevation at the BS plus tower height.
double bs_antenna_asl(const BaseStation& bs, const Terrain& terrain);

// Full 19-entry feature vector for one BS -> receiver link.
FeatureVector compute_features(const BaseStation& bs, const GeoPoint& rx,
                               const Terrain& terrain, double freq_hz,
                               const FeatureConfig& cfg = {});

} // namespace pathloss
