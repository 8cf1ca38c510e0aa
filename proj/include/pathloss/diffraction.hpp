#pragma once

#include <cstddef>
#include <vector>

#include "pathloss/raster.hpp"

namespace pathloss {

inline constexpr double kSpeedOfLightMps = 299792458.0;

/// One knife edge selected along a path. d1/d2 are measured within the
/// (sub)path the edge was extracted from; for the principal edge they span
/// the full BS->RX path. h is signed height of the obstruction above the
/// direct ray.
struct EdgeObstruction {
    std::size_t index = 0; // profile sample index
    double d1_m = 0.0;
    double d2_m = 0.0;
    double h_m = 0.0;
    double nu = 0.0;
};

// Fresnel-Kirchhoff parameter nu = h * sqrt((2/lambda) * (1/d1 + 1/d2)).
double fresnel_nu(double h_m, double d1_m, double d2_m, double freq_hz);

// Single knife-edge loss J(nu) per ITU-R P.526: 0 for nu <= -0.78, else
// 6.9 + 20*log10(sqrt((nu-0.1)^2 + 1) + nu - 0.1).
double knife_edge_loss_db(double nu);

struct DiffractionResult {
    double loss_db = 0.0;
    std::vector<EdgeObstruction> edges;
};

// Deygout multiple knife-edge construction: the principal edge is the
// interior SURFACE point with maximum nu against the direct TX->RX ray;
// sub-paths on each side are processed recursively until max_edges edges
// are collected or no remaining point has nu > -0.78.
DiffractionResult deygout_loss(const Profile& profile, double freq_hz,
                               double tx_h_agl_m, double rx_h_agl_m,
                               int max_edges = 3);

} // namespace pathloss
