#pragma once

#include <optional>

namespace pathloss {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// WGS84 geographic coordinate. Height above sea level is optional and
/// normally filled from the DSM.
struct GeoPoint {
    double lat = 0.0; // degrees, [-90, 90]
    double lon = 0.0; // degrees, [-180, 180]
    std::optional<double> h_asl;
};

/// Point in the local tangent-plane frame anchored at `origin`.
/// x is meters east of the origin, y meters north.
struct LocalXY {
    double x = 0.0;
    double y = 0.0;
    GeoPoint origin;
};

// Equirectangular projection onto the tangent plane at `origin`. Valid for
// county-scale extents; preconditions reject anything beyond 1 degree of
// separation (OutOfProjectionRange).
LocalXY project(const GeoPoint& origin, const GeoPoint& p);
GeoPoint unproject(const GeoPoint& origin, double x, double y);

// Euclidean distance; both points must share the projection origin.
double horizontal_distance(const LocalXY& a, const LocalXY& b);

// Azimuth angle of arrival: atan2(x_bs - x_ue, y_bs - y_ue) mapped to
// [0, 360). 0 = due north of the receiver, 90 = due east.
double azimuth_aoa_deg(const LocalXY& bs, const LocalXY& ue);

// atan(delta_h / d) in degrees. Callers choose the sign convention of
// delta_h: the downward look angle alpha(p) passes (h_bs - h_point) so a
// point below the BS yields a positive angle.
double elevation_angle_deg(double d_horizontal_m, double delta_h_m);

} // namespace pathloss
