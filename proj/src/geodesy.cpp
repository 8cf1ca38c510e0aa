#include "pathloss/geodesy.hpp"

#include <cmath>

#include "pathloss/errors.hpp"

namespace pathloss {

namespace {

bool same_origin(const GeoPoint& a, const GeoPoint& b) {
    return a.lat == b.lat && a.lon == b.lon;
}

} // namespace

LocalXY project(const GeoPoint& origin, const GeoPoint& p) {
    if (std::abs(p.lat - origin.lat) >= 1.0 || std::abs(p.lon - origin.lon) >= 1.0)
        throw OutOfProjectionRange("point more than 1 deg from projection origin");
    if (std::abs(origin.lat) > 90.0 || std::abs(p.lat) > 90.0 ||
        std::abs(origin.lon) > 180.0 || std::abs(p.lon) > 180.0)
        throw OutOfProjectionRange("coordinates outside WGS84 bounds");
    LocalXY q;
    q.x = kEarthRadiusM * std::cos(deg2rad(origin.lat)) * deg2rad(p.lon - origin.lon);
    q.y = kEarthRadiusM * deg2rad(p.lat - origin.lat);
    q.origin = origin;
    return q;
}

GeoPoint unproject(const GeoPoint& origin, double x, double y) {
    GeoPoint p;
    p.lat = origin.lat + rad2deg(y / kEarthRadiusM);
    p.lon = origin.lon + rad2deg(x / (kEarthRadiusM * std::cos(deg2rad(origin.lat))));
    return p;
}

double horizontal_distance(const LocalXY& a, const LocalXY& b) {
    if (!same_origin(a.origin, b.origin))
        throw MixedOrigins("points projected from different origins");
    return std::hypot(b.x - a.x, b.y - a.y);
}

double azimuth_aoa_deg(const LocalXY& bs, const LocalXY& ue) {
    double dx = bs.x - ue.x;
    double dy = bs.y - ue.y;
    if (dx == 0.0 && dy == 0.0)
        throw CoincidentPoints("azimuth undefined for coincident points");
    double az = rad2deg(std::atan2(dx, dy));
    if (az < 0.0) az += 360.0;
    if (az >= 360.0) az -= 360.0;
    return az;
}

double elevation_angle_deg(double d_horizontal_m, double delta_h_m) {
    if (d_horizontal_m <= 0.0)
        throw ZeroDistance("elevation angle needs positive horizontal distance");
    return rad2deg(std::atan(delta_h_m / d_horizontal_m));
}

} // namespace pathloss
