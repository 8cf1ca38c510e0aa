#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pathloss/geodesy.hpp"

namespace pathloss {

inline constexpr double kFeetToMeters = 0.3048;

/// Georeferenced elevation grid in the local planar frame. Values are
/// row-major with row 0 the SOUTHERNMOST row (y = yll), regardless of file
/// order. Immutable after parse; concurrent read-only sampling is safe.
struct Raster {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double xll = 0.0;      // lower-left corner, meters in local frame
    double yll = 0.0;
    double cellsize = 0.0; // meters
    double nodata = -9999.0;
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const {
        return values[row * ncols + col];
    }
    double& at(std::size_t row, std::size_t col) {
        return values[row * ncols + col];
    }
    double xmax() const { return xll + cellsize * static_cast<double>(ncols); }
    double ymax() const { return yll + cellsize * static_cast<double>(nrows); }
    bool in_extent(double x, double y) const {
        return x >= xll && x <= xmax() && y >= yll && y <= ymax();
    }
    // center coordinates of cell (row, col)
    double cell_x(std::size_t col) const { return xll + (static_cast<double>(col) + 0.5) * cellsize; }
    double cell_y(std::size_t row) const { return yll + (static_cast<double>(row) + 0.5) * cellsize; }
};

// ESRI-style ASCII grid: six header keys (ncols, nrows, xllcorner, yllcorner,
// cellsize, NODATA_value; case-insensitive) followed by nrows data lines,
// first line = northernmost row.
Raster parse_ascii_grid(std::istream& in);
Raster parse_ascii_grid(const std::string& text);
Raster load_ascii_grid(const std::string& path);
void write_ascii_grid(const Raster& r, std::ostream& out);
void save_ascii_grid(const Raster& r, const std::string& path);

// In-place feet -> meters conversion of values and georeferencing.
void convert_feet_to_meters(Raster& r);

// Bilinear interpolation of cell-center values. Within half a cell of the
// border the interpolation frame is clamped (edge extension). Throws
// OutOfExtent / NoDataNeighborhood.
double sample_bilinear(const Raster& r, double x, double y);

struct NeighborhoodStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

// Statistics over all cell centers within `radius_m` of `center`, nodata
// cells excluded. Throws EmptyNeighborhood when no cell qualifies.
NeighborhoodStats neighborhood_stats(const Raster& r, const LocalXY& center, double radius_m);

/// Terrain/surface samples along a straight path. All arrays share length;
/// distances[0] = 0 and distances.back() = path length.
struct Profile {
    std::vector<double> distances; // meters from the BS end
    std::vector<double> ground;    // meters ASL (DSM - DHM)
    std::vector<double> surface;   // meters ASL (DSM)
    std::vector<double> clutter;   // meters AGL (DHM)

    std::size_t size() const { return distances.size(); }
    double length() const { return distances.empty() ? 0.0 : distances.back(); }
};

// N = max(64, ceil(dist/step)) + 1 uniformly spaced samples including both
// endpoints. step <= 0 or coincident endpoints are errors.
Profile extract_profile(const Raster& dsm, const Raster& dhm, const LocalXY& a,
                        const LocalXY& b, double step_m);

// DSM - DHM on a shared grid; throws GridMismatch if the grids differ.
Raster ground_from(const Raster& dsm, const Raster& dhm);

} // namespace pathloss
