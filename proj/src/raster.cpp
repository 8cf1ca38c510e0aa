#include "pathloss/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pathloss/csv.hpp"
#include "pathloss/errors.hpp"

namespace pathloss {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

Raster parse_ascii_grid(std::istream& in) {
    Raster r;
    bool have_ncols = false, have_nrows = false, have_xll = false, have_yll = false,
         have_cell = false, have_nodata = false;

    // six header lines, order-insensitive
    std::string line;
    int header_lines = 0;
    while (header_lines < 6 && std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key >> value))
            throw MalformedHeader("short header line: '" + line + "'");
        key = lower(key);
        double v = parse_double(value, "grid header " + key);
        if (key == "ncols") {
            if (v < 1 || v != std::floor(v)) throw MalformedHeader("bad ncols");
            r.ncols = static_cast<std::size_t>(v);
            have_ncols = true;
        } else if (key == "nrows") {
            if (v < 1 || v != std::floor(v)) throw MalformedHeader("bad nrows");
            r.nrows = static_cast<std::size_t>(v);
            have_nrows = true;
        } else if (key == "xllcorner") {
            r.xll = v;
            have_xll = true;
        } else if (key == "yllcorner") {
            r.yll = v;
            have_yll = true;
        } else if (key == "cellsize") {
            if (v <= 0) throw MalformedHeader("cellsize must be positive");
            r.cellsize = v;
            have_cell = true;
        } else if (key == "nodata_value") {
            r.nodata = v;
            have_nodata = true;
        } else {
            throw MalformedHeader("unknown header key '" + key + "'");
        }
        ++header_lines;
    }
    if (!(have_ncols && have_nrows && have_xll && have_yll && have_cell && have_nodata))
        throw MalformedHeader("missing one of ncols/nrows/xllcorner/yllcorner/cellsize/NODATA_value");

    r.values.assign(r.ncols * r.nrows, r.nodata);
    // file rows run north -> south; store them south-first
    for (std::size_t file_row = 0; file_row < r.nrows; ++file_row) {
        if (!std::getline(in, line))
            throw RowLengthMismatch("expected " + std::to_string(r.nrows) +
                                    " data rows, got " + std::to_string(file_row));
        std::size_t grid_row = r.nrows - 1 - file_row;
        std::size_t col = 0;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= end) break;
            const char* tok = p;
            while (p < end && !(*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (col >= r.ncols)
                throw RowLengthMismatch("row " + std::to_string(file_row) + " has more than " +
                                        std::to_string(r.ncols) + " values");
            double v;
            auto [q, ec] = std::from_chars(tok, p, v);
            if (ec != std::errc() || q != p)
                throw NonNumericCell("row " + std::to_string(file_row) + " col " +
                                     std::to_string(col) + ": '" + std::string(tok, p) + "'");
            r.at(grid_row, col) = v;
            ++col;
        }
        if (col != r.ncols)
            throw RowLengthMismatch("row " + std::to_string(file_row) + " has " +
                                    std::to_string(col) + " values, expected " +
                                    std::to_string(r.ncols));
    }
    return r;
}

Raster parse_ascii_grid(const std::string& text) {
    std::istringstream in(text);
    return parse_ascii_grid(in);
}

Raster load_ascii_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open raster: " + path);
    try {
        return parse_ascii_grid(in);
    } catch (const Error& e) {
        throw DataError(e.name(), std::string(e.what()) + " (" + path + ")");
    }
}

void write_ascii_grid(const Raster& r, std::ostream& out) {
    out << "ncols " << r.ncols << "\n";
    out << "nrows " << r.nrows << "\n";
    out << "xllcorner " << format_double(r.xll) << "\n";
    out << "yllcorner " << format_double(r.yll) << "\n";
    out << "cellsize " << format_double(r.cellsize) << "\n";
    out << "NODATA_value " << format_double(r.nodata) << "\n";
    for (std::size_t file_row = 0; file_row < r.nrows; ++file_row) {
        std::size_t grid_row = r.nrows - 1 - file_row;
        for (std::size_t col = 0; col < r.ncols; ++col) {
            if (col) out << ' ';
            out << format_double(r.at(grid_row, col));
        }
        out << '\n';
    }
}

void save_ascii_grid(const Raster& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write raster: " + path);
    write_ascii_grid(r, out);
}

void convert_feet_to_meters(Raster& r) {
    r.xll *= kFeetToMeters;
    r.yll *= kFeetToMeters;
    r.cellsize *= kFeetToMeters;
    for (double& v : r.values)
        if (v != r.nodata) v *= kFeetToMeters;
    // nodata sentinel stays as-is
}

double sample_bilinear(const Raster& r, double x, double y) {
    if (!r.in_extent(x, y))
        throw OutOfExtent("sample (" + format_double(x) + "," + format_double(y) +
                          ") outside raster extent");
    // grid coordinates of cell centers: gx = 0 at center of column 0
    double gx = (x - r.xll) / r.cellsize - 0.5;
    double gy = (y - r.yll) / r.cellsize - 0.5;
    gx = std::clamp(gx, 0.0, static_cast<double>(r.ncols - 1));
    gy = std::clamp(gy, 0.0, static_cast<double>(r.nrows - 1));
    std::size_t i0 = std::min(static_cast<std::size_t>(gx), r.ncols >= 2 ? r.ncols - 2 : 0);
    std::size_t j0 = std::min(static_cast<std::size_t>(gy), r.nrows >= 2 ? r.nrows - 2 : 0);
    std::size_t i1 = std::min(i0 + 1, r.ncols - 1);
    std::size_t j1 = std::min(j0 + 1, r.nrows - 1);
    double fx = gx - static_cast<double>(i0);
    double fy = gy - static_cast<double>(j0);

    double v00 = r.at(j0, i0), v10 = r.at(j0, i1), v01 = r.at(j1, i0), v11 = r.at(j1, i1);
    if (v00 == r.nodata || v10 == r.nodata || v01 == r.nodata || v11 == r.nodata)
        throw NoDataNeighborhood("nodata cell adjacent to sample point");
    double a = v00 * (1.0 - fx) + v10 * fx;
    double b = v01 * (1.0 - fx) + v11 * fx;
    return a * (1.0 - fy) + b * fy;
}

NeighborhoodStats neighborhood_stats(const Raster& r, const LocalXY& center, double radius_m) {
    if (radius_m < 0) throw EmptyNeighborhood("negative radius");
    // candidate cell index window
    double r2 = radius_m * radius_m;
    auto col_lo = static_cast<long>(std::floor((center.x - radius_m - r.xll) / r.cellsize - 0.5));
    auto col_hi = static_cast<long>(std::ceil((center.x + radius_m - r.xll) / r.cellsize - 0.5));
    auto row_lo = static_cast<long>(std::floor((center.y - radius_m - r.yll) / r.cellsize - 0.5));
    auto row_hi = static_cast<long>(std::ceil((center.y + radius_m - r.yll) / r.cellsize - 0.5));
    col_lo = std::max(col_lo, 0L);
    row_lo = std::max(row_lo, 0L);
    col_hi = std::min(col_hi, static_cast<long>(r.ncols) - 1);
    row_hi = std::min(row_hi, static_cast<long>(r.nrows) - 1);

    NeighborhoodStats s;
    double sum = 0.0;
    for (long row = row_lo; row <= row_hi; ++row) {
        for (long col = col_lo; col <= col_hi; ++col) {
            double cx = r.cell_x(static_cast<std::size_t>(col));
            double cy = r.cell_y(static_cast<std::size_t>(row));
            double dx = cx - center.x, dy = cy - center.y;
            if (dx * dx + dy * dy > r2) continue;
            double v = r.at(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
            if (v == r.nodata) continue;
            if (s.count == 0) {
                s.min = s.max = v;
            } else {
                s.min = std::min(s.min, v);
                s.max = std::max(s.max, v);
            }
            sum += v;
            ++s.count;
        }
    }
    if (s.count == 0)
        throw EmptyNeighborhood("no valid cells within " + format_double(radius_m) + " m");
    s.mean = sum / static_cast<double>(s.count);
    return s;
}

Profile extract_profile(const Raster& dsm, const Raster& dhm, const LocalXY& a,
                        const LocalXY& b, double step_m) {
    if (step_m <= 0) throw ComputeError("profile step must be positive");
    double dist = horizontal_distance(a, b);
    if (dist == 0.0) throw ZeroLengthPath("profile endpoints coincide");

    std::size_t segments = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(dist / step_m)));
    std::size_t n = segments + 1;

    Profile p;
    p.distances.resize(n);
    p.ground.resize(n);
    p.surface.resize(n);
    p.clutter.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(segments);
        double x = a.x + (b.x - a.x) * t;
        double y = a.y + (b.y - a.y) * t;
        double s = sample_bilinear(dsm, x, y);
        double c = sample_bilinear(dhm, x, y);
        p.distances[i] = dist * t;
        p.surface[i] = s;
        p.clutter[i] = c;
        p.ground[i] = s - c;
    }
    p.distances[0] = 0.0;
    p.distances[n - 1] = dist;
    return p;
}

Raster ground_from(const Raster& dsm, const Raster& dhm) {
    if (dsm.ncols != dhm.ncols || dsm.nrows != dhm.nrows || dsm.cellsize != dhm.cellsize ||
        dsm.xll != dhm.xll || dsm.yll != dhm.yll)
        throw GridMismatch("DSM and DHM grids are not aligned");
    Raster g = dsm;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        if (dsm.values[i] == dsm.nodata || dhm.values[i] == dhm.nodata)
            g.values[i] = g.nodata;
        else
            g.values[i] = dsm.values[i] - dhm.values[i];
    }
    return g;
}

} // namespace pathloss
