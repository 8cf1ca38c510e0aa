#include "pathloss/reference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "pathloss/csv.hpp"
#include "pathloss/diffraction.hpp"
#include "pathloss/errors.hpp"

namespace pathloss {

namespace {

std::vector<double> parse_semicolon_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& tok : split(s, ';'))
        out.push_back(parse_double(tok, what));
    return out;
}

std::string join_semicolon(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += format_double(v[i]);
    }
    return out;
}

double angular_distance_deg(double a, double b) {
    double d = std::fmod(std::abs(a - b), 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

// nearest sector azimuth, ties to the lower index
std::size_t assign_sector(const BaseStation& bs, double azimuth_deg) {
    if (bs.sector_azimuths_deg.empty()) return 0;
    std::size_t best = 0;
    double best_d = angular_distance_deg(azimuth_deg, bs.sector_azimuths_deg[0]);
    for (std::size_t i = 1; i < bs.sector_azimuths_deg.size(); ++i) {
        double d = angular_distance_deg(azimuth_deg, bs.sector_azimuths_deg[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// mean with a fixed summation order (callers pass stable ordering)
double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

std::vector<MeasurementRecord> read_measurement_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open measurement CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty measurement CSV: " + path);
    auto header = split(line, ',');
    const std::vector<std::string> expected = {"id",      "lat",   "lon",
                                               "rsrp_dbm", "earfcn", "cell_id",
                                               "bs_id",   "env",   "timestamp"};
    if (header.size() != expected.size())
        throw DataError("measurement CSV header mismatch in " + path);
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (trim(header[i]) != expected[i])
            throw DataError("measurement CSV column " + std::to_string(i) +
                            " should be '" + expected[i] + "'");

    std::vector<MeasurementRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != expected.size())
            throw DataError(path + ":" + std::to_string(lineno) + ": wrong column count");
        MeasurementRecord r;
        r.id = f[0];
        r.rx.lat = parse_double(f[1], "lat");
        r.rx.lon = parse_double(f[2], "lon");
        r.rsrp_dbm = parse_double(f[3], "rsrp_dbm");
        r.earfcn = parse_long(f[4], "earfcn");
        r.cell_id = f[5];
        r.bs_id = f[6];
        r.env = f[7];
        if (!trim(f[8]).empty()) r.timestamp = parse_double(f[8], "timestamp");
        if (r.rsrp_dbm < -160.0 || r.rsrp_dbm > -20.0)
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": rsrp outside [-160,-20] dBm sanity window");
        out.push_back(std::move(r));
    }
    return out;
}

void write_measurement_csv(const std::vector<MeasurementRecord>& records,
                           const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write measurement CSV: " + path);
    out << "id,lat,lon,rsrp_dbm,earfcn,cell_id,bs_id,env,timestamp\n";
    for (const auto& r : records) {
        out << r.id << ',' << format_double(r.rx.lat) << ',' << format_double(r.rx.lon)
            << ',' << format_double(r.rsrp_dbm) << ',' << r.earfcn << ',' << r.cell_id
            << ',' << r.bs_id << ',' << r.env << ','
            << (r.timestamp ? format_double(*r.timestamp) : "") << '\n';
    }
}

std::vector<BaseStation> read_bs_registry_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open BS registry: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty BS registry: " + path);
    auto header = split(line, ',');
    const std::vector<std::string> expected = {"bs_id", "lat",  "lon",
                                               "tower_height_agl_m", "vbw_deg",
                                               "sector_azimuths", "carriers_hz"};
    if (header.size() != expected.size())
        throw DataError("BS registry header mismatch in " + path);
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (trim(header[i]) != expected[i])
            throw DataError("BS registry column " + std::to_string(i) + " should be '" +
                            expected[i] + "'");

    std::vector<BaseStation> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != expected.size())
            throw DataError(path + ":" + std::to_string(lineno) + ": wrong column count");
        BaseStation b;
        b.id = f[0];
        b.location.lat = parse_double(f[1], "lat");
        b.location.lon = parse_double(f[2], "lon");
        b.tower_height_agl_m = parse_double(f[3], "tower_height_agl_m");
        b.vbw_deg = parse_double(f[4], "vbw_deg");
        b.sector_azimuths_deg = parse_semicolon_list(f[5], "sector_azimuths");
        b.carriers_hz = parse_semicolon_list(f[6], "carriers_hz");
        if (b.tower_height_agl_m <= 0.0)
            throw DataError(path + ":" + std::to_string(lineno) + ": tower height must be > 0");
        if (b.vbw_deg <= 0.0 || b.vbw_deg > 30.0)
            throw DataError(path + ":" + std::to_string(lineno) + ": vbw outside (0,30]");
        out.push_back(std::move(b));
    }
    return out;
}

void write_bs_registry_csv(const std::vector<BaseStation>& bss, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write BS registry: " + path);
    out << "bs_id,lat,lon,tower_height_agl_m,vbw_deg,sector_azimuths,carriers_hz\n";
    for (const auto& b : bss) {
        out << b.id << ',' << format_double(b.location.lat) << ','
            << format_double(b.location.lon) << ',' << format_double(b.tower_height_agl_m)
            << ',' << format_double(b.vbw_deg) << ',' << join_semicolon(b.sector_azimuths_deg)
            << ',' << join_semicolon(b.carriers_hz) << '\n';
    }
}

std::vector<Candidate> build_candidates(const std::vector<MeasurementRecord>& records,
                                        const BaseStation& bs, const Terrain& terrain,
                                        Environment env_category, SuiTerrain sui_terrain,
                                        const ReferenceConfig& cfg) {
    LocalXY bs_xy = project(terrain.origin, bs.location);
    double bs_ground = sample_bilinear(terrain.ground, bs_xy.x, bs_xy.y);
    double bs_ant_asl = bs_ground + bs.tower_height_agl_m;

    std::vector<Candidate> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        if (rec.bs_id != bs.id)
            throw BaselineMismatch("record " + rec.id + " belongs to BS '" + rec.bs_id +
                                   "', expected '" + bs.id + "'");
        Candidate c;
        c.rec = rec;
        c.freq_hz = earfcn_to_freq_hz(rec.earfcn);

        LocalXY rx_xy = project(terrain.origin, rec.rx);
        c.d2d_m = horizontal_distance(bs_xy, rx_xy);
        if (c.d2d_m == 0.0) throw CoincidentPoints("measurement at the BS location");
        Profile prof = extract_profile(terrain.dsm, terrain.dhm, bs_xy, rx_xy,
                                       terrain.profile_step_m);
        double rx_asl = prof.ground.back() + cfg.feature_cfg.rx_h_agl_m;
        double dh = bs_ant_asl - rx_asl;
        c.d3d_m = std::hypot(c.d2d_m, dh);
        c.alpha_deg = elevation_angle_deg(c.d2d_m, dh);
        c.los = los_classify(prof, bs.tower_height_agl_m, cfg.feature_cfg.rx_h_agl_m);
        c.sector = assign_sector(bs, azimuth_aoa_deg(bs_xy, rx_xy));

        LinkBudgetInput lb;
        lb.freq_hz = c.freq_hz;
        lb.d2d_m = c.d2d_m;
        lb.d3d_m = c.d3d_m;
        lb.h_bs_agl_m = bs.tower_height_agl_m;
        lb.h_ue_agl_m = cfg.feature_cfg.rx_h_agl_m;
        lb.environment = env_category;
        lb.terrain_category = sui_terrain;
        lb.los = c.los;

        auto models = consensus_models();
        for (std::size_t i = 0; i < models.size(); ++i)
            c.pl_db[i] =
                path_loss_over_profile(models[i], lb, prof, c.freq_hz, cfg.spm).db;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Candidate> select_los_candidates(const std::vector<Candidate>& candidates,
                                             double threshold_dbm) {
    std::vector<Candidate> out;
    for (const auto& c : candidates)
        if (c.los && c.rec.rsrp_dbm >= threshold_dbm) out.push_back(c);
    return out;
}

std::vector<MeasurementRecord> select_los_candidates(
    const std::vector<MeasurementRecord>& records, const BaseStation& bs,
    const Terrain& terrain, const ReferenceConfig& cfg) {
    LocalXY bs_xy = project(terrain.origin, bs.location);
    std::vector<MeasurementRecord> out;
    for (const auto& rec : records) {
        if (rec.rsrp_dbm < cfg.rsrp_threshold_dbm) continue;
        LocalXY rx_xy = project(terrain.origin, rec.rx);
        Profile prof = extract_profile(terrain.dsm, terrain.dhm, bs_xy, rx_xy,
                                       terrain.profile_step_m);
        if (los_classify(prof, bs.tower_height_agl_m, cfg.feature_cfg.rx_h_agl_m))
            out.push_back(rec);
    }
    return out;
}

std::vector<std::size_t> mainlobe_subset(const std::vector<Candidate>& candidates,
                                         double theta_deg, double vbw_deg) {
    double lo = theta_deg - vbw_deg / 2.0;
    double hi = theta_deg + vbw_deg / 2.0;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].alpha_deg >= lo && candidates[i].alpha_deg <= hi)
            out.push_back(i);
    return out;
}

DowntiltEstimate estimate_downtilt(const std::vector<Candidate>& los_candidates,
                                   double vbw_deg, std::size_t n_min) {
    DowntiltEstimate est;
    bool any_qualified = false;
    double best_mae = std::numeric_limits<double>::infinity();

    for (int theta = 0; theta <= 15; ++theta) {
        DowntiltRow row;
        row.theta_deg = theta;
        auto subset = mainlobe_subset(los_candidates, static_cast<double>(theta), vbw_deg);
        row.count = subset.size();
        if (subset.size() < n_min) {
            est.table.push_back(row);
            continue;
        }
        row.qualified = true;

        // group by sector; relative values are differenced against the
        // sector's own subset means
        std::map<std::size_t, std::vector<std::size_t>> by_sector;
        for (auto idx : subset) by_sector[los_candidates[idx].sector].push_back(idx);

        std::array<double, 5> abs_err_sum{};
        std::size_t n_resid = 0;
        for (const auto& [sector, members] : by_sector) {
            (void)sector;
            std::vector<double> rsrps;
            rsrps.reserve(members.size());
            for (auto idx : members) rsrps.push_back(los_candidates[idx].rec.rsrp_dbm);
            double rsrp_mean = mean_of(rsrps);

            std::array<double, 5> pl_mean{};
            for (std::size_t m = 0; m < 5; ++m) {
                std::vector<double> pls;
                pls.reserve(members.size());
                for (auto idx : members) pls.push_back(los_candidates[idx].pl_db[m]);
                pl_mean[m] = mean_of(pls);
            }
            for (auto idx : members) {
                const auto& c = los_candidates[idx];
                double d_real = c.rec.rsrp_dbm - rsrp_mean;
                for (std::size_t m = 0; m < 5; ++m) {
                    double d_emp = -c.pl_db[m] + pl_mean[m];
                    abs_err_sum[m] += std::abs(d_emp - d_real);
                }
                ++n_resid;
            }
        }
        double mean_over_models = 0.0;
        for (std::size_t m = 0; m < 5; ++m) {
            row.mae_db[m] = abs_err_sum[m] / static_cast<double>(n_resid);
            mean_over_models += row.mae_db[m];
        }
        row.mae_mean_db = mean_over_models / 5.0;
        est.table.push_back(row);

        // strict < keeps the first (smallest) theta on ties
        if (!any_qualified || row.mae_mean_db < best_mae) {
            best_mae = row.mae_mean_db;
            est.theta_est_deg = theta;
        }
        any_qualified = true;
    }
    if (!any_qualified)
        throw InsufficientReferencePoints(
            "no candidate tilt reaches n_min=" + std::to_string(n_min) + " reference points");
    return est;
}

SiteBaseline compute_baselines(const std::vector<Candidate>& subset,
                               const BaseStation& bs, double theta_est_deg,
                               std::size_t n_min) {
    if (subset.size() < n_min)
        throw InsufficientReferencePoints("reference subset has " +
                                          std::to_string(subset.size()) + " < n_min=" +
                                          std::to_string(n_min) + " points");
    SiteBaseline b;
    b.bs_id = bs.id;
    b.theta_est_deg = theta_est_deg;
    b.n_ref = subset.size();
    for (const auto& c : subset) b.subset_ids.push_back(c.rec.id);

    std::map<std::size_t, std::vector<const Candidate*>> by_sector;
    for (const auto& c : subset) by_sector[c.sector].push_back(&c);

    std::vector<double> sector_rsrp_means;
    std::array<std::vector<double>, 5> sector_pl_means;
    for (const auto& [sector, members] : by_sector) {
        (void)sector;
        std::vector<double> rsrps;
        for (const auto* c : members) rsrps.push_back(c->rec.rsrp_dbm);
        sector_rsrp_means.push_back(mean_of(rsrps));
        for (std::size_t m = 0; m < 5; ++m) {
            std::vector<double> pls;
            for (const auto* c : members) pls.push_back(c->pl_db[m]);
            sector_pl_means[m].push_back(mean_of(pls));
        }
    }
    b.rsrp_ref_dbm = mean_of(sector_rsrp_means);
    auto models = consensus_models();
    for (std::size_t m = 0; m < 5; ++m)
        b.pl_ref_db[models[m]] = mean_of(sector_pl_means[m]);
    return b;
}

double delta_rsrp_real(const MeasurementRecord& rec, const SiteBaseline& baseline) {
    if (rec.bs_id != baseline.bs_id)
        throw BaselineMismatch("record served by '" + rec.bs_id +
                               "' differenced against baseline of '" + baseline.bs_id + "'");
    return rec.rsrp_dbm - baseline.rsrp_ref_dbm;
}

double delta_rsrp_model(double pl_db, EmpiricalModelId model, const SiteBaseline& baseline) {
    auto it = baseline.pl_ref_db.find(model);
    if (it == baseline.pl_ref_db.end())
        throw UnknownModelBaseline(std::string("no PL baseline for model ") +
                                   model_name(model));
    return -pl_db + it->second;
}

SiteResult site_baseline(const std::vector<MeasurementRecord>& records,
                         const BaseStation& bs, const Terrain& terrain,
                         Environment env_category, SuiTerrain sui_terrain,
                         const ReferenceConfig& cfg) {
    auto candidates = build_candidates(records, bs, terrain, env_category, sui_terrain, cfg);
    auto los = select_los_candidates(candidates, cfg.rsrp_threshold_dbm);
    double vbw = bs.vbw_deg > 0.0 ? bs.vbw_deg : cfg.default_vbw_deg;

    SiteResult out;
    out.downtilt = estimate_downtilt(los, vbw, cfg.n_min);
    auto subset_idx =
        mainlobe_subset(los, static_cast<double>(out.downtilt.theta_est_deg), vbw);
    std::vector<Candidate> subset;
    subset.reserve(subset_idx.size());
    for (auto i : subset_idx) subset.push_back(los[i]);
    out.baseline = compute_baselines(subset, bs,
                                     static_cast<double>(out.downtilt.theta_est_deg),
                                     cfg.n_min);
    return out;
}

} // namespace pathloss
