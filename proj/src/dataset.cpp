#include "pathloss/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pathloss/csv.hpp"
#include "pathloss/errors.hpp"

namespace pathloss {

std::array<double, kNumFeatures> FeatureVector::to_array() const {
    return {freq_hz,        d_bs_m,          rel_bs_height_m, avg_clutter_height_m,
            terrain_roughness_m, tx_haat_m,  ratio_alpha,     ratio_beta,
            azimuth_aoa_deg, tilt_aoa_deg,   d_diff_first_m,  d_diff_last_m,
            mean_terrain_m, terrain_p25_m,   terrain_p50_m,   terrain_p75_m,
            blockage_pct,   diffraction_loss_db, is_los};
}

FeatureVector FeatureVector::from_array(const std::array<double, kNumFeatures>& a) {
    FeatureVector f;
    f.freq_hz = a[0];
    f.d_bs_m = a[1];
    f.rel_bs_height_m = a[2];
    f.avg_clutter_height_m = a[3];
    f.terrain_roughness_m = a[4];
    f.tx_haat_m = a[5];
    f.ratio_alpha = a[6];
    f.ratio_beta = a[7];
    f.azimuth_aoa_deg = a[8];
    f.tilt_aoa_deg = a[9];
    f.d_diff_first_m = a[10];
    f.d_diff_last_m = a[11];
    f.mean_terrain_m = a[12];
    f.terrain_p25_m = a[13];
    f.terrain_p50_m = a[14];
    f.terrain_p75_m = a[15];
    f.blockage_pct = a[16];
    f.diffraction_loss_db = a[17];
    f.is_los = a[18];
    return f;
}

const std::array<std::string, kNumFeatures>& FeatureVector::names() {
    static const std::array<std::string, kNumFeatures> n = {
        "freq_hz",        "d_bs_m",          "rel_bs_height_m", "avg_clutter_height_m",
        "terrain_roughness_m", "tx_haat_m",  "ratio_alpha",     "ratio_beta",
        "azimuth_aoa_deg", "tilt_aoa_deg",   "d_diff_first_m",  "d_diff_last_m",
        "mean_terrain_m", "terrain_p25_m",   "terrain_p50_m",   "terrain_p75_m",
        "blockage_pct",   "diffraction_loss_db", "is_los"};
    return n;
}

const char* source_tag_name(SourceTag t) {
    switch (t) {
        case SourceTag::kReal: return "real";
        case SourceTag::kSynthetic: return "synthetic";
        case SourceTag::kSmote: return "smote";
    }
    return "?";
}

SourceTag parse_source_tag(const std::string& s) {
    if (s == "real") return SourceTag::kReal;
    if (s == "synthetic") return SourceTag::kSynthetic;
    if (s == "smote") return SourceTag::kSmote;
    throw DataError("unknown source tag '" + s + "'");
}

void write_feature_table(const std::vector<LinkSample>& samples, std::ostream& out) {
    out << "id,bs_id,env,lat,lon,source_tag,target_delta_rsrp";
    for (const auto& n : FeatureVector::names()) out << ',' << n;
    out << '\n';
    for (const auto& s : samples) {
        out << s.id << ',' << s.bs_id << ',' << s.env << ','
            << format_double(s.lat) << ',' << format_double(s.lon) << ','
            << source_tag_name(s.source) << ',' << format_double(s.target_delta_rsrp);
        for (double v : s.features.to_array()) out << ',' << format_double(v);
        out << '\n';
    }
}

void write_feature_table(const std::vector<LinkSample>& samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write feature table: " + path);
    write_feature_table(samples, out);
}

std::vector<LinkSample> read_feature_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty feature table");
    auto header = split(line, ',');
    if (header.size() != 7 + kNumFeatures)
        throw DataError("feature table header has " + std::to_string(header.size()) +
                        " columns, expected " + std::to_string(7 + kNumFeatures));
    std::vector<LinkSample> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 7 + kNumFeatures)
            throw DataError("feature table line " + std::to_string(lineno) +
                            ": wrong column count");
        LinkSample s;
        s.id = f[0];
        s.bs_id = f[1];
        s.env = f[2];
        s.lat = parse_double(f[3], "lat");
        s.lon = parse_double(f[4], "lon");
        s.source = parse_source_tag(f[5]);
        s.target_delta_rsrp = parse_double(f[6], "target_delta_rsrp");
        std::array<double, kNumFeatures> a{};
        for (std::size_t i = 0; i < kNumFeatures; ++i)
            a[i] = parse_double(f[7 + i], FeatureVector::names()[i]);
        s.features = FeatureVector::from_array(a);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<LinkSample> read_feature_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature table: " + path);
    return read_feature_table(in);
}

std::string make_smote_id(std::size_t seq, const std::string& base_id,
                          const std::string& neighbor_id) {
    return "smote_" + std::to_string(seq) + "~" + base_id + "~" + neighbor_id;
}

std::vector<std::string> smote_parent_ids(const std::string& id) {
    if (id.rfind("smote_", 0) != 0) return {};
    auto first = id.find('~');
    if (first == std::string::npos) return {};
    auto second = id.find('~', first + 1);
    if (second == std::string::npos) return {};
    return {id.substr(first + 1, second - first - 1), id.substr(second + 1)};
}

} // namespace pathloss
