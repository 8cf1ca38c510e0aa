#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pathloss {

inline constexpr std::size_t kNumFeatures = 19;

/// Engineered per-link feature vector, fixed 19-entry order. is_los is the
/// categorical LoS/NLoS flag stored as 0/1.
struct FeatureVector {
    double freq_hz = 0.0;
    double d_bs_m = 0.0;
    double rel_bs_height_m = 0.0;
    double avg_clutter_height_m = 0.0;
    double terrain_roughness_m = 0.0;
    double tx_haat_m = 0.0;
    double ratio_alpha = 0.0;
    double ratio_beta = 0.0;
    double azimuth_aoa_deg = 0.0;
    double tilt_aoa_deg = 0.0;
    double d_diff_first_m = 0.0;
    double d_diff_last_m = 0.0;
    double mean_terrain_m = 0.0;
    double terrain_p25_m = 0.0;
    double terrain_p50_m = 0.0;
    double terrain_p75_m = 0.0;
    double blockage_pct = 0.0;
    double diffraction_loss_db = 0.0;
    double is_los = 1.0;

    std::array<double, kNumFeatures> to_array() const;
    static FeatureVector from_array(const std::array<double, kNumFeatures>& a);
    static const std::array<std::string, kNumFeatures>& names();
    static constexpr std::size_t is_los_index() { return 18; }
};

enum class SourceTag { kReal, kSynthetic, kSmote };

const char* source_tag_name(SourceTag t);
SourceTag parse_source_tag(const std::string& s);

/// One BS->receiver training sample: identity columns, the feature vector,
/// and the relative-RSRP target in dB.
struct LinkSample {
    std::string id;
    std::string bs_id;
    std::string env;
    double lat = 0.0;
    double lon = 0.0;
    SourceTag source = SourceTag::kReal;
    double target_delta_rsrp = 0.0;
    FeatureVector features;
};

// Feature-table CSV: id,bs_id,env,lat,lon,source_tag,target_delta_rsrp
// followed by the 19 feature columns in fixed order.
void write_feature_table(const std::vector<LinkSample>& samples, std::ostream& out);
void write_feature_table(const std::vector<LinkSample>& samples, const std::string& path);
std::vector<LinkSample> read_feature_table(std::istream& in);
std::vector<LinkSample> read_feature_table_file(const std::string& path);

// ids of the two parents of a SMOTE sample encoded in its id, empty
// otherwise
std::vector<std::string> smote_parent_ids(const std::string& id);
std::string make_smote_id(std::size_t seq, const std::string& base_id,
                          const std::string& neighbor_id);

} // namespace pathloss
