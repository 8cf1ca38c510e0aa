#include "pathloss/augment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pathloss/errors.hpp"
#include "pathloss/rng.hpp"

namespace pathloss {

Standardized standardize(std::span<const LinkSample> samples) {
    if (samples.size() < 2)
        throw TooFewSamples("standardize needs at least 2 samples");
    const std::size_t n = samples.size();

    Standardized out;
    out.scaler.mean.assign(kNumFeatures, 0.0);
    out.scaler.std.assign(kNumFeatures, 0.0);

    std::vector<std::array<double, kNumFeatures>> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = samples[i].features.to_array();

    for (std::size_t c = 0; c < kNumFeatures; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += rows[i][c];
        out.scaler.mean[c] = sum / static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = rows[i][c] - out.scaler.mean[c];
            var += d * d;
        }
        var /= static_cast<double>(n); // population variance
        out.scaler.std[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    out.z.resize(n);
    const std::size_t los = FeatureVector::is_los_index();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < kNumFeatures; ++c)
            out.z[i][c] = (rows[i][c] - out.scaler.mean[c]) / out.scaler.std[c];
        out.z[i][los] = rows[i][los]; // categorical, kept as-is
    }
    return out;
}

namespace {

struct GroupKey {
    std::string env;
    int is_los;
    bool operator<(const GroupKey& o) const {
        if (env != o.env) return env < o.env;
        return is_los < o.is_los;
    }
};

} // namespace

SmoteResult smote_regression(std::span<const LinkSample> samples, const SmoteConfig& config) {
    if (config.k_neighbors < 1) throw InvalidK("k_neighbors must be >= 1");
    if (samples.size() < 2)
        throw TooFewSamples("SMOTE needs at least 2 samples");

    Standardized std_feats = standardize(samples);

    std::map<GroupKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        GroupKey key{samples[i].env, samples[i].features.is_los > 0.5 ? 1 : 0};
        groups[key].push_back(i);
    }

    SmoteResult out;
    std::vector<std::size_t> eligible;
    for (const auto& [key, members] : groups) {
        if (members.size() <= config.k_neighbors) {
            out.warnings.push_back("GroupTooSmall: env=" + key.env + " is_los=" +
                                   std::to_string(key.is_los) + " has " +
                                   std::to_string(members.size()) +
                                   " samples <= k, skipped");
            continue;
        }
        eligible.insert(eligible.end(), members.begin(), members.end());
    }
    if (eligible.empty()) return out;

    // k nearest same-group neighbors per eligible sample, excluding is_los
    // from the metric (it is constant within a group anyway)
    const std::size_t los = FeatureVector::is_los_index();
    auto dist2 = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t c = 0; c < kNumFeatures; ++c) {
            if (c == los) continue;
            double d = std_feats.z[a][c] - std_feats.z[b][c];
            s += d * d;
        }
        return s;
    };

    std::map<std::size_t, std::vector<std::size_t>> neighbors;
    for (const auto& [key, members] : groups) {
        if (members.size() <= config.k_neighbors) continue;
        for (std::size_t a : members) {
            std::vector<std::pair<double, std::size_t>> ranked;
            for (std::size_t b : members) {
                if (b == a) continue;
                ranked.emplace_back(dist2(a, b), b);
            }
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const auto& x, const auto& y) {
                                 if (x.first != y.first) return x.first < y.first;
                                 return x.second < y.second;
                             });
            std::vector<std::size_t> kn;
            for (std::size_t i = 0; i < config.k_neighbors && i < ranked.size(); ++i)
                kn.push_back(ranked[i].second);
            neighbors[a] = std::move(kn);
        }
    }

    std::size_t n_out = config.n_synthetic > 0
                            ? config.n_synthetic
                            : static_cast<std::size_t>(std::llround(
                                  config.multiplier * static_cast<double>(eligible.size())));

    Rng rng(mix_seed(config.seed, "smote"));
    out.samples.reserve(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        std::size_t base_idx = eligible[rng.below(eligible.size())];
        const auto& kn = neighbors[base_idx];
        std::size_t nb_idx = kn[rng.below(kn.size())];
        double lambda = rng.uniform();

        const LinkSample& base = samples[base_idx];
        const LinkSample& nb = samples[nb_idx];

        auto fb = base.features.to_array();
        auto fn = nb.features.to_array();
        std::array<double, kNumFeatures> fs{};
        for (std::size_t c = 0; c < kNumFeatures; ++c)
            fs[c] = fb[c] + lambda * (fn[c] - fb[c]);
        fs[0] = fb[0];     // carrier frequency snaps to the base sample
        fs[los] = fb[los]; // group key, identical for both parents

        LinkSample s;
        s.id = make_smote_id(i, base.id, nb.id);
        s.bs_id = base.bs_id;
        s.env = base.env;
        s.lat = base.lat + lambda * (nb.lat - base.lat);
        s.lon = base.lon + lambda * (nb.lon - base.lon);
        s.source = SourceTag::kSmote;
        s.target_delta_rsrp =
            base.target_delta_rsrp + lambda * (nb.target_delta_rsrp - base.target_delta_rsrp);
        s.features = FeatureVector::from_array(fs);
        out.samples.push_back(std::move(s));
    }
    return out;
}

} // namespace pathloss
