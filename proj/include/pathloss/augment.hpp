#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pathloss/dataset.hpp"

namespace pathloss {

struct SmoteConfig {
    std::size_t k_neighbors = 5;
    std::size_t n_synthetic = 0; // absolute count; 0 means use multiplier
    double multiplier = 1.0;     // n = round(multiplier * eligible samples)
    std::uint64_t seed = 0;
};

struct Scaler {
    std::vector<double> mean; // per feature
    std::vector<double> std;  // per feature, zero-variance guarded to 1
};

struct Standardized {
    std::vector<std::array<double, kNumFeatures>> z;
    Scaler scaler;
};

// z-scores every feature column (population std, zero-variance columns get
// std 1). is_los is carried through unscaled; neighbor distances skip it.
Standardized standardize(std::span<const LinkSample> samples);

struct SmoteResult {
    std::vector<LinkSample> samples;
    std::vector<std::string> warnings; // skipped groups etc.
};

// SMOTE adapted to regression: groups samples by (env, is_los), repeatedly
// picks a base sample, one of its k nearest same-group neighbors (Euclidean
// in z-scored feature space), and a single lambda ~ U[0,1] applied to both
// the feature vector and the target. Frequency snaps to the base carrier.
SmoteResult smote_regression(std::span<const LinkSample> samples, const SmoteConfig& config);

} // namespace pathloss
