#pragma once

#include <array>
#include <string>
#include <vector>

#include "pathloss/learner.hpp"

namespace pathloss {

enum class Metric { kMae, kRmse };

const char* metric_name(Metric m);
Metric parse_metric(const std::string& s);

/// Real/synthetic/combined model triplet with simplex blending weights.
struct EnsembleModel {
    GbdtModel m_real;
    GbdtModel m_synth;
    GbdtModel m_combined;
    std::array<double, 3> w = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    Metric metric = Metric::kMae;
};

struct ModelTriplet {
    GbdtModel m_real;
    GbdtModel m_synth;
    GbdtModel m_combined;
};

// Three models under one config: real, synthetic, and their union.
ModelTriplet train_triplet(std::span<const LinkSample> d_real_train,
                           std::span<const LinkSample> d_synth_train,
                           const TrainConfig& config);

// Exhaustive grid over the probability simplex at resolution `step`
// (default 0.01 -> 5151 candidates). Ties resolve to the lexicographically
// smallest (w1, w2, w3).
std::array<double, 3> optimize_weights(const std::array<std::vector<double>, 3>& preds,
                                       const std::vector<double>& truth, Metric metric,
                                       double step = 0.01);

double predict_ensemble(const EnsembleModel& model, std::span<const double> features);
std::vector<double> predict_ensemble_all(const EnsembleModel& model, const Matrix& x);

// Ensemble manifest: JSON with the three model file names, weights, metric
// and FNV-1a fingerprints of the model files.
void save_ensemble(const EnsembleModel& model, const std::string& dir);
EnsembleModel load_ensemble(const std::string& dir);

} // namespace pathloss
