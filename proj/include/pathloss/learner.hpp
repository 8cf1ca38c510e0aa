#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pathloss/dataset.hpp"

namespace pathloss {

/// Dense row-major feature matrix.
struct Matrix {
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
};

Matrix make_matrix(std::span<const LinkSample> samples);
std::vector<double> make_targets(std::span<const LinkSample> samples);

struct TrainConfig {
    int n_trees = 300;
    int max_depth = 6;
    double learning_rate = 0.1;
    int min_samples_leaf = 20;
    double subsample = 1.0;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf: residual mean, unscaled by the learning rate

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;
    double predict(std::span<const double> features) const;
};

/// Additive regression-tree ensemble fit to squared-loss residuals.
/// Training is exact greedy per split (full threshold scan) and fully
/// deterministic: identical data and config serialize to identical bytes,
/// and row order does not matter because every accumulation runs in a
/// canonical sorted order.
struct GbdtModel {
    double base_prediction = 0.0;
    std::vector<Tree> trees;
    std::vector<std::string> feature_names;
    TrainConfig config;
    std::vector<double> train_mse; // after each boosting iteration

    std::size_t n_features() const { return feature_names.size(); }
    double predict(std::span<const double> features) const;
    std::vector<double> predict_all(const Matrix& x) const;
};

GbdtModel fit(const Matrix& x, const std::vector<double>& y, const TrainConfig& config,
              std::vector<std::string> feature_names = {});
GbdtModel fit(std::span<const LinkSample> samples, const TrainConfig& config);

// Versioned text format ("MODEL v1"); deserialized models predict
// bit-identically.
void serialize(const GbdtModel& model, std::ostream& out);
void save_model(const GbdtModel& model, const std::string& path);
GbdtModel deserialize(std::istream& in);
GbdtModel load_model(const std::string& path);

} // namespace pathloss
