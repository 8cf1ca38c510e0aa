#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pathloss/augment.hpp"
#include "pathloss/dataset.hpp"
#include "pathloss/ensemble.hpp"
#include "pathloss/learner.hpp"

namespace pathloss {

double mae(std::span<const double> pred, std::span<const double> truth);
double rmse(std::span<const double> pred, std::span<const double> truth);

struct SplitResult {
    std::vector<LinkSample> test; // held-out 50% (floor on odd counts)
    std::vector<LinkSample> pool; // training pool
};

// Seeded 50/50 split stratified per environment; stable across runs and
// input order (records are keyed by id before shuffling).
SplitResult split_dataset(const std::vector<LinkSample>& records, std::uint64_t seed);

// round(fraction * |pool|) records, seeded; never touches a test split.
std::vector<LinkSample> scarcity_sample(const std::vector<LinkSample>& pool,
                                        double fraction, std::uint64_t seed);

// 80/20 train/validation split of any dataset used for training.
struct TrainValSplit {
    std::vector<LinkSample> train;
    std::vector<LinkSample> val;
};
TrainValSplit split_train_val(const std::vector<LinkSample>& data, std::uint64_t seed,
                              const std::string& label);

struct EvalConfig {
    TrainConfig train;
    SmoteConfig smote;
    Metric metric = Metric::kMae;
    double weight_step = 0.01;
    double scarcity_fraction = 0.05;
};

/// Table III scenario identifiers.
inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> n = {"SIM", "5pct_real", "5pct_real_smote",
                                               "5pct_real_sim", "5pct_real_smote_sim"};
    return n;
}

struct ScenarioSpec {
    std::string scenario;
    std::string test_env;
    std::uint64_t seed = 0;
};

struct ResultRow {
    std::string train_label;
    std::string test_env;
    double mae_db = 0.0;
    double rmse_db = 0.0;
    std::size_t n_test = 0;
};

struct ScenarioRun {
    ResultRow row;
    bool used_ensemble = false;
    std::array<double, 3> weights = {0.0, 0.0, 0.0};
    std::vector<std::string> test_ids;
    std::vector<std::string> train_real_ids; // every real id seen by training,
                                             // SMOTE parents included
};

// One Table III scenario on one test environment. `real_env` holds every
// real sample of that environment, `synth_env` its synthetic dataset.
// Throws on any id-level leakage between the held-out test set and the
// training inputs.
ScenarioRun run_scenario(const ScenarioSpec& spec, const std::vector<LinkSample>& real_env,
                         const std::vector<LinkSample>& synth_env, const EvalConfig& cfg);

enum class MatrixMode { kRealOnly, kEnsemble };
MatrixMode parse_matrix_mode(const std::string& s);
const char* matrix_mode_name(MatrixMode m);

// E x E cross-environment matrix. real_only trains on the source
// environment's 50% pool; ensemble additionally blends in synthetic data of
// the TARGET environment per Algorithm-1 weighting. Every cell tests on the
// target environment's held-out 50%.
std::vector<ResultRow> cross_env_matrix(
    const std::map<std::string, std::vector<LinkSample>>& real_by_env,
    const std::map<std::string, std::vector<LinkSample>>& synth_by_env, MatrixMode mode,
    std::uint64_t seed, const EvalConfig& cfg);

void write_result_csv(const std::vector<ResultRow>& rows, const std::string& path);
// E x E grid of one metric, rows = train env, cols = test env
void write_heatmap_csv(const std::vector<ResultRow>& rows, bool use_rmse,
                       const std::string& path);

} // namespace pathloss
