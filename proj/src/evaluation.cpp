#include "pathloss/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "pathloss/csv.hpp"
#include "pathloss/errors.hpp"
#include "pathloss/rng.hpp"

namespace pathloss {

double mae(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw LengthMismatch("mae: length mismatch");
    if (pred.empty()) throw EmptyInput("mae of empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(truth[i] - pred[i]);
    return s / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw LengthMismatch("rmse: length mismatch");
    if (pred.empty()) throw EmptyInput("rmse of empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double e = truth[i] - pred[i];
        s += e * e;
    }
    return std::sqrt(s / static_cast<double>(pred.size()));
}

namespace {

// id-keyed deterministic shuffle: sorting first makes the result
// independent of input order
std::vector<LinkSample> seeded_order(std::vector<LinkSample> v, std::uint64_t seed,
                                     const std::string& label) {
    std::sort(v.begin(), v.end(),
              [](const LinkSample& a, const LinkSample& b) { return a.id < b.id; });
    Rng rng(mix_seed(seed, label));
    rng.shuffle(v);
    return v;
}

void assert_no_leakage(const std::vector<std::string>& test_ids,
                       const std::vector<std::string>& train_ids) {
    std::set<std::string> test(test_ids.begin(), test_ids.end());
    for (const auto& id : train_ids) {
        if (test.count(id))
            throw ComputeError("LeakageDetected",
                               "record '" + id + "' appears in both test and training inputs");
        for (const auto& parent : smote_parent_ids(id))
            if (test.count(parent))
                throw ComputeError("LeakageDetected", "SMOTE parent '" + parent +
                                                          "' appears in the test set");
    }
}

std::vector<std::string> ids_of(std::span<const LinkSample> v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(s.id);
    return out;
}

ResultRow evaluate_predictions(const std::string& label, const std::string& test_env,
                               const std::vector<double>& pred,
                               const std::vector<double>& truth) {
    ResultRow row;
    row.train_label = label;
    row.test_env = test_env;
    row.mae_db = mae(pred, truth);
    row.rmse_db = rmse(pred, truth);
    row.n_test = truth.size();
    return row;
}

} // namespace

SplitResult split_dataset(const std::vector<LinkSample>& records, std::uint64_t seed) {
    std::map<std::string, std::vector<LinkSample>> by_env;
    for (const auto& r : records) by_env[r.env].push_back(r);

    SplitResult out;
    for (auto& [env, samples] : by_env) {
        auto shuffled = seeded_order(std::move(samples), seed, "split:" + env);
        std::size_t n_test = shuffled.size() / 2; // test gets the floor on odd counts
        for (std::size_t i = 0; i < shuffled.size(); ++i) {
            if (i < n_test)
                out.test.push_back(std::move(shuffled[i]));
            else
                out.pool.push_back(std::move(shuffled[i]));
        }
    }
    return out;
}

std::vector<LinkSample> scarcity_sample(const std::vector<LinkSample>& pool,
                                        double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw ConfigError("scarcity fraction must be in (0,1]");
    auto shuffled = seeded_order(pool, seed, "scarcity");
    auto k = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(pool.size())));
    k = std::min(k, shuffled.size());
    shuffled.resize(k);
    return shuffled;
}

TrainValSplit split_train_val(const std::vector<LinkSample>& data, std::uint64_t seed,
                              const std::string& label) {
    auto shuffled = seeded_order(data, seed, "trainval:" + label);
    std::size_t n_val = shuffled.size() / 5; // 80/20 rule
    TrainValSplit out;
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
        if (i < n_val)
            out.val.push_back(std::move(shuffled[i]));
        else
            out.train.push_back(std::move(shuffled[i]));
    }
    return out;
}

namespace {

// Ensemble path shared by the mixed scenarios and the matrix: Algorithm-1
// split/training/weighting, then evaluation on the held-out test set.
ScenarioRun run_ensemble(const std::string& label, const std::string& test_env,
                         const std::vector<LinkSample>& real_data,
                         const std::vector<LinkSample>& synth_data,
                         const std::vector<LinkSample>& test, std::uint64_t seed,
                         const EvalConfig& cfg, bool with_smote) {
    auto real_split = split_train_val(real_data, seed, "real");
    auto synth_split = split_train_val(synth_data, seed, "synth");

    std::vector<LinkSample> real_train = real_split.train;
    if (with_smote) {
        SmoteConfig sc = cfg.smote;
        sc.seed = mix_seed(seed, "scenario_smote");
        auto smoted = smote_regression(real_train, sc);
        real_train.insert(real_train.end(), smoted.samples.begin(), smoted.samples.end());
    }

    ModelTriplet triplet = train_triplet(real_train, synth_split.train, cfg.train);

    std::vector<LinkSample> val = real_split.val;
    val.insert(val.end(), synth_split.val.begin(), synth_split.val.end());
    if (val.empty()) throw EmptyValidation("no validation samples after the 80/20 split");
    Matrix val_x = make_matrix(val);
    std::vector<double> val_y = make_targets(val);
    std::array<std::vector<double>, 3> val_preds = {triplet.m_real.predict_all(val_x),
                                                    triplet.m_synth.predict_all(val_x),
                                                    triplet.m_combined.predict_all(val_x)};

    EnsembleModel model;
    model.m_real = std::move(triplet.m_real);
    model.m_synth = std::move(triplet.m_synth);
    model.m_combined = std::move(triplet.m_combined);
    model.metric = cfg.metric;
    model.w = optimize_weights(val_preds, val_y, cfg.metric, cfg.weight_step);

    ScenarioRun run;
    run.used_ensemble = true;
    run.weights = model.w;
    run.test_ids = ids_of(test);
    for (const auto& s : real_data) run.train_real_ids.push_back(s.id);
    for (const auto& s : real_train)
        if (s.source == SourceTag::kSmote) run.train_real_ids.push_back(s.id);
    assert_no_leakage(run.test_ids, run.train_real_ids);

    Matrix test_x = make_matrix(test);
    run.row = evaluate_predictions(label, test_env, predict_ensemble_all(model, test_x),
                                   make_targets(test));
    return run;
}

ScenarioRun run_single_model(const std::string& label, const std::string& test_env,
                             const std::vector<LinkSample>& train_data,
                             const std::vector<LinkSample>& test, std::uint64_t seed,
                             const EvalConfig& cfg, bool with_smote,
                             bool track_real_ids) {
    auto split = split_train_val(train_data, seed, "single");
    std::vector<LinkSample> train = split.train;
    if (with_smote) {
        SmoteConfig sc = cfg.smote;
        sc.seed = mix_seed(seed, "scenario_smote");
        auto smoted = smote_regression(train, sc);
        train.insert(train.end(), smoted.samples.begin(), smoted.samples.end());
    }
    GbdtModel model = fit(train, cfg.train);

    ScenarioRun run;
    run.test_ids = ids_of(test);
    if (track_real_ids) {
        for (const auto& s : train_data) run.train_real_ids.push_back(s.id);
        for (const auto& s : train)
            if (s.source == SourceTag::kSmote) run.train_real_ids.push_back(s.id);
    }
    assert_no_leakage(run.test_ids, run.train_real_ids);

    Matrix test_x = make_matrix(test);
    run.row =
        evaluate_predictions(label, test_env, model.predict_all(test_x), make_targets(test));
    return run;
}

} // namespace

ScenarioRun run_scenario(const ScenarioSpec& spec, const std::vector<LinkSample>& real_env,
                         const std::vector<LinkSample>& synth_env, const EvalConfig& cfg) {
    if (real_env.empty()) throw MissingDataset("no real samples for env " + spec.test_env);

    SplitResult split = split_dataset(real_env, spec.seed);
    const auto& test = split.test;
    if (test.empty()) throw MissingDataset("empty test split for env " + spec.test_env);

    const bool needs_synth = spec.scenario == "SIM" || spec.scenario == "5pct_real_sim" ||
                             spec.scenario == "5pct_real_smote_sim";
    if (needs_synth && synth_env.empty())
        throw MissingDataset("scenario '" + spec.scenario + "' needs synthetic data for env " +
                             spec.test_env);

    if (spec.scenario == "SIM")
        return run_single_model("SIM", spec.test_env, synth_env, test, spec.seed, cfg,
                                /*with_smote=*/false, /*track_real_ids=*/false);

    auto real_5pct = scarcity_sample(split.pool, cfg.scarcity_fraction, spec.seed);
    if (spec.scenario == "5pct_real")
        return run_single_model("5pct_real", spec.test_env, real_5pct, test, spec.seed, cfg,
                                false, true);
    if (spec.scenario == "5pct_real_smote")
        return run_single_model("5pct_real_smote", spec.test_env, real_5pct, test, spec.seed,
                                cfg, true, true);
    if (spec.scenario == "5pct_real_sim")
        return run_ensemble("5pct_real_sim", spec.test_env, real_5pct, synth_env, test,
                            spec.seed, cfg, false);
    if (spec.scenario == "5pct_real_smote_sim")
        return run_ensemble("5pct_real_smote_sim", spec.test_env, real_5pct, synth_env, test,
                            spec.seed, cfg, true);
    throw ConfigError("unknown scenario '" + spec.scenario + "'");
}

MatrixMode parse_matrix_mode(const std::string& s) {
    if (s == "real_only") return MatrixMode::kRealOnly;
    if (s == "ensemble") return MatrixMode::kEnsemble;
    throw ConfigError("unknown matrix mode '" + s + "'");
}

const char* matrix_mode_name(MatrixMode m) {
    return m == MatrixMode::kRealOnly ? "real_only" : "ensemble";
}

std::vector<ResultRow> cross_env_matrix(
    const std::map<std::string, std::vector<LinkSample>>& real_by_env,
    const std::map<std::string, std::vector<LinkSample>>& synth_by_env, MatrixMode mode,
    std::uint64_t seed, const EvalConfig& cfg) {
    if (real_by_env.size() < 2)
        throw MissingDataset("cross-environment matrix needs at least 2 environments");

    // the same per-environment split backs every cell
    std::map<std::string, SplitResult> splits;
    for (const auto& [env, samples] : real_by_env) splits[env] = split_dataset(samples, seed);

    std::vector<ResultRow> rows;
    for (const auto& [train_env, unused_train] : real_by_env) {
        (void)unused_train;
        for (const auto& [test_env, unused_test] : real_by_env) {
            (void)unused_test;
            const auto& test = splits[test_env].test;
            const auto& train_pool = splits[train_env].pool;

            ScenarioRun run;
            if (mode == MatrixMode::kRealOnly) {
                GbdtModel model = fit(train_pool, cfg.train);
                run.test_ids = ids_of(test);
                run.train_real_ids = ids_of(train_pool);
                assert_no_leakage(run.test_ids, run.train_real_ids);
                Matrix test_x = make_matrix(test);
                run.row = evaluate_predictions(train_env, test_env,
                                               model.predict_all(test_x), make_targets(test));
            } else {
                auto synth = synth_by_env.find(test_env);
                if (synth == synth_by_env.end() || synth->second.empty())
                    throw MissingDataset("no synthetic data for target env " + test_env);
                run = run_ensemble(train_env, test_env, train_pool, synth->second, test,
                                   mix_seed(seed, "cell:" + train_env + ">" + test_env), cfg,
                                   /*with_smote=*/false);
                run.row.train_label = train_env;
            }
            rows.push_back(run.row);
        }
    }
    return rows;
}

void write_result_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write results CSV: " + path);
    out << "train_label,test_env,mae_db,rmse_db,n_test\n";
    for (const auto& r : rows)
        out << r.train_label << ',' << r.test_env << ',' << format_double(r.mae_db) << ','
            << format_double(r.rmse_db) << ',' << r.n_test << '\n';
}

void write_heatmap_csv(const std::vector<ResultRow>& rows, bool use_rmse,
                       const std::string& path) {
    std::set<std::string> envs;
    for (const auto& r : rows) {
        envs.insert(r.train_label);
        envs.insert(r.test_env);
    }
    std::map<std::pair<std::string, std::string>, double> cell;
    for (const auto& r : rows)
        cell[{r.train_label, r.test_env}] = use_rmse ? r.rmse_db : r.mae_db;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write heatmap CSV: " + path);
    out << "train_env";
    for (const auto& e : envs) out << ',' << e;
    out << '\n';
    for (const auto& tr : envs) {
        out << tr;
        for (const auto& te : envs) {
            auto it = cell.find({tr, te});
            out << ',' << (it == cell.end() ? "" : format_double(it->second));
        }
        out << '\n';
    }
}

} // namespace pathloss
