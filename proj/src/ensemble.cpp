#include "pathloss/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pathloss/csv.hpp"
#include "pathloss/errors.hpp"
#include "pathloss/rng.hpp"

namespace pathloss {

const char* metric_name(Metric m) { return m == Metric::kMae ? "MAE" : "RMSE"; }

Metric parse_metric(const std::string& s) {
    if (s == "MAE" || s == "mae") return Metric::kMae;
    if (s == "RMSE" || s == "rmse") return Metric::kRmse;
    throw ConfigError("unknown metric '" + s + "'");
}

ModelTriplet train_triplet(std::span<const LinkSample> d_real_train,
                           std::span<const LinkSample> d_synth_train,
                           const TrainConfig& config) {
    if (d_real_train.empty() || d_synth_train.empty())
        throw TooFewSamples("train_triplet needs nonempty real and synthetic sets");
    ModelTriplet t;
    t.m_real = fit(d_real_train, config);
    t.m_synth = fit(d_synth_train, config);
    std::vector<LinkSample> combined(d_real_train.begin(), d_real_train.end());
    combined.insert(combined.end(), d_synth_train.begin(), d_synth_train.end());
    t.m_combined = fit(combined, config);
    return t;
}

std::array<double, 3> optimize_weights(const std::array<std::vector<double>, 3>& preds,
                                       const std::vector<double>& truth, Metric metric,
                                       double step) {
    const std::size_t n = truth.size();
    if (n == 0) throw EmptyValidation("weight optimization needs validation samples");
    for (const auto& p : preds)
        if (p.size() != n) throw LengthMismatch("prediction/truth length mismatch");
    if (!(step > 0.0 && step <= 1.0)) throw ConfigError("step must be in (0,1]");
    auto m = static_cast<long>(std::llround(1.0 / step));
    if (std::abs(static_cast<double>(m) * step - 1.0) > 1e-9)
        throw ConfigError("step must divide 1");

    std::array<double, 3> best{0.0, 0.0, 1.0};
    double best_loss = std::numeric_limits<double>::infinity();
    // lexicographic iteration keeps the smallest (w1,w2,w3) on ties
    for (long i = 0; i <= m; ++i) {
        for (long j = 0; j <= m - i; ++j) {
            double w1 = static_cast<double>(i) * step;
            double w2 = static_cast<double>(j) * step;
            double w3 = static_cast<double>(m - i - j) * step;
            double acc = 0.0;
            for (std::size_t s = 0; s < n; ++s) {
                double e = truth[s] - (w1 * preds[0][s] + w2 * preds[1][s] + w3 * preds[2][s]);
                acc += (metric == Metric::kMae) ? std::abs(e) : e * e;
            }
            if (acc < best_loss) {
                best_loss = acc;
                best = {w1, w2, w3};
            }
        }
    }
    return best;
}

double predict_ensemble(const EnsembleModel& model, std::span<const double> features) {
    return model.w[0] * model.m_real.predict(features) +
           model.w[1] * model.m_synth.predict(features) +
           model.w[2] * model.m_combined.predict(features);
}

std::vector<double> predict_ensemble_all(const EnsembleModel& model, const Matrix& x) {
    std::vector<double> out;
    out.reserve(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r)
        out.push_back(predict_ensemble(model, x.row(r)));
    return out;
}

namespace {

std::string file_fingerprint(const std::string& path) {
    std::ostringstream hex;
    hex << std::hex << fnv1a64(read_text_file(path));
    return hex.str();
}

} // namespace

void save_ensemble(const EnsembleModel& model, const std::string& dir) {
    const std::string real_path = dir + "/m_real.model";
    const std::string synth_path = dir + "/m_synth.model";
    const std::string combined_path = dir + "/m_combined.model";
    save_model(model.m_real, real_path);
    save_model(model.m_synth, synth_path);
    save_model(model.m_combined, combined_path);

    nlohmann::json j;
    j["models"] = {{"real", "m_real.model"},
                   {"synthetic", "m_synth.model"},
                   {"combined", "m_combined.model"}};
    j["weights"] = {model.w[0], model.w[1], model.w[2]};
    j["metric"] = metric_name(model.metric);
    j["fingerprints"] = {{"real", file_fingerprint(real_path)},
                         {"synthetic", file_fingerprint(synth_path)},
                         {"combined", file_fingerprint(combined_path)}};
    write_text_file(dir + "/ensemble.json", j.dump(2) + "\n");
}

EnsembleModel load_ensemble(const std::string& dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(dir + "/ensemble.json"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad ensemble manifest: " + std::string(e.what()));
    }
    EnsembleModel m;
    try {
        m.m_real = load_model(dir + "/" + j["models"]["real"].get<std::string>());
        m.m_synth = load_model(dir + "/" + j["models"]["synthetic"].get<std::string>());
        m.m_combined = load_model(dir + "/" + j["models"]["combined"].get<std::string>());
        auto w = j["weights"];
        m.w = {w[0].get<double>(), w[1].get<double>(), w[2].get<double>()};
        m.metric = parse_metric(j["metric"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad ensemble manifest: " + std::string(e.what()));
    }
    double sum = m.w[0] + m.w[1] + m.w[2];
    if (m.w[0] < 0 || m.w[1] < 0 || m.w[2] < 0 || std::abs(sum - 1.0) > 1e-9)
        throw DataError("ensemble weights are not on the simplex");
    return m;
}

} // namespace pathloss
