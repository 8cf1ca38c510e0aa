#include "pathloss/learner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pathloss/csv.hpp"
#include "pathloss/errors.hpp"
#include "pathloss/rng.hpp"

namespace pathloss {

Matrix make_matrix(std::span<const LinkSample> samples) {
    Matrix m;
    m.rows = samples.size();
    m.cols = kNumFeatures;
    m.data.reserve(m.rows * m.cols);
    for (const auto& s : samples)
        for (double v : s.features.to_array()) m.data.push_back(v);
    return m;
}

std::vector<double> make_targets(std::span<const LinkSample> samples) {
    std::vector<double> y;
    y.reserve(samples.size());
    for (const auto& s : samples) y.push_back(s.target_delta_rsrp);
    return y;
}

double Tree::predict(std::span<const double> features) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const TreeNode& n = nodes[i];
        i = (features[static_cast<std::size_t>(n.feature)] <= n.threshold)
                ? static_cast<std::size_t>(n.left)
                : static_cast<std::size_t>(n.right);
    }
    return nodes[i].value;
}

double GbdtModel::predict(std::span<const double> features) const {
    if (features.size() != n_features())
        throw DimensionMismatch("predict got " + std::to_string(features.size()) +
                                " features, model expects " +
                                std::to_string(n_features()));
    double acc = base_prediction;
    for (const auto& t : trees) acc += config.learning_rate * t.predict(features);
    return acc;
}

std::vector<double> GbdtModel::predict_all(const Matrix& x) const {
    std::vector<double> out;
    out.reserve(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out.push_back(predict(x.row(r)));
    return out;
}

namespace {

// Sum in ascending value order; permutation-invariant for any input order.
double canonical_sum(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

struct BestSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    std::size_t left_count = 0;
    double score = -std::numeric_limits<double>::infinity();
};

struct TreeBuilder {
    const Matrix& x;
    const std::vector<double>& residual;
    const TrainConfig& cfg;
    std::vector<TreeNode> nodes;

    // lists[c] holds the node's row indices ordered by (x[., c], residual);
    // prefix sums over that order are identical for any permutation of the
    // original rows, which is what makes training order-independent.
    int build(std::vector<std::vector<std::size_t>>& lists, int depth) {
        const std::size_t n = lists[0].size();
        int node_idx = static_cast<int>(nodes.size());
        nodes.emplace_back();

        std::vector<double> rv;
        rv.reserve(n);
        for (auto i : lists[0]) rv.push_back(residual[i]);
        std::sort(rv.begin(), rv.end());
        double total = 0.0;
        for (double v : rv) total += v;
        double leaf_value = total / static_cast<double>(n);
        double parent_score = total * total / static_cast<double>(n);

        auto make_leaf = [&]() {
            nodes[static_cast<std::size_t>(node_idx)].value = leaf_value;
            return node_idx;
        };
        if (depth >= cfg.max_depth) return make_leaf();
        if (n < 2 * static_cast<std::size_t>(cfg.min_samples_leaf)) return make_leaf();

        BestSplit best = find_split(lists, parent_score);
        if (!best.found) return make_leaf();

        // partition every feature list, preserving sorted order
        std::vector<std::vector<std::size_t>> left_lists(x.cols), right_lists(x.cols);
        for (std::size_t c = 0; c < x.cols; ++c) {
            left_lists[c].reserve(best.left_count);
            right_lists[c].reserve(n - best.left_count);
            for (auto i : lists[c]) {
                if (x.at(i, static_cast<std::size_t>(best.feature)) <= best.threshold)
                    left_lists[c].push_back(i);
                else
                    right_lists[c].push_back(i);
            }
        }
        lists.clear();
        lists.shrink_to_fit();

        int left = build(left_lists, depth + 1);
        int right = build(right_lists, depth + 1);
        TreeNode& nd = nodes[static_cast<std::size_t>(node_idx)];
        nd.feature = best.feature;
        nd.threshold = best.threshold;
        nd.left = left;
        nd.right = right;
        return node_idx;
    }

    BestSplit find_split(const std::vector<std::vector<std::size_t>>& lists,
                         double parent_score) const {
        const std::size_t n = lists[0].size();
        const auto min_leaf = static_cast<std::size_t>(cfg.min_samples_leaf);
        BestSplit best;
        best.score = parent_score;

        for (std::size_t c = 0; c < x.cols; ++c) {
            const auto& order = lists[c];
            double total = 0.0;
            for (auto i : order) total += residual[i];

            double left_sum = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                left_sum += residual[order[k]];
                std::size_t n_left = k + 1;
                if (n - n_left < min_leaf) break;
                if (n_left < min_leaf) continue;
                double xa = x.at(order[k], c);
                double xb = x.at(order[k + 1], c);
                if (xa == xb) continue;
                double thr = xa + (xb - xa) / 2.0;
                if (!(thr < xb)) thr = xa; // midpoint collapsed onto xb

                double right_sum = total - left_sum;
                double score = left_sum * left_sum / static_cast<double>(n_left) +
                               right_sum * right_sum / static_cast<double>(n - n_left);
                // strict > keeps the lowest feature index / lowest threshold
                // on equal gain
                if (score > best.score) {
                    best.found = true;
                    best.feature = static_cast<int>(c);
                    best.threshold = thr;
                    best.left_count = n_left;
                    best.score = score;
                }
            }
        }
        return best;
    }
};

void validate_config(const TrainConfig& c) {
    if (c.n_trees < 1) throw ConfigError("n_trees must be >= 1");
    if (c.max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (!(c.learning_rate > 0.0 && c.learning_rate <= 1.0))
        throw ConfigError("learning_rate must be in (0,1]");
    if (c.min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
    if (!(c.subsample > 0.0 && c.subsample <= 1.0))
        throw ConfigError("subsample must be in (0,1]");
}

} // namespace

GbdtModel fit(const Matrix& x, const std::vector<double>& y, const TrainConfig& config,
              std::vector<std::string> feature_names) {
    validate_config(config);
    if (x.rows != y.size()) throw LengthMismatch("X rows != y length");
    if (x.rows < 2 * static_cast<std::size_t>(config.min_samples_leaf))
        throw TooFewSamples("need at least 2*min_samples_leaf = " +
                            std::to_string(2 * config.min_samples_leaf) + " samples, got " +
                            std::to_string(x.rows));
    for (double v : x.data)
        if (!std::isfinite(v)) throw NonFiniteFeature("non-finite feature value");
    for (double v : y)
        if (!std::isfinite(v)) throw NonFiniteFeature("non-finite target value");

    GbdtModel model;
    model.config = config;
    if (feature_names.empty()) {
        for (std::size_t c = 0; c < x.cols; ++c)
            model.feature_names.push_back("f" + std::to_string(c));
    } else {
        if (feature_names.size() != x.cols)
            throw DimensionMismatch("feature name count != column count");
        model.feature_names = std::move(feature_names);
    }

    model.base_prediction = canonical_sum(y) / static_cast<double>(x.rows);

    std::vector<double> f_hat(x.rows, model.base_prediction);
    std::vector<double> residual(x.rows);
    Rng rng(mix_seed(config.seed, "gbdt_subsample"));

    for (int t = 0; t < config.n_trees; ++t) {
        for (std::size_t i = 0; i < x.rows; ++i) residual[i] = y[i] - f_hat[i];

        std::vector<std::size_t> rows(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i) rows[i] = i;
        if (config.subsample < 1.0) {
            auto k = static_cast<std::size_t>(
                std::llround(config.subsample * static_cast<double>(x.rows)));
            k = std::max<std::size_t>(k, 2 * static_cast<std::size_t>(config.min_samples_leaf));
            k = std::min(k, x.rows);
            rng.shuffle(rows);
            rows.resize(k);
            std::sort(rows.begin(), rows.end());
        }

        TreeBuilder builder{x, residual, config, {}};
        std::vector<std::vector<std::size_t>> lists(x.cols);
        for (std::size_t c = 0; c < x.cols; ++c) {
            lists[c] = rows;
            std::stable_sort(lists[c].begin(), lists[c].end(),
                             [&](std::size_t a, std::size_t b) {
                                 double xa = x.at(a, c), xb = x.at(b, c);
                                 if (xa != xb) return xa < xb;
                                 return residual[a] < residual[b];
                             });
        }
        builder.build(lists, 0);

        Tree tree;
        tree.nodes = std::move(builder.nodes);
        for (std::size_t i = 0; i < x.rows; ++i)
            f_hat[i] += config.learning_rate * tree.predict(x.row(i));
        model.trees.push_back(std::move(tree));

        std::vector<double> err(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i) err[i] = y[i] - f_hat[i];
        std::sort(err.begin(), err.end());
        double mse = 0.0;
        for (double e : err) mse += e * e;
        model.train_mse.push_back(mse / static_cast<double>(x.rows));
    }
    return model;
}

GbdtModel fit(std::span<const LinkSample> samples, const TrainConfig& config) {
    std::vector<std::string> names(FeatureVector::names().begin(),
                                   FeatureVector::names().end());
    return fit(make_matrix(samples), make_targets(samples), config, std::move(names));
}

void serialize(const GbdtModel& model, std::ostream& out) {
    out << "MODEL v1\n";
    out << "features " << model.feature_names.size();
    for (const auto& n : model.feature_names) out << ' ' << n;
    out << '\n';
    const auto& c = model.config;
    out << "config n_trees=" << c.n_trees << " max_depth=" << c.max_depth
        << " learning_rate=" << format_double(c.learning_rate)
        << " min_samples_leaf=" << c.min_samples_leaf
        << " subsample=" << format_double(c.subsample) << " seed=" << c.seed << '\n';
    out << "base " << format_double(model.base_prediction) << '\n';
    out << "train_mse " << model.train_mse.size();
    for (double v : model.train_mse) out << ' ' << format_double(v);
    out << '\n';
    out << "trees " << model.trees.size() << '\n';
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
        const auto& tree = model.trees[t];
        out << "tree " << t << ' ' << tree.nodes.size() << '\n';
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const auto& nd = tree.nodes[i];
            if (nd.is_leaf())
                out << "node " << i << " leaf " << format_double(nd.value) << '\n';
            else
                out << "node " << i << " split " << nd.feature << ' '
                    << format_double(nd.threshold) << ' ' << nd.left << ' ' << nd.right
                    << '\n';
        }
    }
    out << "end\n";
}

void save_model(const GbdtModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    serialize(model, out);
}

namespace {

std::string next_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CorruptModel("unexpected end of model stream");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> expect_tokens(const std::string& line, const std::string& head,
                                       std::size_t min_tokens) {
    auto toks = split(line, ' ');
    if (toks.empty() || toks[0] != head || toks.size() < min_tokens)
        throw CorruptModel("malformed '" + head + "' line: '" + line + "'");
    return toks;
}

long config_int(const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0)
        throw CorruptModel("expected config key '" + key + "' in '" + tok + "'");
    return parse_long(tok.substr(key.size() + 1), "model config " + key);
}

double config_dbl(const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0)
        throw CorruptModel("expected config key '" + key + "' in '" + tok + "'");
    return parse_double(tok.substr(key.size() + 1), "model config " + key);
}

} // namespace

GbdtModel deserialize(std::istream& in) {
    std::string magic = next_line(in);
    if (magic.rfind("MODEL ", 0) != 0)
        throw CorruptModel("not a model file (missing MODEL header)");
    if (magic != "MODEL v1")
        throw VersionMismatch("unsupported model version '" + magic.substr(6) + "'");

    GbdtModel m;
    try {
        auto feat = expect_tokens(next_line(in), "features", 2);
        auto n_feat = static_cast<std::size_t>(parse_long(feat[1], "feature count"));
        if (feat.size() != 2 + n_feat) throw CorruptModel("feature name count mismatch");
        for (std::size_t i = 0; i < n_feat; ++i) m.feature_names.push_back(feat[2 + i]);

        auto cfg = expect_tokens(next_line(in), "config", 7);
        m.config.n_trees = static_cast<int>(config_int(cfg[1], "n_trees"));
        m.config.max_depth = static_cast<int>(config_int(cfg[2], "max_depth"));
        m.config.learning_rate = config_dbl(cfg[3], "learning_rate");
        m.config.min_samples_leaf = static_cast<int>(config_int(cfg[4], "min_samples_leaf"));
        m.config.subsample = config_dbl(cfg[5], "subsample");
        m.config.seed = static_cast<std::uint64_t>(config_int(cfg[6], "seed"));

        auto base = expect_tokens(next_line(in), "base", 2);
        m.base_prediction = parse_double(base[1], "base prediction");

        auto mse = expect_tokens(next_line(in), "train_mse", 2);
        auto n_mse = static_cast<std::size_t>(parse_long(mse[1], "mse count"));
        if (mse.size() != 2 + n_mse) throw CorruptModel("train_mse count mismatch");
        for (std::size_t i = 0; i < n_mse; ++i)
            m.train_mse.push_back(parse_double(mse[2 + i], "train_mse"));

        auto trees = expect_tokens(next_line(in), "trees", 2);
        auto n_trees = static_cast<std::size_t>(parse_long(trees[1], "tree count"));
        for (std::size_t t = 0; t < n_trees; ++t) {
            auto th = expect_tokens(next_line(in), "tree", 3);
            if (static_cast<std::size_t>(parse_long(th[1], "tree index")) != t)
                throw CorruptModel("tree index out of order");
            auto n_nodes = static_cast<std::size_t>(parse_long(th[2], "node count"));
            Tree tree;
            for (std::size_t i = 0; i < n_nodes; ++i) {
                auto nt = expect_tokens(next_line(in), "node", 4);
                if (static_cast<std::size_t>(parse_long(nt[1], "node index")) != i)
                    throw CorruptModel("node index out of order");
                TreeNode nd;
                if (nt[2] == "leaf") {
                    nd.value = parse_double(nt[3], "leaf value");
                } else if (nt[2] == "split" && nt.size() == 7) {
                    nd.feature = static_cast<int>(parse_long(nt[3], "split feature"));
                    nd.threshold = parse_double(nt[4], "split threshold");
                    nd.left = static_cast<int>(parse_long(nt[5], "left child"));
                    nd.right = static_cast<int>(parse_long(nt[6], "right child"));
                    if (nd.feature < 0 ||
                        static_cast<std::size_t>(nd.feature) >= m.feature_names.size())
                        throw CorruptModel("split feature index out of range");
                } else {
                    throw CorruptModel("bad node kind '" + nt[2] + "'");
                }
                tree.nodes.push_back(nd);
            }
            for (const auto& nd : tree.nodes) {
                if (nd.is_leaf()) continue;
                auto nn = static_cast<long>(tree.nodes.size());
                if (nd.left < 0 || nd.right < 0 || nd.left >= nn || nd.right >= nn)
                    throw CorruptModel("child index out of range");
            }
            m.trees.push_back(std::move(tree));
        }
        if (next_line(in) != "end") throw CorruptModel("missing end marker");
    } catch (const DataError&) {
        throw;
    } catch (const Error& e) {
        throw CorruptModel(e.what());
    }
    return m;
}

GbdtModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    return deserialize(in);
}

} // namespace pathloss
