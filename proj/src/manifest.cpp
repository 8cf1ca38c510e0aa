#include "pathloss/manifest.hpp"

#include <filesystem>
#include <set>

#include "pathloss/csv.hpp"
#include "pathloss/errors.hpp"
#include "pathloss/rng.hpp"

namespace fs = std::filesystem;

namespace pathloss {

const EnvSpec& RunManifest::env(const std::string& name) const {
    for (const auto& e : envs)
        if (e.name == name) return e;
    throw ConfigError("environment '" + name + "' not declared in the manifest");
}

namespace {

const std::set<std::string>& global_keys() {
    static const std::set<std::string> keys = {
        "projection_origin_lat", "projection_origin_lon", "measurements_csv",
        "bs_registry_csv", "envs", "rsrp_threshold_dbm", "n_min", "vbw_default_deg",
        "rx_height_agl_m", "profile_step_m", "seed", "sim.spacing_m", "sim.model",
        "sim.ref_tilt_deg", "smote.k_neighbors", "smote.multiplier", "smote.n_synthetic",
        "gbdt.n_trees", "gbdt.max_depth", "gbdt.learning_rate", "gbdt.min_samples_leaf",
        "gbdt.subsample", "ensemble.metric", "ensemble.step", "scarcity.fraction",
        "spm.k1", "spm.k2", "spm.k3", "spm.k4", "spm.k5", "spm.k6", "spm.k7",
        "sui.urban", "sui.suburban", "sui.rural"};
    return keys;
}

// env.<name>.<field> -> {name, field}
std::optional<std::pair<std::string, std::string>> env_key(const std::string& key) {
    if (key.rfind("env.", 0) != 0) return std::nullopt;
    auto rest = key.substr(4);
    auto dot = rest.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size()) return std::nullopt;
    return std::make_pair(rest.substr(0, dot), rest.substr(dot + 1));
}

std::string resolve_path(const std::string& base_dir, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute()) return path.string();
    return (fs::path(base_dir) / path).lexically_normal().string();
}

void require_file(const std::string& path, const std::string& key) {
    if (!fs::exists(path))
        throw ConfigError("file referenced by '" + key + "' does not exist: " + path);
}

} // namespace

RunManifest load_manifest(const std::string& path) {
    if (!fs::exists(path)) throw ConfigError("manifest not found: " + path);
    std::string text = read_text_file(path);

    RunManifest m;
    m.base_dir = fs::path(path).parent_path().string();
    if (m.base_dir.empty()) m.base_dir = ".";
    m.fingerprint = fnv1a64(text);

    std::map<std::string, std::string> kv;
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        std::string line = text.substr(start, end == std::string::npos ? std::string::npos
                                                                       : end - start);
        start = end == std::string::npos ? text.size() + 1 : end + 1;
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        if (kv.count(key))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        kv[key] = value;
    }

    // validate keys before interpreting anything
    std::set<std::string> env_names;
    for (const auto& [key, value] : kv) {
        (void)value;
        if (global_keys().count(key)) continue;
        auto ek = env_key(key);
        if (!ek) throw ConfigError("unknown manifest key '" + key + "'");
        const auto& field = ek->second;
        if (field != "dsm" && field != "dhm" && field != "units" && field != "category" &&
            field != "sim_bbox")
            throw ConfigError("unknown manifest key '" + key + "'");
        env_names.insert(ek->first);
    }

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const std::string& key) -> std::string {
        auto v = get(key);
        if (!v) throw ConfigError("manifest is missing required key '" + key + "'");
        return *v;
    };
    auto get_double = [&](const std::string& key, double dflt) {
        auto v = get(key);
        return v ? parse_double(*v, "manifest key " + key) : dflt;
    };
    auto get_long = [&](const std::string& key, long dflt) {
        auto v = get(key);
        return v ? parse_long(*v, "manifest key " + key) : dflt;
    };

    m.origin.lat = parse_double(require("projection_origin_lat"), "projection_origin_lat");
    m.origin.lon = parse_double(require("projection_origin_lon"), "projection_origin_lon");
    m.measurements_csv = resolve_path(m.base_dir, require("measurements_csv"));
    m.bs_registry_csv = resolve_path(m.base_dir, require("bs_registry_csv"));
    require_file(m.measurements_csv, "measurements_csv");
    require_file(m.bs_registry_csv, "bs_registry_csv");

    for (const auto& name : split(require("envs"), ',')) {
        std::string env_name = trim(name);
        if (env_name.empty()) throw ConfigError("empty name in 'envs' list");
        EnvSpec e;
        e.name = env_name;
        e.dsm_path = resolve_path(m.base_dir, require("env." + env_name + ".dsm"));
        e.dhm_path = resolve_path(m.base_dir, require("env." + env_name + ".dhm"));
        require_file(e.dsm_path, "env." + env_name + ".dsm");
        require_file(e.dhm_path, "env." + env_name + ".dhm");
        auto units = get("env." + env_name + ".units").value_or("meters");
        if (units == "feet")
            e.units_feet = true;
        else if (units != "meters")
            throw ConfigError("env." + env_name + ".units must be meters or feet");
        e.category = parse_environment(
            get("env." + env_name + ".category").value_or("suburban"));
        if (auto bbox = get("env." + env_name + ".sim_bbox")) {
            auto parts = split(*bbox, ',');
            if (parts.size() != 4)
                throw ConfigError("env." + env_name + ".sim_bbox needs x0,y0,x1,y1");
            std::array<double, 4> b{};
            for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] =
                parse_double(parts[static_cast<std::size_t>(i)], "sim_bbox");
            e.sim_bbox = b;
        }
        env_names.erase(env_name);
        m.envs.push_back(std::move(e));
    }
    if (!env_names.empty())
        throw ConfigError("env.* keys for undeclared environment '" + *env_names.begin() +
                          "' (add it to 'envs')");

    m.rsrp_threshold_dbm = get_double("rsrp_threshold_dbm", m.rsrp_threshold_dbm);
    long n_min = get_long("n_min", static_cast<long>(m.n_min));
    if (n_min < 1) throw ConfigError("n_min must be >= 1");
    m.n_min = static_cast<std::size_t>(n_min);
    m.vbw_default_deg = get_double("vbw_default_deg", m.vbw_default_deg);
    m.rx_height_agl_m = get_double("rx_height_agl_m", m.rx_height_agl_m);
    if (auto v = get("profile_step_m")) m.profile_step_m = parse_double(*v, "profile_step_m");
    m.seed = static_cast<std::uint64_t>(get_long("seed", 0));

    m.sim_spacing_m = get_double("sim.spacing_m", m.sim_spacing_m);
    if (auto v = get("sim.model")) m.sim_model = parse_model_id(*v);
    m.sim_ref_tilt_deg = get_double("sim.ref_tilt_deg", m.sim_ref_tilt_deg);

    m.smote.k_neighbors = static_cast<std::size_t>(
        get_long("smote.k_neighbors", static_cast<long>(m.smote.k_neighbors)));
    m.smote.multiplier = get_double("smote.multiplier", m.smote.multiplier);
    m.smote.n_synthetic = static_cast<std::size_t>(
        get_long("smote.n_synthetic", static_cast<long>(m.smote.n_synthetic)));

    m.gbdt.n_trees = static_cast<int>(get_long("gbdt.n_trees", m.gbdt.n_trees));
    m.gbdt.max_depth = static_cast<int>(get_long("gbdt.max_depth", m.gbdt.max_depth));
    m.gbdt.learning_rate = get_double("gbdt.learning_rate", m.gbdt.learning_rate);
    m.gbdt.min_samples_leaf =
        static_cast<int>(get_long("gbdt.min_samples_leaf", m.gbdt.min_samples_leaf));
    m.gbdt.subsample = get_double("gbdt.subsample", m.gbdt.subsample);

    if (auto v = get("ensemble.metric")) m.ensemble_metric = parse_metric(*v);
    m.ensemble_step = get_double("ensemble.step", m.ensemble_step);
    m.scarcity_fraction = get_double("scarcity.fraction", m.scarcity_fraction);

    m.spm.k1 = get_double("spm.k1", m.spm.k1);
    m.spm.k2 = get_double("spm.k2", m.spm.k2);
    m.spm.k3 = get_double("spm.k3", m.spm.k3);
    m.spm.k4 = get_double("spm.k4", m.spm.k4);
    m.spm.k5 = get_double("spm.k5", m.spm.k5);
    m.spm.k6 = get_double("spm.k6", m.spm.k6);
    m.spm.k7 = get_double("spm.k7", m.spm.k7);

    if (auto v = get("sui.urban")) m.sui_map[Environment::kUrban] = parse_sui_terrain(*v);
    if (auto v = get("sui.suburban"))
        m.sui_map[Environment::kSuburban] = parse_sui_terrain(*v);
    if (auto v = get("sui.rural")) m.sui_map[Environment::kRural] = parse_sui_terrain(*v);

    return m;
}

} // namespace pathloss
