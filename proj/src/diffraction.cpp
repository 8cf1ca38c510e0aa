#include "pathloss/diffraction.hpp"

#include <cmath>

#include "pathloss/errors.hpp"

namespace pathloss {

double fresnel_nu(double h_m, double d1_m, double d2_m, double freq_hz) {
    if (d1_m <= 0.0 || d2_m <= 0.0 || freq_hz <= 0.0)
        throw NonPositiveGeometry("fresnel_nu requires d1, d2, freq > 0");
    double lambda = kSpeedOfLightMps / freq_hz;
    return h_m * std::sqrt((2.0 / lambda) * (1.0 / d1_m + 1.0 / d2_m));
}

double knife_edge_loss_db(double nu) {
    if (nu <= -0.78) return 0.0;
    double t = nu - 0.1;
    return 6.9 + 20.0 * std::log10(std::sqrt(t * t + 1.0) + t);
}

namespace {

struct DeygoutState {
    const Profile* profile;
    double freq_hz;
    int max_edges;
    std::vector<EdgeObstruction> edges;
    double loss_db = 0.0;

    // Finds and records the principal edge strictly between samples lo and
    // hi, where the ray endpoints sit at heights z_lo / z_hi, then recurses
    // into the two sub-paths.
    void process(std::size_t lo, std::size_t hi, double z_lo, double z_hi) {
        if (static_cast<int>(edges.size()) >= max_edges) return;
        if (hi <= lo + 1) return;
        const auto& d = profile->distances;
        const auto& surf = profile->surface;
        double span = d[hi] - d[lo];
        if (span <= 0.0) return;

        double best_nu = 0.0;
        std::size_t best = 0;
        bool found = false;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            double d1 = d[i] - d[lo];
            double d2 = d[hi] - d[i];
            if (d1 <= 0.0 || d2 <= 0.0) continue;
            double ray = z_lo + (z_hi - z_lo) * (d1 / span);
            double h = surf[i] - ray;
            double nu = fresnel_nu(h, d1, d2, freq_hz);
            if (!found || nu > best_nu) {
                best_nu = nu;
                best = i;
                found = true;
            }
        }
        if (!found || best_nu <= -0.78) return;

        EdgeObstruction e;
        e.index = best;
        e.d1_m = d[best] - d[lo];
        e.d2_m = d[hi] - d[best];
        double ray = z_lo + (z_hi - z_lo) * (e.d1_m / span);
        e.h_m = surf[best] - ray;
        e.nu = best_nu;
        edges.push_back(e);
        loss_db += knife_edge_loss_db(best_nu);

        // sub-paths terminate on the edge apex
        process(lo, best, z_lo, surf[best]);
        process(best, hi, surf[best], z_hi);
    }
};

} // namespace

DiffractionResult deygout_loss(const Profile& profile, double freq_hz,
                               double tx_h_agl_m, double rx_h_agl_m, int max_edges) {
    if (profile.size() < 3)
        throw DegenerateProfile("deygout needs at least 3 profile samples");
    if (max_edges < 1)
        throw ComputeError("max_edges must be >= 1");

    DeygoutState st;
    st.profile = &profile;
    st.freq_hz = freq_hz;
    st.max_edges = max_edges;
    double tx_z = profile.ground.front() + tx_h_agl_m;
    double rx_z = profile.ground.back() + rx_h_agl_m;
    st.process(0, profile.size() - 1, tx_z, rx_z);

    DiffractionResult res;
    res.loss_db = st.loss_db;
    res.edges = std::move(st.edges);
    return res;
}

} // namespace pathloss
