#include <array>
#include <string>

#include "pathloss/errors.hpp"
#include "pathloss/reference.hpp"

namespace pathloss {

namespace {

// 3GPP TS 36.101 table 5.7.3-1 (downlink), the bands seen in US LTE
// deployments this toolkit targets.
struct EarfcnBand {
    int band;
    double f_dl_low_mhz;
    long n_offs_dl;
    long n_min;
    long n_max;
};

constexpr std::array<EarfcnBand, 11> kBands = {{
    {2, 1930.0, 600, 600, 1199},
    {4, 2110.0, 1950, 1950, 2399},
    {5, 869.0, 2400, 2400, 2649},
    {12, 729.0, 5010, 5010, 5179},
    {13, 746.0, 5180, 5180, 5279},
    {17, 734.0, 5730, 5730, 5849},
    {25, 1930.0, 8040, 8040, 8689},
    {26, 859.0, 8690, 8690, 9039},
    {41, 2496.0, 39650, 39650, 41589},
    {66, 2110.0, 66436, 66436, 67335},
    {71, 617.0, 68586, 68586, 68935},
}};

} // namespace

double earfcn_to_freq_hz(long earfcn) {
    for (const auto& b : kBands) {
        if (earfcn >= b.n_min && earfcn <= b.n_max) {
            double f_mhz = b.f_dl_low_mhz + 0.1 * static_cast<double>(earfcn - b.n_offs_dl);
            return f_mhz * 1e6;
        }
    }
    throw UnknownEarfcn("EARFCN " + std::to_string(earfcn) +
                        " not in the supported band table");
}

} // namespace pathloss
