#include "mcast/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mcast {

double path_loss_db(double distance_km) {
    if (!(distance_km > 0.0))
        throw std::domain_error("path_loss_db: distance must be > 0 km");
    return 128.1 + 37.6 * std::log10(distance_km);
}

std::vector<UEPosition> place_ues(int count, double cell_radius_km, RngStream rng,
                                  double shadowing_sigma_db) {
    if (count < 1)
        throw std::invalid_argument("place_ues: count must be >= 1");
    if (!(cell_radius_km > 0.0))
        throw std::invalid_argument("place_ues: cell radius must be > 0");

    std::vector<UEPosition> ues;
    ues.reserve(count);
    for (int u = 0; u < count; ++u) {
        RngStream s = rng.fork(u);
        // d = R * sqrt(v) with v uniform (0, 1] gives area-uniform points
        // and keeps d strictly positive.
        const double v = 1.0 - s.uniform();
        UEPosition pos;
        pos.id = u;
        pos.distance_km = cell_radius_km * std::sqrt(v);
        pos.shadowing_db = s.normal(0.0, shadowing_sigma_db);
        ues.push_back(pos);
    }
    return ues;
}

AverageChannel average_snr(const UEPosition& pos, const ChannelParams& params) {
    const double noise_dbm = params.noise_density_dbm_hz +
                             10.0 * std::log10(params.prb_width_hz) +
                             params.noise_figure_db;
    const double snr_db =
        params.tx_power_dbm - path_loss_db(pos.distance_km) - pos.shadowing_db - noise_dbm;
    return AverageChannel{pos.id, std::pow(10.0, snr_db / 10.0)};
}

RateMatrix sample_subframe_rates(const std::vector<AverageChannel>& avgs, int n_prbs,
                                 const CqiTable& table, RngStream rng, int subframe) {
    if (n_prbs < 1)
        throw std::invalid_argument("sample_subframe_rates: n_prbs must be >= 1");

    RateMatrix rates(static_cast<int>(avgs.size()), n_prbs, subframe);
    for (std::size_t u = 0; u < avgs.size(); ++u) {
        RngStream row = rng.fork(u);
        for (int j = 0; j < n_prbs; ++j) {
            const double fade = row.fork(j).exponential();
            const double snr = avgs[u].avg_snr_linear * fade;
            rates.at(static_cast<int>(u), j) = cqi_to_rate(snr_to_cqi(snr, table), table);
        }
    }
    return rates;
}

}  // namespace mcast
