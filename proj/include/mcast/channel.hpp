#pragma once

#include <vector>

#include "mcast/cqi.hpp"
#include "mcast/rng.hpp"

namespace mcast {

/// UE location within the cell.  Only the distance to the cell-center eNB
/// matters for path loss; the lognormal shadowing term is drawn once per
/// placement and held fixed across subframes.
struct UEPosition {
    int id = 0;
    double distance_km = 0.0;
    double shadowing_db = 0.0;
};

/// Per-UE slow channel component (path loss + shadowing), subframe-invariant.
struct AverageChannel {
    int ue = 0;
    double avg_snr_linear = 0.0;
};

/// Per-entity x per-PRB achievable rates for one subframe.  Rows are UEs or
/// multicast groups depending on who produced the matrix.
struct RateMatrix {
    int rows = 0;
    int cols = 0;
    int subframe = 0;
    std::vector<double> rates_kbps;  // row-major rows x cols

    RateMatrix() = default;
    RateMatrix(int rows_, int cols_, int subframe_ = 0)
        : rows(rows_), cols(cols_), subframe(subframe_),
          rates_kbps(static_cast<std::size_t>(rows_) * cols_, 0.0) {}

    double& at(int entity, int prb) { return rates_kbps[static_cast<std::size_t>(entity) * cols + prb]; }
    double at(int entity, int prb) const { return rates_kbps[static_cast<std::size_t>(entity) * cols + prb]; }
};

/// Link-budget constants used to turn a placement into average SNRs.
struct ChannelParams {
    double tx_power_dbm = 46.0;
    double noise_density_dbm_hz = -174.0;
    double noise_figure_db = 5.0;
    double prb_width_hz = 180000.0;
    double shadowing_sigma_db = 10.0;
};

/// 128.1 + 37.6 log10(d), d in km.  Throws std::domain_error for d <= 0.
double path_loss_db(double distance_km);

/// Area-uniform positions on the disk of the given radius with per-UE
/// N(0, sigma) shadowing in dB.  Deterministic given the stream.
/// Throws std::invalid_argument for count = 0 or radius <= 0.
std::vector<UEPosition> place_ues(int count, double cell_radius_km, RngStream rng,
                                  double shadowing_sigma_db = 10.0);

/// avg_snr_db = tx - PL(d) - shadowing - (noise density + 10 log10(prb width) + NF).
/// Noise bandwidth is one PRB.
AverageChannel average_snr(const UEPosition& pos, const ChannelParams& params);

/// Instantaneous per-(UE, PRB) rates: SNR = avg * Exp(1) fading, mapped
/// through the CQI table.  The fading draw for cell (u, j) comes from
/// rng.fork(u).fork(j), so the matrix is identical under any evaluation
/// order.
RateMatrix sample_subframe_rates(const std::vector<AverageChannel>& avgs, int n_prbs,
                                 const CqiTable& table, RngStream rng, int subframe = 0);

}  // namespace mcast
