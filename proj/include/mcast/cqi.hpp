#pragma once

#include <array>

namespace mcast {

/// SNR-to-CQI and CQI-to-rate lookup for the 15 LTE CQI levels.
///
/// snr_min_linear[c-1] is the smallest (linear) SNR mapped to CQI c;
/// rate_kbps[c-1] is the per-PRB rate the MCS of CQI c carries.  Both arrays
/// are strictly increasing and the lowest rate is at least 16 kbps.
struct CqiTable {
    static constexpr int kLevels = 15;

    std::array<double, kLevels> snr_min_linear{};
    std::array<double, kLevels> rate_kbps{};
    std::array<double, kLevels> snr_min_db{};  // source form, kept for config round trips

    /// Throws std::invalid_argument when the invariants above fail.
    void validate() const;

    static CqiTable from_db(const std::array<double, kLevels>& snr_min_db,
                            const std::array<double, kLevels>& rate_kbps);
};

/// 3GPP 36.213-style spectral efficiencies at 180 kHz, thresholds spaced
/// 2.1 dB starting at -6.7 dB.
const CqiTable& default_cqi_table();

/// Largest c with snr >= snr_min_linear[c]; 0 when below CQI 1 (no
/// transmission).  Requires snr >= 0.
int snr_to_cqi(double snr_linear, const CqiTable& table);

/// 0 for cqi = 0, otherwise the table rate.  Throws std::domain_error for
/// cqi outside 0..15.
double cqi_to_rate(int cqi, const CqiTable& table);

}  // namespace mcast
