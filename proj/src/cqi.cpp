#include "mcast/cqi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mcast {

void CqiTable::validate() const {
    for (int c = 0; c < kLevels; ++c) {
        if (!(snr_min_linear[c] > 0.0) || !std::isfinite(snr_min_linear[c]))
            throw std::invalid_argument("CqiTable: snr_min_linear[" + std::to_string(c + 1) +
                                        "] must be finite and > 0");
        if (!(rate_kbps[c] > 0.0) || !std::isfinite(rate_kbps[c]))
            throw std::invalid_argument("CqiTable: rate_kbps[" + std::to_string(c + 1) +
                                        "] must be finite and > 0");
        if (c > 0 && !(snr_min_linear[c] > snr_min_linear[c - 1]))
            throw std::invalid_argument("CqiTable: snr_min_linear must be strictly increasing");
        if (c > 0 && !(rate_kbps[c] > rate_kbps[c - 1]))
            throw std::invalid_argument("CqiTable: rate_kbps must be strictly increasing");
    }
    if (rate_kbps[0] < 16.0)
        throw std::invalid_argument("CqiTable: rate_kbps[1] must be >= 16 kbps");
}

CqiTable CqiTable::from_db(const std::array<double, kLevels>& snr_min_db,
                           const std::array<double, kLevels>& rate) {
    CqiTable t;
    t.snr_min_db = snr_min_db;
    for (int c = 0; c < kLevels; ++c) {
        t.snr_min_linear[c] = std::pow(10.0, snr_min_db[c] / 10.0);
        t.rate_kbps[c] = rate[c];
    }
    t.validate();
    return t;
}

const CqiTable& default_cqi_table() {
    static const CqiTable table = [] {
        const std::array<double, CqiTable::kLevels> efficiency = {
            0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
            2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
        std::array<double, CqiTable::kLevels> snr_min_db{};
        std::array<double, CqiTable::kLevels> rate{};
        for (int c = 0; c < CqiTable::kLevels; ++c) {
            snr_min_db[c] = -6.7 + 2.1 * c;
            rate[c] = efficiency[c] * 180.0;  // 180 kHz PRB
        }
        return CqiTable::from_db(snr_min_db, rate);
    }();
    return table;
}

int snr_to_cqi(double snr_linear, const CqiTable& table) {
    int cqi = 0;
    for (int c = 0; c < CqiTable::kLevels; ++c) {
        if (snr_linear >= table.snr_min_linear[c])
            cqi = c + 1;
        else
            break;
    }
    return cqi;
}

double cqi_to_rate(int cqi, const CqiTable& table) {
    if (cqi < 0 || cqi > CqiTable::kLevels)
        throw std::domain_error("cqi_to_rate: cqi must be in 0..15, got " + std::to_string(cqi));
    return cqi == 0 ? 0.0 : table.rate_kbps[cqi - 1];
}

}  // namespace mcast
