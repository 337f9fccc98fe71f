#include "oran/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace oran::channel {

namespace {

void require_distance(double d_m) {
    if (!(d_m >= 1.0)) {
        throw std::invalid_argument("path loss model is defined for d >= 1 m, got " +
                                    std::to_string(d_m));
    }
}

}  // namespace

void ChannelParams::validate() const {
    if (!(carrier_freq_ghz > 0.0)) throw std::invalid_argument("carrier_freq_ghz must be > 0");
    if (!(ru_height_m > 0.0)) throw std::invalid_argument("ru_height_m must be > 0");
    if (!(ue_height_m > 0.0)) throw std::invalid_argument("ue_height_m must be > 0");
    if (!(prb_bandwidth_hz > 0.0)) throw std::invalid_argument("prb_bandwidth_hz must be > 0");
    if (!(shadowing_sigma_los_db >= 0.0) || !(shadowing_sigma_nlos_db >= 0.0)) {
        throw std::invalid_argument("shadowing sigma must be >= 0");
    }
    const double bp = breakpoint_distance(*this);
    if (!std::isfinite(bp) || bp <= 0.0) throw std::invalid_argument("breakpoint distance not finite");
}

double breakpoint_distance(const ChannelParams& p) {
    return 4.0 * p.ru_height_m * p.ue_height_m * (p.carrier_freq_ghz * 1e9) / kSpeedOfLight;
}

double path_loss_los(double d_m, const ChannelParams& p) {
    require_distance(d_m);
    const double f_term = 20.0 * std::log10(p.carrier_freq_ghz);
    if (d_m <= breakpoint_distance(p)) {
        return 32.4 + 21.0 * std::log10(d_m) + f_term;
    }
    return 32.4 + 40.0 * std::log10(d_m) + f_term - 9.5;
}

double path_loss_nlos(double d_m, const ChannelParams& p) {
    require_distance(d_m);
    return 35.3 + 22.4 * std::log10(d_m) + 21.3 * std::log10(p.carrier_freq_ghz) -
           0.3 * (p.ue_height_m - 1.5);
}

double los_probability(double d_m) {
    if (d_m < 18.0) return 1.0;
    const double e = std::exp(-d_m / 36.0);
    const double p = std::min(18.0 / d_m, 1.0) * (1.0 - e) + e;
    return std::clamp(p, 0.0, 1.0);
}

LinkGain make_link(double path_loss_db, bool is_los) {
    return LinkGain{path_loss_db, is_los, std::pow(10.0, -path_loss_db / 10.0)};
}

LinkGain sample_link(double d_m, const ChannelParams& p, Rng& rng) {
    require_distance(d_m);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const bool los = uni(rng) < los_probability(d_m);
    const double z = normal(rng);
    const double pl = los ? path_loss_los(d_m, p) + p.shadowing_sigma_los_db * z
                          : path_loss_nlos(d_m, p) + p.shadowing_sigma_nlos_db * z;
    return make_link(pl, los);
}

double noise_per_prb_w(const ChannelParams& p) {
    return dbm_to_watts(p.noise_psd_dbm_hz) * p.prb_bandwidth_hz;
}

double snr_per_prb(const LinkGain& g, double p_tx_w, int q_total, const ChannelParams& p) {
    if (q_total <= 0) throw std::invalid_argument("q_total must be >= 1");
    if (!(p_tx_w > 0.0)) throw std::invalid_argument("p_tx_w must be > 0");
    return p_tx_w * g.gain_linear / (static_cast<double>(q_total) * noise_per_prb_w(p));
}

double achievable_rate(int n_prb, double snr, const ChannelParams& p) {
    if (n_prb <= 0) return 0.0;
    const double per_prb = p.prb_bandwidth_hz * std::log2(1.0 + snr);
    return static_cast<double>(n_prb) * per_prb;
}

}  // namespace oran::channel
