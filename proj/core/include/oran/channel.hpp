#pragma once

#include <cmath>

#include "oran/rng.hpp"

namespace oran::channel {

inline constexpr double kSpeedOfLight = 3.0e8;

/// Propagation and link-budget parameters for the urban-microcell model.
/// Frequencies are in GHz inside the path-loss formulas.
struct ChannelParams {
    double carrier_freq_ghz = 2.0;
    double ru_height_m = 15.0;
    double ue_height_m = 1.7;
    double noise_psd_dbm_hz = -174.0;
    double prb_bandwidth_hz = 180e3;
    double shadowing_sigma_los_db = 4.0;
    double shadowing_sigma_nlos_db = 7.82;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct LinkGain {
    double path_loss_db = 0.0;
    bool is_los = true;
    double gain_linear = 1.0;
};

/// 4 h_RU h_UE f / c, in meters.
double breakpoint_distance(const ChannelParams& p);

/// LOS path loss in dB. Piecewise at the breakpoint distance; d_m must be >= 1.
double path_loss_los(double d_m, const ChannelParams& p);

/// NLOS path loss in dB; d_m must be >= 1.
double path_loss_nlos(double d_m, const ChannelParams& p);

/// Probability of line of sight at horizontal distance d_m >= 0.
double los_probability(double d_m);

/// Draws LOS state and log-normal shadowing for one link in one slot.
/// Every call draws from rng whatever the outcome, so the stream position
/// does not depend on which RUs end up serving.
LinkGain sample_link(double d_m, const ChannelParams& p, Rng& rng);

/// Converts a path loss (dB, shadowing included) into a linear gain.
LinkGain make_link(double path_loss_db, bool is_los);

/// Noise power over one PRB in Watts.
double noise_per_prb_w(const ChannelParams& p);

/// Per-PRB SNR with the RU power spread evenly over q_total PRBs.
/// Independent of how many PRBs the user is granted.
double snr_per_prb(const LinkGain& g, double p_tx_w, int q_total, const ChannelParams& p);

/// Shannon rate in bits/s for n_prb PRBs at the given linear SNR.
double achievable_rate(int n_prb, double snr, const ChannelParams& p);

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace oran::channel
