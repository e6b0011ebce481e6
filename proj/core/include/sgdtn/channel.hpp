// Link-level math: LoS probability, path loss, inter-cell interference,
// Shannon offload rate, and per-slot bit counts.
#pragma once

#include <cmath>
#include <vector>

#include "sgdtn/config.hpp"

namespace sgdtn {

// One follower's channel/power assignment for a slot. A transmitting
// follower holds exactly one channel; local processors hold none.
struct ChannelAssignment {
    struct Entry {
        int mbs = 0;
        int follower = 0;
        int channel = -1;       // -1: not transmitting
        double power = 0.0;     // W
        int offload_target = -1; // LEO index; >= 0 iff offloading this slot
        bool transmitting() const { return channel >= 0 && offload_target >= 0; }
    };
    std::vector<Entry> entries; // one per (mbs, follower), row-major
};

double slant_range(double x, double y);

// LoS probability with the elevation angle in degrees.
double los_probability(double x, double y, double b1, double b2);

// Free-space term plus the LoS/NLoS mixture of the extra losses, in dB.
double path_loss(double x, double y, double carrier_freq, double light_speed,
                 double p_los, double eps_los, double eps_nlos);

// Amplitude-style channel gain used by both the interference sum and the
// SINR numerator: |10^(-L/10)|^2.
inline double loss_gain(double loss_db) {
    const double amp = std::pow(10.0, -loss_db / 10.0);
    return amp * amp;
}

// Aggregate interference seen at MBS `target_mbs` on channel `channel`:
// the sum over transmitting followers of *other* MBSs sharing the channel.
// `losses` holds each follower's link loss in dB, indexed like the entries.
double interference(const ChannelAssignment& assign,
                    const std::vector<double>& losses_db,
                    int n_mbs, int followers_per_mbs,
                    int target_mbs, int channel);

// Shannon rate of the offload link, bits/s. `offload` off means no
// transmission and a zero rate.
double offload_rate(double bandwidth, bool offload, double power,
                    double loss_db, double noise_power, double interference_w);

// Bits processed locally in one slot: f * T / w.
double local_bits(double cpu_freq, double cycles_per_bit, double slot_duration);

// Bits pushed through the offload link in one slot.
double offload_bits(double rate, double slot_duration);

} // namespace sgdtn
