// Shared vocabulary between the environment, policies, and the oracle:
// the local observation, the four-component action, and the per-slot
// feasibility box the action must live in.
#pragma once

namespace sgdtn {

// What one follower is allowed to see (never another follower's fields).
struct FollowerState {
    double arrival = 0.0;  // bits admitted this slot
    double leo_x = 0.0;    // horizontal distance to the serving LEO, m
    double leo_y = 0.0;    // its altitude, m
    double price = 0.0;    // leader's quote for this follower
    double queue = 0.0;    // own backlog, bits
};

struct FollowerAction {
    double cpu_freq = 0.0;   // cycles/s
    int channel = 0;         // [0, R)
    bool offload = false;    // true: transmit to the serving LEO
    double block_size = 0.0; // S_B, bits
};

// Per-slot feasibility box. cpu_hi already folds in both the hardware cap
// and the queue coupling f <= w*Q/T.
struct ActionBox {
    double cpu_hi = 0.0;
    double block_lo = 0.0;
    double block_hi = 0.0;
    int n_channels = 1;

    bool contains(const FollowerAction& a) const {
        return a.cpu_freq >= 0.0 && a.cpu_freq <= cpu_hi * (1.0 + 1e-12) &&
               a.block_size >= block_lo - 1e-9 && a.block_size <= block_hi + 1e-9 &&
               a.channel >= 0 && a.channel < n_channels;
    }
};

} // namespace sgdtn
