// Simulation configuration: every network, channel, game, and learning
// constant in one value type, plus the RNG seed. Quantities are SI unless
// noted; task sizes are bits throughout (a "MB" in configs written by hand
// means 1e6 bytes = 8e6 bits — the parser does not convert units).
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgdtn {

struct SimConfig {
    // Topology
    int n_mbs = 4;               // N
    int followers_per_mbs = 12;  // M
    int n_leo = 4;               // O
    int n_channels = 12;         // R; default R = M so contention is inter-cell only
    double slot_duration = 1.0;  // T, seconds

    // Task arrivals (bits) and per-bit CPU demand (cycles/bit)
    double arrival_lo = 8.0e7;       // 10 MB
    double arrival_hi = 2.4e8;       // 30 MB
    double cycles_per_bit_lo = 2000.0;
    double cycles_per_bit_hi = 4000.0;

    // LEO geometry ranges (meters)
    double x_lo = 1.0e6;
    double x_hi = 2.0e6;
    double y_lo = 5.0e5;
    double y_hi = 2.0e6;

    // Channel model
    double carrier_freq = 1.0e8;   // f_c, Hz
    double light_speed = 3.0e8;    // m/s
    double eps_los_lo = 0.0;       // extra LoS loss range, dB
    double eps_los_hi = 1.0;
    double eps_nlos_lo = 10.0;     // extra NLoS loss range, dB
    double eps_nlos_hi = 30.0;
    double b1 = 9.61;              // LoS probability constants (dense urban)
    double b2 = 0.16;
    double noise_power = 1.0e-13;  // sigma^2, W
    double tx_power = 1.0;         // P per follower, W
    double channel_bandwidth = 1.0e7; // B, Hz
    double i_max = 1.0e-13;        // interference cap, W

    // Lyapunov / objective
    double v_lyapunov = 10.0;      // V

    // Stackelberg game
    double unit_energy_cost = 1.0; // leader's cost coefficient c
    double price_cap = 10.0;       // lambda_max
    double baseline_price = 5.0;   // fixed quote used by non-learning policies
    int f1_window = 50;            // EWMA window for the running throughput average

    // Blockchain overhead
    double mbs_cpu_freq = 6.0e9;   // f_MBS, cycles/s
    double uplink_rate = 5.0e9;    // r_up, bits/s
    double downlink_rate = 1.0e10; // r_down, bits/s
    double model_tx_factor = 0.5;  // delta
    double model_size = 1.2e6;     // |W_m|, cycle-equivalent workload
    double block_min = 1.0e5;      // S_min, bits
    double block_max = 1.0e6;      // S_max, bits
    int n_delegates = 4;           // consensus delegates K (quorum = ceil(2K/3))

    // Follower hardware
    double follower_cpu_max = 2.0e9; // cycles/s
    double mamcc_cpu_pool = 2.4e10;  // f_total shared by the MAMCC baseline

    // Learning
    std::vector<int> hidden_dims = {64, 64};
    double lr_actor = 1.0e-3;
    double lr_critic = 1.0e-2;
    double gamma = 0.95;
    double explore_eps0 = 0.3;       // initial epsilon for discrete heads
    double explore_eps_decay = 0.995; // per-episode multiplier
    double explore_sigma0 = 0.5;     // initial pre-squash Gaussian std
    double explore_sigma_decay = 0.995;
    double reward_scale = 0.0;       // 0 = auto (1 / arrival_hi^2)
    int episode_slots = 200;
    int train_episodes = 500;
    int fed_every = 10;              // federation cadence, episodes
    double fl_agg_lr = -1.0;         // u; negative orients the Z - Z_m deltas
                                     // so the issued model is the weighted
                                     // local average (u = +1 keeps the
                                     // literal update for the algebra tests)
    bool flip_price_sign = false;    // flips the price term in follower utility

    // Meta-learning
    int maml_rounds = 0; // meta-pretraining rounds before the main loop
    double maml_inner_lr = 0.05;
    double maml_outer_lr = 0.02;
    int maml_inner_steps = 1;
    int maml_traj_per_task = 4;      // K
    int maml_task_batch = 4;
    double maml_arrival_jitter = 0.5; // task-context spread, fraction of base
    double maml_geom_jitter = 0.3;
    double maml_price_jitter = 0.5;
    std::string maml_wrap = "both";  // actor | critic | both

    // Harness
    int oracle_f_levels = 8;
    int oracle_block_levels = 4;
    int sweep_workers = 1;
    uint64_t seed = 1;

    int total_followers() const { return n_mbs * followers_per_mbs; }

    double effective_reward_scale() const {
        if (reward_scale > 0.0) return reward_scale;
        return 1.0 / (arrival_hi * arrival_hi);
    }

    // Throws std::invalid_argument naming the offending keys.
    void validate() const;
};

inline void SimConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (n_mbs < 1) fail("n_mbs must be >= 1");
    if (followers_per_mbs < 1) fail("followers_per_mbs must be >= 1");
    if (n_leo < 1) fail("n_leo must be >= 1");
    if (n_channels < 1) fail("n_channels must be >= 1");
    if (slot_duration <= 0.0) fail("slot_duration must be > 0");
    if (arrival_lo < 0.0 || arrival_lo > arrival_hi) fail("arrival_lo must satisfy 0 <= arrival_lo <= arrival_hi");
    if (cycles_per_bit_lo <= 0.0 || cycles_per_bit_lo > cycles_per_bit_hi) fail("cycles_per_bit_lo must satisfy 0 < cycles_per_bit_lo <= cycles_per_bit_hi");
    if (x_lo <= 0.0 || x_lo > x_hi) fail("x_lo must satisfy 0 < x_lo <= x_hi");
    if (y_lo <= 0.0 || y_lo > y_hi) fail("y_lo must satisfy 0 < y_lo <= y_hi");
    if (carrier_freq <= 0.0) fail("carrier_freq must be > 0");
    if (light_speed <= 0.0) fail("light_speed must be > 0");
    if (eps_los_lo > eps_los_hi) fail("eps_los_lo must be <= eps_los_hi");
    if (eps_nlos_lo > eps_nlos_hi) fail("eps_nlos_lo must be <= eps_nlos_hi");
    if (noise_power <= 0.0) fail("noise_power must be > 0");
    if (tx_power < 0.0) fail("tx_power must be >= 0");
    if (channel_bandwidth <= 0.0) fail("channel_bandwidth must be > 0");
    if (i_max < 0.0) fail("i_max must be >= 0");
    if (v_lyapunov < 0.0) fail("v_lyapunov must be >= 0");
    if (unit_energy_cost < 0.0) fail("unit_energy_cost must be >= 0");
    if (price_cap < 0.0) fail("price_cap must be >= 0");
    if (baseline_price < 0.0 || baseline_price > price_cap) fail("baseline_price must lie in [0, price_cap]");
    if (f1_window < 1) fail("f1_window must be >= 1");
    if (mbs_cpu_freq <= 0.0) fail("mbs_cpu_freq must be > 0");
    if (uplink_rate <= 0.0) fail("uplink_rate must be > 0");
    if (downlink_rate <= 0.0) fail("downlink_rate must be > 0");
    if (model_tx_factor < 0.0) fail("model_tx_factor must be >= 0");
    if (model_size < 0.0) fail("model_size must be >= 0");
    if (block_min < 0.0 || block_min > block_max) fail("block_min must satisfy 0 <= block_min <= block_max");
    if (n_delegates < 1) fail("n_delegates must be >= 1");
    if (follower_cpu_max < 0.0) fail("follower_cpu_max must be >= 0");
    if (mamcc_cpu_pool < 0.0) fail("mamcc_cpu_pool must be >= 0");
    if (hidden_dims.empty()) fail("hidden_dims must not be empty");
    for (int h : hidden_dims)
        if (h < 1) fail("hidden_dims entries must be >= 1");
    if (lr_actor < 0.0 || lr_critic < 0.0) fail("learning rates must be >= 0");
    if (gamma < 0.0 || gamma >= 1.0) fail("gamma must lie in [0, 1)");
    if (explore_eps0 < 0.0 || explore_eps0 > 1.0) fail("explore_eps0 must lie in [0, 1]");
    if (explore_eps_decay <= 0.0 || explore_eps_decay > 1.0) fail("explore_eps_decay must lie in (0, 1]");
    if (explore_sigma0 < 0.0) fail("explore_sigma0 must be >= 0");
    if (explore_sigma_decay <= 0.0 || explore_sigma_decay > 1.0) fail("explore_sigma_decay must lie in (0, 1]");
    if (reward_scale < 0.0) fail("reward_scale must be >= 0 (0 selects auto)");
    if (episode_slots < 0) fail("episode_slots must be >= 0");
    if (train_episodes < 0) fail("train_episodes must be >= 0");
    if (fed_every < 1) fail("fed_every must be >= 1");
    if (maml_rounds < 0) fail("maml_rounds must be >= 0");
    if (maml_inner_lr < 0.0 || maml_outer_lr < 0.0) fail("maml learning rates must be >= 0");
    if (maml_inner_steps < 0) fail("maml_inner_steps must be >= 0");
    if (maml_traj_per_task < 1) fail("maml_traj_per_task must be >= 1");
    if (maml_task_batch < 1) fail("maml_task_batch must be >= 1");
    if (maml_arrival_jitter < 0.0 || maml_arrival_jitter >= 1.0) fail("maml_arrival_jitter must lie in [0, 1)");
    if (maml_geom_jitter < 0.0 || maml_geom_jitter >= 1.0) fail("maml_geom_jitter must lie in [0, 1)");
    if (maml_price_jitter < 0.0 || maml_price_jitter >= 1.0) fail("maml_price_jitter must lie in [0, 1)");
    if (maml_wrap != "actor" && maml_wrap != "critic" && maml_wrap != "both") fail("maml_wrap must be one of actor|critic|both");
    if (oracle_f_levels < 1) fail("oracle_f_levels must be >= 1");
    if (oracle_block_levels < 1) fail("oracle_block_levels must be >= 1");
    if (sweep_workers < 1) fail("sweep_workers must be >= 1");
}

} // namespace sgdtn
