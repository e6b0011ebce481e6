// Virtual task queues and the drift-plus-penalty transformation: the
// per-slot objective that every policy (learned, baseline, oracle)
// maximizes, plus the bound constants the acceptance tests lean on.
#pragma once

#include <span>
#include <vector>

#include "sgdtn/config.hpp"

namespace sgdtn {

struct QueueState {
    std::vector<double> backlog;              // bits per follower
    std::vector<std::vector<double>> history; // per-follower backlog series

    explicit QueueState(int n_followers)
        : backlog(static_cast<size_t>(n_followers), 0.0),
          history(static_cast<size_t>(n_followers)) {}

    void record() {
        for (size_t i = 0; i < backlog.size(); ++i) history[i].push_back(backlog[i]);
    }

    double mean_backlog() const {
        double sum = 0.0;
        size_t count = 0;
        for (const auto& h : history) {
            for (double q : h) sum += q;
            count += h.size();
        }
        return count ? sum / static_cast<double>(count) : 0.0;
    }
};

struct DriftConstants {
    double v = 0.0;       // Lyapunov control parameter
    double x_bound = 0.0; // X = 0.5*eta + d_max^2
    double x_hat = 0.0;   // X + Q*A
    double d_max = 0.0;   // max realizable per-slot service
    double eta = 0.0;     // arrival second moment
};

// Q(t+1) = max(Q - served + arrived, 0).
double queue_update(double queue, double served, double arrived);

// Per-slot drift-plus-penalty score: Q*D + V*(D - C_SBC - price*f).
// Higher is better.
double dpp_objective(double queue, double served, double cpu_freq, double price,
                     double overhead, double v);

// X = 0.5*eta + d_max^2.
double drift_bound(double eta, double d_max);

// (X_hat + (S_max - S_min)*V) / varsigma; the time-average queue envelope.
double theoretical_queue_bound(double x_hat, double s_max, double s_min,
                               double v, double varsigma);

// Per-follower summand of the shared instant reward; equals dpp_objective.
double instant_reward_term(double queue, double served, double cpu_freq,
                           double price, double overhead, double v);

// Shared instant reward: the sum of the per-follower summands.
struct RewardTerm {
    double queue = 0.0;
    double served = 0.0;
    double cpu_freq = 0.0;
    double price = 0.0;
    double overhead = 0.0;
};
double instant_reward(std::span<const RewardTerm> terms, double v);

DriftConstants drift_constants(const SimConfig& cfg, double eta, double queue,
                               double arrival);

} // namespace sgdtn
