#include "sgdtn/queueing.hpp"

#include <algorithm>
#include <stdexcept>

#include "sgdtn/env.hpp"

namespace sgdtn {

double queue_update(double queue, double served, double arrived) {
    return std::max(queue - served + arrived, 0.0);
}

double dpp_objective(double queue, double served, double cpu_freq, double price,
                     double overhead, double v) {
    const double penalty = served - overhead - price * cpu_freq;
    return queue * served + v * penalty;
}

double drift_bound(double eta, double d_max) {
    return 0.5 * eta + d_max * d_max;
}

double theoretical_queue_bound(double x_hat, double s_max, double s_min,
                               double v, double varsigma) {
    if (varsigma <= 0.0) throw std::domain_error("theoretical_queue_bound: varsigma must be > 0");
    return (x_hat + (s_max - s_min) * v) / varsigma;
}

double instant_reward_term(double queue, double served, double cpu_freq,
                           double price, double overhead, double v) {
    return dpp_objective(queue, served, cpu_freq, price, overhead, v);
}

double instant_reward(std::span<const RewardTerm> terms, double v) {
    double total = 0.0;
    for (const auto& t : terms)
        total += instant_reward_term(t.queue, t.served, t.cpu_freq, t.price, t.overhead, v);
    return total;
}

DriftConstants drift_constants(const SimConfig& cfg, double eta, double queue,
                               double arrival) {
    DriftConstants d;
    d.v = cfg.v_lyapunov;
    d.eta = eta;
    d.d_max = max_service_bits(cfg);
    d.x_bound = drift_bound(eta, d.d_max);
    d.x_hat = d.x_bound + queue * arrival;
    return d;
}

} // namespace sgdtn
