#include "sgdtn/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdtn {

double slant_range(double x, double y) {
    return std::sqrt(x * x + y * y);
}

double los_probability(double x, double y, double b1, double b2) {
    if (x <= 0.0) throw std::domain_error("los_probability: horizontal distance must be > 0");
    const double elevation_deg = std::atan2(y, x) * 180.0 / M_PI;
    return 1.0 / (1.0 + b1 * std::exp(-b2 * (elevation_deg - b1)));
}

double path_loss(double x, double y, double carrier_freq, double light_speed,
                 double p_los, double eps_los, double eps_nlos) {
    if (x <= 0.0 || y <= 0.0) throw std::domain_error("path_loss: distances must be > 0");
    const double free_space =
        20.0 * std::log10(4.0 * M_PI * carrier_freq * slant_range(x, y) / light_speed);
    return free_space + p_los * eps_los + (1.0 - p_los) * eps_nlos;
}

double interference(const ChannelAssignment& assign,
                    const std::vector<double>& losses_db,
                    int n_mbs, int followers_per_mbs,
                    int target_mbs, int channel) {
    double total = 0.0;
    for (const auto& e : assign.entries) {
        if (e.mbs == target_mbs) continue;
        if (!e.transmitting() || e.channel != channel) continue;
        const int idx = e.mbs * followers_per_mbs + e.follower;
        total += e.power * loss_gain(losses_db[static_cast<size_t>(idx)]);
    }
    (void)n_mbs;
    return total;
}

double offload_rate(double bandwidth, bool offload, double power,
                    double loss_db, double noise_power, double interference_w) {
    if (!offload) return 0.0;
    const double sinr = power * loss_gain(loss_db) / (noise_power + interference_w);
    return bandwidth * std::log2(1.0 + sinr);
}

double local_bits(double cpu_freq, double cycles_per_bit, double slot_duration) {
    if (cycles_per_bit <= 0.0) throw std::domain_error("local_bits: cycles_per_bit must be > 0");
    return cpu_freq * slot_duration / cycles_per_bit;
}

double offload_bits(double rate, double slot_duration) {
    return rate * slot_duration;
}

} // namespace sgdtn
