#include "sgdtn/env.hpp"

#include <algorithm>
#include <cmath>

#include "sgdtn/ledger.hpp"

namespace sgdtn {

LeoGeometry step_geometry(Rng& rng, const SimConfig& cfg) {
    LeoGeometry g;
    g.n_leo = cfg.n_leo;
    const size_t total = static_cast<size_t>(cfg.total_followers()) * cfg.n_leo;
    g.horizontal.resize(total);
    g.vertical.resize(total);
    for (size_t i = 0; i < total; ++i) {
        g.horizontal[i] = rng.uniform(cfg.x_lo, cfg.x_hi);
        g.vertical[i] = rng.uniform(cfg.y_lo, cfg.y_hi);
    }
    return g;
}

static double uniform_second_moment(double a, double b) {
    return (b * b + a * b + a * a) / 3.0;
}

ArrivalProcess::ArrivalProcess(const SimConfig& cfg)
    : cfg_(&cfg),
      eta_(static_cast<size_t>(cfg.total_followers()),
           uniform_second_moment(cfg.arrival_lo, cfg.arrival_hi)) {}

ArrivalBatch ArrivalProcess::sample(Rng& rng) {
    ArrivalBatch batch;
    batch.bits.resize(eta_.size());
    ++count_;
    for (size_t i = 0; i < eta_.size(); ++i) {
        const double a = rng.uniform(cfg_->arrival_lo, cfg_->arrival_hi);
        batch.bits[i] = a;
        eta_[i] += (a * a - eta_[i]) / static_cast<double>(count_);
    }
    batch.second_moment_est = eta_;
    return batch;
}

ArrivalBatch sample_arrivals(Rng& rng, const SimConfig& cfg) {
    ArrivalProcess process(cfg);
    return process.sample(rng);
}

Environment::Environment(const SimConfig& cfg, Rng rng)
    : cfg_(cfg),
      arrivals_(cfg_),
      arrival_rng_(rng.split(0x41)),
      geom_rng_(rng.split(0x47)),
      link_rng_(rng.split(0x4c)) {}

SlotContext Environment::begin_slot() {
    SlotContext ctx;
    ctx.t = t_++;
    const int total = cfg_.total_followers();
    ctx.followers.resize(static_cast<size_t>(total));

    const LeoGeometry geom = step_geometry(geom_rng_, cfg_);
    const ArrivalBatch arrivals = arrivals_.sample(arrival_rng_);

    for (int g = 0; g < total; ++g) {
        FollowerSlot& fs = ctx.followers[static_cast<size_t>(g)];
        fs.arrival = arrivals.bits[static_cast<size_t>(g)];
        fs.cycles_per_bit = link_rng_.uniform(cfg_.cycles_per_bit_lo, cfg_.cycles_per_bit_hi);

        int best = 0;
        double best_range = slant_range(geom.x(g, 0), geom.y(g, 0));
        for (int o = 1; o < cfg_.n_leo; ++o) {
            const double r = slant_range(geom.x(g, o), geom.y(g, o));
            if (r < best_range) {
                best_range = r;
                best = o;
            }
        }
        fs.leo = best;
        fs.leo_x = geom.x(g, best);
        fs.leo_y = geom.y(g, best);

        const double eps_los = link_rng_.uniform(cfg_.eps_los_lo, cfg_.eps_los_hi);
        const double eps_nlos = link_rng_.uniform(cfg_.eps_nlos_lo, cfg_.eps_nlos_hi);
        const double p_los = los_probability(fs.leo_x, fs.leo_y, cfg_.b1, cfg_.b2);
        fs.loss_db = path_loss(fs.leo_x, fs.leo_y, cfg_.carrier_freq, cfg_.light_speed,
                               p_los, eps_los, eps_nlos);
    }
    return ctx;
}

ActionBox Environment::action_box(const FollowerSlot& fs, double queue) const {
    ActionBox box;
    box.cpu_hi = std::min(cfg_.follower_cpu_max,
                          fs.cycles_per_bit * queue / cfg_.slot_duration);
    box.block_lo = cfg_.block_min;
    box.block_hi = cfg_.block_max;
    box.n_channels = cfg_.n_channels;
    return box;
}

FollowerState Environment::observe(const FollowerSlot& fs, double queue,
                                   double price) const {
    return FollowerState{fs.arrival, fs.leo_x, fs.leo_y, price, queue};
}

SlotResult Environment::resolve(const SlotContext& ctx,
                                const std::vector<FollowerAction>& actions) const {
    const int total = cfg_.total_followers();
    const int m_per = cfg_.followers_per_mbs;

    SlotResult res;
    res.served.assign(static_cast<size_t>(total), 0.0);
    res.interference_w.assign(static_cast<size_t>(total), 0.0);
    res.overhead_s.assign(static_cast<size_t>(total), 0.0);
    res.demoted.assign(static_cast<size_t>(total), false);

    std::vector<double> losses(static_cast<size_t>(total));
    for (int g = 0; g < total; ++g) losses[static_cast<size_t>(g)] = ctx.followers[static_cast<size_t>(g)].loss_db;

    // Intended assignment: every follower that wants to offload transmits.
    ChannelAssignment intended;
    intended.entries.resize(static_cast<size_t>(total));
    for (int g = 0; g < total; ++g) {
        auto& e = intended.entries[static_cast<size_t>(g)];
        e.mbs = g / m_per;
        e.follower = g % m_per;
        if (actions[static_cast<size_t>(g)].offload) {
            e.channel = actions[static_cast<size_t>(g)].channel;
            e.power = cfg_.tx_power;
            e.offload_target = ctx.followers[static_cast<size_t>(g)].leo;
        }
    }

    const int r_ch = cfg_.n_channels;
    res.i_intended.assign(static_cast<size_t>(cfg_.n_mbs) * r_ch, 0.0);
    res.i_final.assign(static_cast<size_t>(cfg_.n_mbs) * r_ch, 0.0);
    for (int n = 0; n < cfg_.n_mbs; ++n)
        for (int r = 0; r < r_ch; ++r)
            res.i_intended[static_cast<size_t>(n) * r_ch + r] =
                interference(intended, losses, cfg_.n_mbs, m_per, n, r);

    // Interference cap: offloads whose channel would exceed i_max fall back
    // to local processing. One pass suffices; removing transmitters only
    // lowers everyone else's interference.
    res.assignment = intended;
    for (int g = 0; g < total; ++g) {
        const auto& e = intended.entries[static_cast<size_t>(g)];
        if (!e.transmitting()) continue;
        const double i_w = res.i_intended[static_cast<size_t>(e.mbs) * r_ch + e.channel];
        if (i_w > cfg_.i_max) {
            res.demoted[static_cast<size_t>(g)] = true;
            auto& fe = res.assignment.entries[static_cast<size_t>(g)];
            fe.channel = -1;
            fe.power = 0.0;
            fe.offload_target = -1;
        }
    }
    for (int n = 0; n < cfg_.n_mbs; ++n)
        for (int r = 0; r < r_ch; ++r)
            res.i_final[static_cast<size_t>(n) * r_ch + r] =
                interference(res.assignment, losses, cfg_.n_mbs, m_per, n, r);

    // Served bits against the post-demotion assignment.
    for (int g = 0; g < total; ++g) {
        const auto& fs = ctx.followers[static_cast<size_t>(g)];
        const auto& a = actions[static_cast<size_t>(g)];
        const auto& e = res.assignment.entries[static_cast<size_t>(g)];
        if (e.transmitting()) {
            const double i_w = res.i_final[static_cast<size_t>(e.mbs) * r_ch + e.channel];
            const double rate = offload_rate(cfg_.channel_bandwidth, true, e.power,
                                             fs.loss_db, cfg_.noise_power, i_w);
            res.interference_w[static_cast<size_t>(g)] = i_w;
            res.served[static_cast<size_t>(g)] = offload_bits(rate, cfg_.slot_duration);
        } else {
            res.served[static_cast<size_t>(g)] =
                local_bits(a.cpu_freq, fs.cycles_per_bit, cfg_.slot_duration);
        }
    }

    // Per-follower privacy overhead. C1 and C2 are configuration constants;
    // C3 depends on the follower's own block size and the slowest active
    // verifier in its cell (the MBS itself verifies when no follower can).
    const double c1 = aggregation_overhead(cfg_.model_size, cfg_.mbs_cpu_freq);
    const double c2 = transmission_overhead(cfg_.model_tx_factor, cfg_.n_mbs,
                                            cfg_.model_size, cfg_.uplink_rate);
    for (int n = 0; n < cfg_.n_mbs; ++n) {
        std::vector<double> freqs;
        freqs.reserve(static_cast<size_t>(m_per));
        for (int m = 0; m < m_per; ++m) {
            const double f = actions[static_cast<size_t>(n * m_per + m)].cpu_freq;
            if (f > 0.0) freqs.push_back(f);
        }
        if (freqs.empty()) freqs.push_back(cfg_.mbs_cpu_freq);
        for (int m = 0; m < m_per; ++m) {
            const int g = n * m_per + m;
            const double c3 = verification_overhead(cfg_.model_tx_factor, cfg_.n_mbs, m_per,
                                                    actions[static_cast<size_t>(g)].block_size,
                                                    cfg_.downlink_rate, freqs);
            res.overhead_s[static_cast<size_t>(g)] = total_overhead(c1, c2, c3).total;
        }
    }
    return res;
}

double max_service_bits(const SimConfig& cfg) {
    const double local_max =
        local_bits(cfg.follower_cpu_max, cfg.cycles_per_bit_lo, cfg.slot_duration);
    // Best conceivable link: zero loss, no interference.
    const double rate_max = cfg.channel_bandwidth *
        std::log2(1.0 + cfg.tx_power / cfg.noise_power);
    return std::max(local_max, offload_bits(rate_max, cfg.slot_duration));
}

} // namespace sgdtn
