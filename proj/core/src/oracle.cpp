#include "sgdtn/oracle.hpp"

#include <cmath>
#include <limits>

#include "sgdtn/channel.hpp"
#include "sgdtn/ledger.hpp"
#include "sgdtn/queueing.hpp"

namespace sgdtn {

double oracle_objective(const FollowerAction& action, const OracleContext& ctx,
                        const SimConfig& cfg) {
    double served;
    const bool survives = action.offload &&
        ctx.i_intended[static_cast<size_t>(action.channel)] <= cfg.i_max;
    if (survives) {
        const double rate =
            offload_rate(cfg.channel_bandwidth, true, cfg.tx_power, ctx.loss_db,
                         cfg.noise_power, ctx.i_final[static_cast<size_t>(action.channel)]);
        served = offload_bits(rate, cfg.slot_duration);
    } else {
        served = local_bits(action.cpu_freq, ctx.cycles_per_bit, cfg.slot_duration);
    }

    std::vector<double> freqs = ctx.peer_freqs;
    if (action.cpu_freq > 0.0) freqs.push_back(action.cpu_freq);
    if (freqs.empty()) freqs.push_back(cfg.mbs_cpu_freq);
    const double c1 = aggregation_overhead(cfg.model_size, cfg.mbs_cpu_freq);
    const double c2 = transmission_overhead(cfg.model_tx_factor, cfg.n_mbs,
                                            cfg.model_size, cfg.uplink_rate);
    const double c3 = verification_overhead(cfg.model_tx_factor, cfg.n_mbs,
                                            cfg.followers_per_mbs, action.block_size,
                                            cfg.downlink_rate, freqs);
    const double overhead = total_overhead(c1, c2, c3).total;
    return dpp_objective(ctx.queue, served, action.cpu_freq, ctx.price, overhead,
                         cfg.v_lyapunov);
}

FollowerAction oracle_slot_action(const OracleContext& ctx, const SimConfig& cfg,
                                  const OracleGrid& grid,
                                  const FollowerAction* extra_candidate,
                                  double* best_objective) {
    FollowerAction best;
    best.cpu_freq = 0.0;
    best.channel = 0;
    best.offload = false;
    best.block_size = ctx.box.block_lo;
    double best_obj = -std::numeric_limits<double>::infinity();

    const int fl = grid.f_levels;
    const int bl = grid.block_levels;
    for (int fi = 0; fi < fl; ++fi) {
        FollowerAction a;
        a.cpu_freq = (fl > 1) ? ctx.box.cpu_hi * fi / (fl - 1) : ctx.box.cpu_hi;
        for (int bi = 0; bi < bl; ++bi) {
            a.block_size = (bl > 1)
                ? ctx.box.block_lo + (ctx.box.block_hi - ctx.box.block_lo) * bi / (bl - 1)
                : ctx.box.block_lo;
            for (int off = 0; off < 2; ++off) {
                a.offload = off == 1;
                for (int r = 0; r < ctx.box.n_channels; ++r) {
                    a.channel = r;
                    const double obj = oracle_objective(a, ctx, cfg);
                    if (obj > best_obj) {
                        best_obj = obj;
                        best = a;
                    }
                }
            }
        }
    }
    if (extra_candidate) {
        const double obj = oracle_objective(*extra_candidate, ctx, cfg);
        if (obj > best_obj) {
            best_obj = obj;
            best = *extra_candidate;
        }
    }
    if (best_objective) *best_objective = best_obj;
    return best;
}

} // namespace sgdtn
