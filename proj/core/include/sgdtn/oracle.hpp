// Brute-force per-slot maximizer of the drift-plus-penalty objective over
// a discretized action grid, with the other followers' actions frozen.
// Serves both as the optimality certificate for trained policies and as a
// runnable policy in sweeps.
#pragma once

#include <optional>
#include <vector>

#include "sgdtn/action.hpp"
#include "sgdtn/config.hpp"
#include "sgdtn/env.hpp"

namespace sgdtn {

struct OracleGrid {
    int f_levels = 8;
    int block_levels = 4;

    static OracleGrid from_config(const SimConfig& cfg) {
        return {cfg.oracle_f_levels, cfg.oracle_block_levels};
    }
};

// Frozen view of one slot from a single follower's perspective.
struct OracleContext {
    int mbs = 0;
    double queue = 0.0;          // backlog before service
    double price = 0.0;
    double loss_db = 0.0;        // own link loss
    double cycles_per_bit = 0.0;
    ActionBox box;
    // Interference per channel at this follower's MBS, from the others'
    // intended and post-demotion assignments.
    std::vector<double> i_intended;
    std::vector<double> i_final;
    // Other same-cell followers' positive CPU frequencies (verifier pool).
    std::vector<double> peer_freqs;
};

// Objective of a candidate action in the frozen slot, with the same
// demotion rule the environment applies.
double oracle_objective(const FollowerAction& action, const OracleContext& ctx,
                        const SimConfig& cfg);

// Exhaustive argmax over the grid (plus an optional extra candidate, used
// when certifying logged actions). Ties break to the lowest action index
// in enumeration order: f, block, offload, channel ascending.
FollowerAction oracle_slot_action(const OracleContext& ctx, const SimConfig& cfg,
                                  const OracleGrid& grid,
                                  const FollowerAction* extra_candidate = nullptr,
                                  double* best_objective = nullptr);

} // namespace sgdtn
