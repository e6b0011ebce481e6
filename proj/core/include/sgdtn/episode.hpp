// The per-slot game loop: leader quotes, followers act, interference is
// resolved, queues advance, rewards and transitions are logged. One code
// path serves training, evaluation, baselines, the oracle policy, and
// meta-learning rollouts.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgdtn/baselines.hpp"
#include "sgdtn/config.hpp"
#include "sgdtn/env.hpp"
#include "sgdtn/metrics.hpp"
#include "sgdtn/oracle.hpp"
#include "sgdtn/policy.hpp"
#include "sgdtn/queueing.hpp"
#include "sgdtn/stackelberg.hpp"

namespace sgdtn {

enum class PolicyKind { Madfrl, Marto, Magcs, Mamcc, OracleDpp };

const char* to_string(PolicyKind k);
std::optional<PolicyKind> parse_policy(const std::string& name);

struct FollowerBank {
    PolicyCodec codec;
    std::vector<Mlp> actors;
    std::vector<Mlp> critics;

    static FollowerBank init(const SimConfig& cfg, Rng rng);
};

struct EpisodeOptions {
    bool explore = false;
    bool learn = false;            // per-slot actor/critic/leader updates
    bool record_metrics = false;
    bool record_oracle = false;    // keep frozen per-slot oracle contexts
    int slots = 0;                 // 0: cfg.episode_slots
    ExploreParams explore_params;
    const Mlp* shared_actor = nullptr;  // override every follower's actor
    const Mlp* shared_critic = nullptr;
    uint64_t rng_tag = 0;          // episode stream id
    uint64_t seed_label = 0;       // stamped into metrics rows
};

struct OracleSlotData {
    std::vector<OracleContext> contexts;   // per follower
    std::vector<FollowerAction> actions;   // logged
    std::vector<double> served;
    std::vector<double> overhead;
};

struct EpisodeStats {
    double total_reward = 0.0;        // sum of raw per-follower rewards
    double mean_critic_value = 0.0;   // critic at visited greedy actions
    double mean_queue = 0.0;
    double mean_throughput = 0.0;
    double leader_return = 0.0;       // sum of realized profits
};

struct EpisodeResult {
    std::vector<Trajectory> transitions; // per follower
    std::vector<MetricsRecord> metrics;  // per (slot, follower)
    std::vector<OracleSlotData> oracle;  // per slot when record_oracle
    EpisodeStats stats;
};

// Runs one episode from empty queues. `bank` and `leader` are only
// modified when opts.learn is set. Baseline kinds ignore the bank.
EpisodeResult run_episode(const SimConfig& cfg, PolicyKind kind,
                          FollowerBank* bank, LeaderAgent* leader,
                          Rng episode_rng, const EpisodeOptions& opts);

} // namespace sgdtn
