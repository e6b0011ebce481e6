// Training and evaluation orchestration: the episode loop with annealed
// exploration, the federation cadence with ledger-gated issuing, optional
// meta-learned initialization, checkpoints, and the oracle verification
// harness.
#pragma once

#include <string>
#include <vector>

#include "sgdtn/episode.hpp"
#include "sgdtn/federation.hpp"
#include "sgdtn/ledger.hpp"

namespace sgdtn {

struct TrainStats {
    std::vector<double> episode_reward;
    std::vector<double> episode_critic_value;
    std::vector<double> episode_queue;
    int federation_rounds = 0;
};

class Runner {
public:
    Runner(const SimConfig& cfg, PolicyKind kind, uint64_t seed);

    // Trains learned policies for cfg.train_episodes; baselines and the
    // oracle have nothing to train.
    void train();

    EpisodeResult evaluate(bool record_oracle = false) const;

    const TrainStats& stats() const { return stats_; }
    FollowerBank& bank() { return bank_; }
    const FollowerBank& bank() const { return bank_; }
    LeaderAgent& leader() { return leader_; }
    const LeaderAgent& leader() const { return leader_; }
    Ledger& ledger() { return ledger_; }
    const SimConfig& config() const { return cfg_; }
    PolicyKind kind() const { return kind_; }
    uint64_t seed() const { return seed_; }

    void save_checkpoints(const std::string& dir) const;

private:
    void federation_round();

    SimConfig cfg_;
    PolicyKind kind_;
    uint64_t seed_;
    Rng root_;
    FollowerBank bank_;
    LeaderAgent leader_;
    Ledger ledger_;
    Mlp global_actor_;
    std::vector<double> fed_bits_;
    std::vector<double> fed_dist_;
    double fed_block_sum_ = 0.0;
    long long fed_block_count_ = 0;
    TrainStats stats_;
    int episodes_done_ = 0;
};

struct OracleVerifyResult {
    bool all_maximal = false;   // oracle >= logged on every (slot, follower)
    double mean_logged = 0.0;   // mean logged per-slot objective
    double mean_oracle = 0.0;   // mean oracle per-slot objective
    double ratio = 0.0;         // mean_logged / mean_oracle
    long long checked = 0;
    long long violations = 0;
};

// Certifies a recorded evaluation trace against the enumeration oracle.
OracleVerifyResult oracle_verify(const SimConfig& cfg, const EpisodeResult& trace);

// Replayable transition log (one row per follower per slot).
void write_transitions_csv(const std::string& path,
                           const std::vector<Trajectory>& trajectories);

} // namespace sgdtn
