// Two-stage pricing game: the leader quotes per-follower prices from the
// previous slot's observed CPU frequencies; followers respond through their
// own drift-plus-penalty objective.
#pragma once

#include <span>
#include <vector>

#include "sgdtn/config.hpp"
#include "sgdtn/mlp.hpp"
#include "sgdtn/rng.hpp"

namespace sgdtn {

struct LeaderState {
    std::vector<double> follower_freqs; // previous slot's f, per follower
    double unit_cost = 0.0;
};

struct PriceQuote {
    std::vector<double> price; // per follower, within [0, price_cap]
};

// Sum over followers of (price - unit_cost) * freq. Throws on a negative
// price.
double leader_profit(std::span<const double> prices,
                     std::span<const double> freqs, double unit_cost);

// F1 - F2 with F1 the running throughput average and F2 = C_SBC - price*f
// (Eq.-literal sign; flip_price_sign negates the price term).
double follower_utility(double throughput_avg, double overhead, double price,
                        double cpu_freq, bool flip_price_sign = false);

struct LeaderTransition {
    std::vector<double> state_feats;
    std::vector<double> u;       // pre-squash price samples
    std::vector<double> price;
    double reward = 0.0;         // raw profit
    std::vector<double> next_state_feats;
    double sigma = 0.0;          // exploration std in effect
};

// Actor-critic price setter. Both heads are continuous, so the actor
// ascends the critic through its input gradient alone.
class LeaderAgent {
public:
    LeaderAgent(const SimConfig& cfg, Rng init_rng);

    std::vector<double> state_features(const LeaderState& s) const;

    PriceQuote select(const LeaderState& s, Rng& rng, bool explore, double sigma,
                      std::vector<double>* u_out = nullptr) const;

    void observe(LeaderTransition tr) { pending_.push_back(std::move(tr)); }
    void update(); // consumes pending transitions

    double reward_scale() const { return reward_scale_; }
    const Mlp& actor() const { return actor_; }
    Mlp& actor() { return actor_; }
    const Mlp& critic() const { return critic_; }

private:
    const SimConfig* cfg_;
    Mlp actor_;
    Mlp critic_;
    double reward_scale_ = 1.0;
    std::vector<LeaderTransition> pending_;
};

} // namespace sgdtn
