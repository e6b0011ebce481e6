// Per-follower actor-critic machinery: feature encoding, constrained action
// selection, TD critic regression, and the actor update (deterministic
// gradient through the critic for the continuous heads, likelihood-ratio
// for the discrete ones). All gradients are analytic and finite-difference
// checkable.
#pragma once

#include <span>
#include <vector>

#include "sgdtn/action.hpp"
#include "sgdtn/config.hpp"
#include "sgdtn/mlp.hpp"
#include "sgdtn/rng.hpp"

namespace sgdtn {

// Fixed input/output encoding shared by actors and critics.
struct PolicyCodec {
    double arrival_scale = 1.0;
    double x_scale = 1.0;
    double y_scale = 1.0;
    double price_scale = 1.0;
    double queue_scale = 1.0;
    int n_channels = 1;

    static PolicyCodec from_config(const SimConfig& cfg);

    int state_dim() const { return 5; }
    int action_dim() const { return 3 + n_channels; } // f_frac, block_frac, offload, one-hot channel
    int actor_out_dim() const { return 3 + n_channels; } // u_f, u_b, offload logit, channel logits
    int critic_in_dim() const { return state_dim() + action_dim(); }

    std::vector<int> actor_dims(const SimConfig& cfg) const;
    std::vector<int> critic_dims(const SimConfig& cfg) const;

    std::vector<double> state_features(const FollowerState& s) const;
    std::vector<double> action_features(const FollowerAction& a, const ActionBox& box) const;
};

struct ExploreParams {
    double eps = 0.0;   // discrete-head mixing weight
    double sigma = 0.0; // pre-squash Gaussian std for continuous heads
};

// Pre-squash continuous samples, kept so the sampling log-density stays
// exactly recomputable.
struct SelectionSample {
    double u_f = 0.0;
    double u_b = 0.0;
};

// Constrained action selection. Exploration samples the discrete heads from
// the eps-mixed distributions and perturbs the continuous heads pre-squash;
// explore off means argmax / mean. The result always lies in `box`.
FollowerAction actor_select(const Mlp& actor, const PolicyCodec& codec,
                            const FollowerState& state, const ActionBox& box,
                            Rng& rng, bool explore, const ExploreParams& ep,
                            SelectionSample* sample = nullptr);

double critic_value(const Mlp& critic, const PolicyCodec& codec,
                    const FollowerState& state, const FollowerAction& action,
                    const ActionBox& box);

// One logged step. Carries the feasibility boxes (features depend on them),
// the raw reward, the primitives it was computed from, and the exploration
// parameters in effect when the action was sampled.
struct Transition {
    FollowerState state;
    FollowerAction action;
    ActionBox box;
    double reward = 0.0; // raw instant-reward summand
    FollowerState next_state;
    ActionBox next_box;
    // Logged primitives (reward must be recomputable from these).
    double served = 0.0;
    double overhead = 0.0;
    ExploreParams explore;
    SelectionSample sample;
};

// --- Critic -----------------------------------------------------------

struct CriticSample {
    std::vector<double> input; // state features ++ action features
    double target = 0.0;       // fixed TD target, scaled-reward units
};

// Mean squared error against fixed targets (pure; finite-difference safe).
double critic_loss(const Mlp& critic, std::span<const CriticSample> samples);
double critic_loss_grad(const Mlp& critic, std::span<const CriticSample> samples,
                        Mlp& grad);

// TD targets r + gamma * Q(s', a') with a' the current actor's greedy
// action at the next state.
std::vector<CriticSample> make_td_samples(const Mlp& critic, const Mlp& actor,
                                          const PolicyCodec& codec,
                                          std::span<const Transition> batch,
                                          double gamma, double reward_scale);

// One clipped SGD step on the TD loss; returns the pre-step loss.
double critic_update(Mlp& critic, const Mlp& actor, const PolicyCodec& codec,
                     std::span<const Transition> batch, double gamma,
                     double reward_scale, double lr);

// --- Actor ------------------------------------------------------------

// Surrogate the actor descends: -Q(s, a_greedy(theta)) for the continuous
// heads plus -log pi_theta(a_logged) * Q(s, a_logged) for the discrete ones.
double actor_loss(const Mlp& actor, const Mlp& critic, const PolicyCodec& codec,
                  std::span<const Transition> batch, double reward_scale);
double actor_loss_grad(const Mlp& actor, const Mlp& critic, const PolicyCodec& codec,
                       std::span<const Transition> batch, double reward_scale,
                       Mlp& grad);
double actor_update(Mlp& actor, const Mlp& critic, const PolicyCodec& codec,
                    std::span<const Transition> batch, double reward_scale,
                    double lr);

// --- Trajectory-level likelihood-ratio gradient (REINFORCE) ------------

using Trajectory = std::vector<Transition>;

// Log-likelihood of the logged stochastic selections under `actor`
// (pure in the parameters; finite-difference safe).
double trajectory_logprob(const Mlp& actor, const PolicyCodec& codec,
                          const Trajectory& traj);
void trajectory_logprob_grad(const Mlp& actor, const PolicyCodec& codec,
                             const Trajectory& traj, double weight, Mlp& grad);

// Gradient of the negative mean return over K trajectories (REINFORCE with
// the batch-mean baseline). Returns the mean raw return; `grad` receives
// the loss gradient in scaled-reward units.
double reinforce_loss_grad(const Mlp& actor, const PolicyCodec& codec,
                           std::span<const Trajectory> trajectories,
                           double reward_scale, Mlp& grad);

// Utility shared by the update steps: clip to a global L2 norm.
void clip_gradient(Mlp& grad, double max_norm);

} // namespace sgdtn
