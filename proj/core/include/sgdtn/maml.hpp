// Model-agnostic meta-learning over task contexts: first-order inner/outer
// updates shared between a generic flat-parameter form (used by the
// synthetic-loss tests) and the trajectory-based form driving the actor.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sgdtn/episode.hpp"

namespace sgdtn {

// One draw from the task distribution p(Gamma): a subrange of the base
// arrival/geometry ranges and a price regime, always inside the base
// config's bounds.
struct TaskContext {
    double arrival_lo = 0.0, arrival_hi = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
    double price_scale = 1.0;

    SimConfig apply(const SimConfig& base) const;
};

std::vector<TaskContext> sample_tasks(Rng& rng, const SimConfig& cfg, int batch);

// --- Generic first-order machinery ------------------------------------

// Returns the loss gradient at the given parameters.
using GradFn = std::function<std::vector<double>(std::span<const double>)>;

std::vector<double> gradient_step(std::span<const double> w,
                                  std::span<const double> grad, double lr);

// w' after `steps` inner gradient steps (the gradient is re-evaluated at
// each step).
std::vector<double> inner_adapt_generic(std::vector<double> w, const GradFn& grad_fn,
                                        double inner_lr, int steps);

// First-order outer update: w -= outer_lr * sum_i grad_i(w_i') with each
// w_i' adapted independently.
std::vector<double> outer_update_generic(std::vector<double> w,
                                         std::span<const GradFn> task_grads,
                                         double inner_lr, int inner_steps,
                                         double outer_lr);

// --- Trajectory-based driver -------------------------------------------

struct MetaState {
    Mlp actor;
    Mlp critic;
    double inner_lr = 0.0;
    double outer_lr = 0.0;
    int inner_steps = 1;
    int traj_per_task = 4;
};

class MamlDriver {
public:
    MamlDriver(const SimConfig& cfg, uint64_t seed);

    MetaState& meta() { return meta_; }
    const MetaState& meta() const { return meta_; }

    // K exploratory episodes on the task; trajectories pooled per follower.
    std::vector<Trajectory> collect(const TaskContext& task, const Mlp& actor,
                                    int k, uint64_t stream);

    // Inner adaptation (policy gradient on the actor; TD regression on the
    // critic when wrapped). Logs collection order into event_log.
    MetaState adapt(const MetaState& from, const TaskContext& task, uint64_t stream);

    // One outer round over a fresh task batch; returns the mean
    // post-adaptation return. With inner_steps = 0 this is exactly one
    // round of plain task-mixture training.
    double outer_round();

    // Plain (non-meta) counterpart used by the bypass-equivalence check:
    // identical task batch, identical collection streams, gradient taken
    // at the unadapted parameters.
    double plain_round();

    void run(int rounds);

    double mean_return(const std::vector<Trajectory>& trajectories) const;

    // Collection bookkeeping for the split-ordering and bypass tests.
    std::vector<std::string> event_log;
    std::vector<Trajectory> last_round_trajectories;

private:
    SimConfig cfg_;
    Rng root_;
    FollowerBank scratch_bank_;
    MetaState meta_;
    int round_ = 0;
};

} // namespace sgdtn
