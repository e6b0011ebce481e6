#include "sgdtn/maml.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgdtn {

namespace {

uint64_t mix_tag(uint64_t a, uint64_t b, uint64_t c) {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ a;
    h = (h ^ (b + 0x2545f4914f6cdd1dULL)) * 0xff51afd7ed558ccdULL;
    h = (h ^ (c + 0x6a09e667f3bcc909ULL)) * 0xc4ceb9fe1a85ec53ULL;
    return h ^ (h >> 33);
}

// Random subrange of [lo, hi] whose width shrinks by at most `jitter`.
void subrange(Rng& rng, double lo, double hi, double jitter, double& out_lo,
              double& out_hi) {
    const double width = hi - lo;
    const double scale = 1.0 - jitter * rng.uniform();
    const double new_width = width * scale;
    const double offset = (width - new_width) * rng.uniform();
    out_lo = lo + offset;
    out_hi = out_lo + new_width;
}

} // namespace

SimConfig TaskContext::apply(const SimConfig& base) const {
    SimConfig cfg = base;
    cfg.arrival_lo = arrival_lo;
    cfg.arrival_hi = arrival_hi;
    cfg.x_lo = x_lo;
    cfg.x_hi = x_hi;
    cfg.y_lo = y_lo;
    cfg.y_hi = y_hi;
    cfg.baseline_price = std::min(base.baseline_price * price_scale, base.price_cap);
    return cfg;
}

std::vector<TaskContext> sample_tasks(Rng& rng, const SimConfig& cfg, int batch) {
    if (batch < 1) throw std::invalid_argument("sample_tasks: batch must be >= 1");
    std::vector<TaskContext> tasks;
    tasks.reserve(static_cast<size_t>(batch));
    for (int i = 0; i < batch; ++i) {
        TaskContext t;
        subrange(rng, cfg.arrival_lo, cfg.arrival_hi, cfg.maml_arrival_jitter,
                 t.arrival_lo, t.arrival_hi);
        subrange(rng, cfg.x_lo, cfg.x_hi, cfg.maml_geom_jitter, t.x_lo, t.x_hi);
        subrange(rng, cfg.y_lo, cfg.y_hi, cfg.maml_geom_jitter, t.y_lo, t.y_hi);
        t.price_scale = 1.0 + cfg.maml_price_jitter * (2.0 * rng.uniform() - 1.0);
        tasks.push_back(t);
    }
    return tasks;
}

std::vector<double> gradient_step(std::span<const double> w,
                                  std::span<const double> grad, double lr) {
    if (w.size() != grad.size()) throw std::invalid_argument("gradient_step: size mismatch");
    std::vector<double> out(w.begin(), w.end());
    for (size_t i = 0; i < out.size(); ++i) out[i] -= lr * grad[i];
    return out;
}

std::vector<double> inner_adapt_generic(std::vector<double> w, const GradFn& grad_fn,
                                        double inner_lr, int steps) {
    for (int s = 0; s < steps; ++s) {
        const std::vector<double> g = grad_fn(w);
        w = gradient_step(w, g, inner_lr);
    }
    return w;
}

std::vector<double> outer_update_generic(std::vector<double> w,
                                         std::span<const GradFn> task_grads,
                                         double inner_lr, int inner_steps,
                                         double outer_lr) {
    if (task_grads.empty())
        throw std::invalid_argument("outer_update_generic: no tasks");
    std::vector<double> total(w.size(), 0.0);
    for (const auto& grad_fn : task_grads) {
        const std::vector<double> adapted =
            inner_adapt_generic(w, grad_fn, inner_lr, inner_steps);
        const std::vector<double> g = grad_fn(adapted);
        for (size_t i = 0; i < total.size(); ++i) total[i] += g[i];
    }
    return gradient_step(w, total, outer_lr);
}

MamlDriver::MamlDriver(const SimConfig& cfg, uint64_t seed)
    : cfg_(cfg), root_(Rng(seed).split(0x4d414dULL)) {
    Rng bank_rng = root_.split(1);
    scratch_bank_ = FollowerBank::init(cfg_, bank_rng);
    meta_.actor = scratch_bank_.actors[0];
    meta_.critic = scratch_bank_.critics[0];
    meta_.inner_lr = cfg.maml_inner_lr;
    meta_.outer_lr = cfg.maml_outer_lr;
    meta_.inner_steps = cfg.maml_inner_steps;
    meta_.traj_per_task = cfg.maml_traj_per_task;
}

std::vector<Trajectory> MamlDriver::collect(const TaskContext& task, const Mlp& actor,
                                            int k, uint64_t stream) {
    const SimConfig task_cfg = task.apply(cfg_);
    std::vector<Trajectory> out;
    for (int i = 0; i < k; ++i) {
        EpisodeOptions opts;
        opts.explore = true;
        opts.explore_params = {cfg_.explore_eps0, cfg_.explore_sigma0};
        opts.shared_actor = &actor;
        const uint64_t tag = mix_tag(stream, static_cast<uint64_t>(i), 0x7261);
        EpisodeResult res = run_episode(task_cfg, PolicyKind::Madfrl, &scratch_bank_,
                                        nullptr, root_.split(tag), opts);
        for (auto& traj : res.transitions) out.push_back(std::move(traj));
    }
    event_log.push_back("collect stream=" + std::to_string(stream));
    return out;
}

MetaState MamlDriver::adapt(const MetaState& from, const TaskContext& task,
                            uint64_t stream) {
    MetaState adapted = from;
    const bool wrap_actor = cfg_.maml_wrap == "actor" || cfg_.maml_wrap == "both";
    const bool wrap_critic = cfg_.maml_wrap == "critic" || cfg_.maml_wrap == "both";
    const double scale = cfg_.effective_reward_scale();

    for (int step = 0; step < from.inner_steps; ++step) {
        const uint64_t tag = mix_tag(stream, static_cast<uint64_t>(step), 0x696e );
        const std::vector<Trajectory> rollouts =
            collect(task, adapted.actor, from.traj_per_task, tag);
        event_log.push_back("adapt stream=" + std::to_string(stream) +
                            " step=" + std::to_string(step));
        if (wrap_actor) {
            Mlp grad = Mlp::zeros(adapted.actor.dims());
            reinforce_loss_grad(adapted.actor, scratch_bank_.codec, rollouts, scale, grad);
            clip_gradient(grad, 10.0);
            adapted.actor.axpy(-from.inner_lr, grad);
        }
        if (wrap_critic) {
            std::vector<Transition> pooled;
            for (const auto& traj : rollouts)
                pooled.insert(pooled.end(), traj.begin(), traj.end());
            if (!pooled.empty())
                critic_update(adapted.critic, adapted.actor, scratch_bank_.codec, pooled,
                              cfg_.gamma, scale, from.inner_lr);
        }
    }
    return adapted;
}

double MamlDriver::outer_round() {
    Rng task_rng = root_.split(mix_tag(0x7461, static_cast<uint64_t>(round_), 0));
    const std::vector<TaskContext> tasks =
        sample_tasks(task_rng, cfg_, cfg_.maml_task_batch);
    const double scale = cfg_.effective_reward_scale();
    const bool wrap_actor = cfg_.maml_wrap == "actor" || cfg_.maml_wrap == "both";
    const bool wrap_critic = cfg_.maml_wrap == "critic" || cfg_.maml_wrap == "both";

    Mlp actor_grad = Mlp::zeros(meta_.actor.dims());
    Mlp critic_accum = meta_.critic;
    double post_return = 0.0;
    last_round_trajectories.clear();

    for (size_t ti = 0; ti < tasks.size(); ++ti) {
        const uint64_t stream = mix_tag(static_cast<uint64_t>(round_), ti, 0x7473);
        const MetaState adapted = adapt(meta_, tasks[ti], stream);
        const std::vector<Trajectory> test_rollouts = collect(
            tasks[ti], adapted.actor, meta_.traj_per_task, mix_tag(stream, 0x6f75, 0));
        event_log.push_back("test stream=" + std::to_string(stream));
        for (const auto& traj : test_rollouts) last_round_trajectories.push_back(traj);

        if (wrap_actor) {
            Mlp g = Mlp::zeros(meta_.actor.dims());
            post_return += reinforce_loss_grad(adapted.actor, scratch_bank_.codec,
                                               test_rollouts, scale, g);
            actor_grad.axpy(1.0, g);
        } else {
            post_return += mean_return(test_rollouts);
        }
        if (wrap_critic) {
            std::vector<Transition> pooled;
            for (const auto& traj : test_rollouts)
                pooled.insert(pooled.end(), traj.begin(), traj.end());
            if (!pooled.empty())
                critic_update(critic_accum, adapted.actor, scratch_bank_.codec, pooled,
                              cfg_.gamma, scale, meta_.outer_lr);
        }
    }
    if (wrap_actor) {
        clip_gradient(actor_grad, 10.0);
        meta_.actor.axpy(-meta_.outer_lr, actor_grad);
    }
    if (wrap_critic) meta_.critic = critic_accum;
    ++round_;
    return post_return / static_cast<double>(tasks.size());
}

double MamlDriver::plain_round() {
    Rng task_rng = root_.split(mix_tag(0x7461, static_cast<uint64_t>(round_), 0));
    const std::vector<TaskContext> tasks =
        sample_tasks(task_rng, cfg_, cfg_.maml_task_batch);
    const double scale = cfg_.effective_reward_scale();

    Mlp actor_grad = Mlp::zeros(meta_.actor.dims());
    double mean_ret = 0.0;
    last_round_trajectories.clear();

    for (size_t ti = 0; ti < tasks.size(); ++ti) {
        const uint64_t stream = mix_tag(static_cast<uint64_t>(round_), ti, 0x7473);
        const std::vector<Trajectory> rollouts = collect(
            tasks[ti], meta_.actor, meta_.traj_per_task, mix_tag(stream, 0x6f75, 0));
        event_log.push_back("test stream=" + std::to_string(stream));
        for (const auto& traj : rollouts) last_round_trajectories.push_back(traj);
        Mlp g = Mlp::zeros(meta_.actor.dims());
        mean_ret += reinforce_loss_grad(meta_.actor, scratch_bank_.codec, rollouts, scale, g);
        actor_grad.axpy(1.0, g);
    }
    clip_gradient(actor_grad, 10.0);
    meta_.actor.axpy(-meta_.outer_lr, actor_grad);
    ++round_;
    return mean_ret / static_cast<double>(tasks.size());
}

void MamlDriver::run(int rounds) {
    for (int i = 0; i < rounds; ++i) outer_round();
}

double MamlDriver::mean_return(const std::vector<Trajectory>& trajectories) const {
    if (trajectories.empty()) return 0.0;
    double total = 0.0;
    for (const auto& traj : trajectories)
        for (const auto& tr : traj) total += tr.reward;
    return total / static_cast<double>(trajectories.size());
}

} // namespace sgdtn
