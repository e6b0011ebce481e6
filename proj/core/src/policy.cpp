#include "sgdtn/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sgdtn {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::vector<double> softmax(std::span<const double> logits) {
    double m = logits[0];
    for (double v : logits) m = std::max(m, v);
    std::vector<double> p(logits.size());
    double z = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - m);
        z += p[i];
    }
    for (auto& v : p) v /= z;
    return p;
}

int argmax(std::span<const double> v) {
    int best = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[static_cast<size_t>(best)]) best = static_cast<int>(i);
    return best;
}

double safe_div(double a, double b) { return b != 0.0 ? a / b : 0.0; }

constexpr double kGradClip = 10.0;

} // namespace

PolicyCodec PolicyCodec::from_config(const SimConfig& cfg) {
    PolicyCodec c;
    c.arrival_scale = std::max(cfg.arrival_hi, 1e-12);
    c.x_scale = std::max(cfg.x_hi, 1e-12);
    c.y_scale = std::max(cfg.y_hi, 1e-12);
    c.price_scale = std::max(cfg.price_cap, 1e-12);
    c.queue_scale = 10.0 * std::max(cfg.arrival_hi, 1e-12);
    c.n_channels = cfg.n_channels;
    return c;
}

std::vector<int> PolicyCodec::actor_dims(const SimConfig& cfg) const {
    std::vector<int> dims{state_dim()};
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    dims.push_back(actor_out_dim());
    return dims;
}

std::vector<int> PolicyCodec::critic_dims(const SimConfig& cfg) const {
    std::vector<int> dims{critic_in_dim()};
    dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    dims.push_back(1);
    return dims;
}

std::vector<double> PolicyCodec::state_features(const FollowerState& s) const {
    return {s.arrival / arrival_scale, s.leo_x / x_scale, s.leo_y / y_scale,
            s.price / price_scale, s.queue / queue_scale};
}

std::vector<double> PolicyCodec::action_features(const FollowerAction& a,
                                                 const ActionBox& box) const {
    std::vector<double> f(static_cast<size_t>(action_dim()), 0.0);
    f[0] = safe_div(a.cpu_freq, box.cpu_hi);
    f[1] = safe_div(a.block_size - box.block_lo, box.block_hi - box.block_lo);
    f[2] = a.offload ? 1.0 : 0.0;
    f[static_cast<size_t>(3 + a.channel)] = 1.0;
    return f;
}

FollowerAction actor_select(const Mlp& actor, const PolicyCodec& codec,
                            const FollowerState& state, const ActionBox& box,
                            Rng& rng, bool explore, const ExploreParams& ep,
                            SelectionSample* sample) {
    const std::vector<double> out = actor.forward(codec.state_features(state));
    double u_f = out[0];
    double u_b = out[1];
    const double off_logit = out[2];
    const std::span<const double> ch_logits(out.data() + 3, static_cast<size_t>(codec.n_channels));

    FollowerAction a;
    if (explore && ep.sigma > 0.0) {
        u_f += ep.sigma * rng.normal();
        u_b += ep.sigma * rng.normal();
    }
    a.cpu_freq = sigmoid(u_f) * box.cpu_hi;
    a.block_size = box.block_lo + sigmoid(u_b) * (box.block_hi - box.block_lo);

    if (explore) {
        const double p_off = (1.0 - ep.eps) * sigmoid(off_logit) + 0.5 * ep.eps;
        a.offload = rng.bernoulli(p_off);
        const std::vector<double> p = softmax(ch_logits);
        const double u = rng.uniform();
        double acc = 0.0;
        a.channel = codec.n_channels - 1;
        for (int k = 0; k < codec.n_channels; ++k) {
            acc += (1.0 - ep.eps) * p[static_cast<size_t>(k)] + ep.eps / codec.n_channels;
            if (u < acc) {
                a.channel = k;
                break;
            }
        }
    } else {
        a.offload = off_logit > 0.0;
        a.channel = argmax(ch_logits);
    }

    if (sample) {
        sample->u_f = u_f;
        sample->u_b = u_b;
    }
    return a;
}

double critic_value(const Mlp& critic, const PolicyCodec& codec,
                    const FollowerState& state, const FollowerAction& action,
                    const ActionBox& box) {
    std::vector<double> input = codec.state_features(state);
    const std::vector<double> af = codec.action_features(action, box);
    input.insert(input.end(), af.begin(), af.end());
    return critic.forward(input)[0];
}

double critic_loss(const Mlp& critic, std::span<const CriticSample> samples) {
    if (samples.empty()) throw std::invalid_argument("critic_loss: empty batch");
    double loss = 0.0;
    for (const auto& s : samples) {
        const double err = critic.forward(s.input)[0] - s.target;
        loss += err * err;
    }
    return loss / static_cast<double>(samples.size());
}

double critic_loss_grad(const Mlp& critic, std::span<const CriticSample> samples,
                        Mlp& grad) {
    if (samples.empty()) throw std::invalid_argument("critic_loss_grad: empty batch");
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (const auto& s : samples) {
        Mlp::Trace trace;
        const double q = critic.forward(s.input, trace)[0];
        const double err = q - s.target;
        loss += err * err;
        const double dy[1] = {2.0 * err * inv_n};
        critic.backward(trace, dy, grad);
    }
    return loss * inv_n;
}

std::vector<CriticSample> make_td_samples(const Mlp& critic, const Mlp& actor,
                                          const PolicyCodec& codec,
                                          std::span<const Transition> batch,
                                          double gamma, double reward_scale) {
    std::vector<CriticSample> samples;
    samples.reserve(batch.size());
    Rng dummy(0); // greedy selection consumes no randomness
    for (const auto& tr : batch) {
        CriticSample s;
        s.input = codec.state_features(tr.state);
        const std::vector<double> af = codec.action_features(tr.action, tr.box);
        s.input.insert(s.input.end(), af.begin(), af.end());

        const FollowerAction next_a =
            actor_select(actor, codec, tr.next_state, tr.next_box, dummy, false, {});
        const double next_q =
            critic_value(critic, codec, tr.next_state, next_a, tr.next_box);
        s.target = tr.reward * reward_scale + gamma * next_q;
        samples.push_back(std::move(s));
    }
    return samples;
}

double critic_update(Mlp& critic, const Mlp& actor, const PolicyCodec& codec,
                     std::span<const Transition> batch, double gamma,
                     double reward_scale, double lr) {
    const auto samples = make_td_samples(critic, actor, codec, batch, gamma, reward_scale);
    Mlp grad = Mlp::zeros(critic.dims());
    const double loss = critic_loss_grad(critic, samples, grad);
    clip_gradient(grad, kGradClip);
    critic.axpy(-lr, grad);
    return loss;
}

namespace {

// Gradient of log pi(channel | logits) under the eps-mixed softmax.
void channel_logprob_grad(std::span<const double> logits, int chosen, double eps,
                          double weight, std::span<double> out_grad, double* logprob) {
    const std::vector<double> p = softmax(logits);
    const int r = static_cast<int>(logits.size());
    const double pi = (1.0 - eps) * p[static_cast<size_t>(chosen)] + eps / r;
    if (logprob) *logprob += std::log(pi);
    const double coef = weight * (1.0 - eps) * p[static_cast<size_t>(chosen)] / pi;
    for (int k = 0; k < r; ++k) {
        const double delta = (k == chosen) ? 1.0 : 0.0;
        out_grad[static_cast<size_t>(k)] += coef * (delta - p[static_cast<size_t>(k)]);
    }
}

// Gradient of log pi(offload | logit) under the eps-mixed Bernoulli.
double offload_logprob_grad(double logit, bool chosen, double eps, double* logprob) {
    const double s = sigmoid(logit);
    const double p1 = (1.0 - eps) * s + 0.5 * eps;
    const double pi = chosen ? p1 : 1.0 - p1;
    if (logprob) *logprob += std::log(pi);
    const double ds = (1.0 - eps) * s * (1.0 - s);
    return (chosen ? ds / pi : -ds / pi);
}

} // namespace

double actor_loss(const Mlp& actor, const Mlp& critic, const PolicyCodec& codec,
                  std::span<const Transition> batch, double reward_scale) {
    if (batch.empty()) throw std::invalid_argument("actor_loss: empty batch");
    double loss = 0.0;
    for (const auto& tr : batch) {
        const std::vector<double> sfeats = codec.state_features(tr.state);
        const std::vector<double> out = actor.forward(sfeats);
        const std::span<const double> ch_logits(out.data() + 3,
                                                static_cast<size_t>(codec.n_channels));

        // Deterministic-head term: critic value of the greedy action.
        FollowerAction greedy;
        greedy.cpu_freq = sigmoid(out[0]) * tr.box.cpu_hi;
        greedy.block_size = tr.box.block_lo + sigmoid(out[1]) * (tr.box.block_hi - tr.box.block_lo);
        greedy.offload = out[2] > 0.0;
        greedy.channel = argmax(ch_logits);
        const double q_greedy = critic_value(critic, codec, tr.state, greedy, tr.box);

        // Likelihood-ratio term for the logged discrete picks.
        const double q_logged = critic_value(critic, codec, tr.state, tr.action, tr.box);
        double logprob = 0.0;
        offload_logprob_grad(out[2], tr.action.offload, tr.explore.eps, &logprob);
        std::vector<double> scratch(static_cast<size_t>(codec.n_channels), 0.0);
        channel_logprob_grad(ch_logits, tr.action.channel, tr.explore.eps, 0.0,
                             scratch, &logprob);

        loss += -q_greedy - logprob * q_logged;
    }
    (void)reward_scale;
    return loss / static_cast<double>(batch.size());
}

double actor_loss_grad(const Mlp& actor, const Mlp& critic, const PolicyCodec& codec,
                       std::span<const Transition> batch, double reward_scale,
                       Mlp& grad) {
    if (batch.empty()) throw std::invalid_argument("actor_loss_grad: empty batch");
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    for (const auto& tr : batch) {
        const std::vector<double> sfeats = codec.state_features(tr.state);
        Mlp::Trace atrace;
        const std::vector<double> out = actor.forward(sfeats, atrace);
        const std::span<const double> ch_logits(out.data() + 3,
                                                static_cast<size_t>(codec.n_channels));
        std::vector<double> d_out(out.size(), 0.0);

        // d(-Q)/d(u_f, u_b) through the critic's input gradient.
        const double frac_f = sigmoid(out[0]);
        const double frac_b = sigmoid(out[1]);
        FollowerAction greedy;
        greedy.cpu_freq = frac_f * tr.box.cpu_hi;
        greedy.block_size = tr.box.block_lo + frac_b * (tr.box.block_hi - tr.box.block_lo);
        greedy.offload = out[2] > 0.0;
        greedy.channel = argmax(ch_logits);

        std::vector<double> cin = sfeats;
        const std::vector<double> af = codec.action_features(greedy, tr.box);
        cin.insert(cin.end(), af.begin(), af.end());
        Mlp::Trace ctrace;
        const double q_greedy = critic.forward(cin, ctrace)[0];
        Mlp cgrad_sink = Mlp::zeros(critic.dims());
        const double dy[1] = {1.0};
        const std::vector<double> dq_din = critic.backward(ctrace, dy, cgrad_sink);
        const size_t sdim = static_cast<size_t>(codec.state_dim());
        d_out[0] += -dq_din[sdim + 0] * frac_f * (1.0 - frac_f);
        d_out[1] += -dq_din[sdim + 1] * frac_b * (1.0 - frac_b);

        // Likelihood-ratio term, weighted by the critic value of the
        // logged action.
        const double q_logged = critic_value(critic, codec, tr.state, tr.action, tr.box);
        double logprob = 0.0;
        d_out[2] += -q_logged *
            offload_logprob_grad(out[2], tr.action.offload, tr.explore.eps, &logprob);
        channel_logprob_grad(ch_logits, tr.action.channel, tr.explore.eps, -q_logged,
                             std::span<double>(d_out.data() + 3,
                                               static_cast<size_t>(codec.n_channels)),
                             &logprob);

        loss += -q_greedy - logprob * q_logged;
        for (auto& g : d_out) g *= inv_n;
        actor.backward(atrace, d_out, grad);
    }
    (void)reward_scale;
    return loss * inv_n;
}

double actor_update(Mlp& actor, const Mlp& critic, const PolicyCodec& codec,
                    std::span<const Transition> batch, double reward_scale,
                    double lr) {
    Mlp grad = Mlp::zeros(actor.dims());
    const double loss = actor_loss_grad(actor, critic, codec, batch, reward_scale, grad);
    clip_gradient(grad, kGradClip);
    actor.axpy(-lr, grad);
    return loss;
}

double trajectory_logprob(const Mlp& actor, const PolicyCodec& codec,
                          const Trajectory& traj) {
    double total = 0.0;
    for (const auto& tr : traj) {
        const std::vector<double> out = actor.forward(codec.state_features(tr.state));
        if (tr.explore.sigma > 0.0) {
            const double s2 = tr.explore.sigma * tr.explore.sigma;
            const double df = tr.sample.u_f - out[0];
            const double db = tr.sample.u_b - out[1];
            total += -0.5 * (df * df + db * db) / s2;
        }
        double logprob = 0.0;
        offload_logprob_grad(out[2], tr.action.offload, tr.explore.eps, &logprob);
        std::vector<double> scratch(static_cast<size_t>(codec.n_channels), 0.0);
        channel_logprob_grad(std::span<const double>(out.data() + 3,
                                                     static_cast<size_t>(codec.n_channels)),
                             tr.action.channel, tr.explore.eps, 0.0, scratch, &logprob);
        total += logprob;
    }
    return total;
}

void trajectory_logprob_grad(const Mlp& actor, const PolicyCodec& codec,
                             const Trajectory& traj, double weight, Mlp& grad) {
    for (const auto& tr : traj) {
        Mlp::Trace trace;
        const std::vector<double> out = actor.forward(codec.state_features(tr.state), trace);
        std::vector<double> d_out(out.size(), 0.0);
        if (tr.explore.sigma > 0.0) {
            const double s2 = tr.explore.sigma * tr.explore.sigma;
            d_out[0] = weight * (tr.sample.u_f - out[0]) / s2;
            d_out[1] = weight * (tr.sample.u_b - out[1]) / s2;
        }
        d_out[2] = weight * offload_logprob_grad(out[2], tr.action.offload,
                                                 tr.explore.eps, nullptr);
        channel_logprob_grad(std::span<const double>(out.data() + 3,
                                                     static_cast<size_t>(codec.n_channels)),
                             tr.action.channel, tr.explore.eps, weight,
                             std::span<double>(d_out.data() + 3,
                                               static_cast<size_t>(codec.n_channels)),
                             nullptr);
        actor.backward(trace, d_out, grad);
    }
}

double reinforce_loss_grad(const Mlp& actor, const PolicyCodec& codec,
                           std::span<const Trajectory> trajectories,
                           double reward_scale, Mlp& grad) {
    if (trajectories.empty())
        throw std::invalid_argument("reinforce_loss_grad: no trajectories");
    std::vector<double> returns;
    returns.reserve(trajectories.size());
    double mean_raw = 0.0;
    for (const auto& traj : trajectories) {
        double g = 0.0;
        for (const auto& tr : traj) g += tr.reward;
        returns.push_back(g * reward_scale);
        mean_raw += g;
    }
    mean_raw /= static_cast<double>(trajectories.size());
    // The batch-mean baseline zeroes the estimate for K = 1, so skip it there.
    const double baseline = trajectories.size() > 1
        ? std::accumulate(returns.begin(), returns.end(), 0.0) /
              static_cast<double>(returns.size())
        : 0.0;
    const double inv_k = 1.0 / static_cast<double>(trajectories.size());
    for (size_t i = 0; i < trajectories.size(); ++i) {
        // Loss is the negative expected return, so the log-prob weight is
        // -(G - b)/K.
        trajectory_logprob_grad(actor, codec, trajectories[i],
                                -(returns[i] - baseline) * inv_k, grad);
    }
    return mean_raw;
}

void clip_gradient(Mlp& grad, double max_norm) {
    const std::vector<double> flat = grad.flatten();
    double norm2 = 0.0;
    for (double v : flat) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (norm > max_norm && norm > 0.0) grad.scale(max_norm / norm);
}

} // namespace sgdtn
