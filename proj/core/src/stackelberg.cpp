#include "sgdtn/stackelberg.hpp"

#include "sgdtn/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdtn {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

double leader_profit(std::span<const double> prices,
                     std::span<const double> freqs, double unit_cost) {
    if (prices.size() != freqs.size())
        throw std::invalid_argument("leader_profit: size mismatch");
    double profit = 0.0;
    for (size_t i = 0; i < prices.size(); ++i) {
        if (prices[i] < 0.0)
            throw std::invalid_argument("leader_profit: negative price");
        profit += prices[i] * freqs[i] - unit_cost * freqs[i];
    }
    return profit;
}

double follower_utility(double throughput_avg, double overhead, double price,
                        double cpu_freq, bool flip_price_sign) {
    const double price_term = price * cpu_freq;
    const double f2 = flip_price_sign ? overhead + price_term : overhead - price_term;
    return throughput_avg - f2;
}

LeaderAgent::LeaderAgent(const SimConfig& cfg, Rng init_rng) : cfg_(&cfg) {
    const int nm = cfg.total_followers();
    std::vector<int> adims{nm + 1};
    adims.insert(adims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    adims.push_back(nm);
    std::vector<int> cdims{2 * nm + 1};
    cdims.insert(cdims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
    cdims.push_back(1);
    Rng a = init_rng.split(1);
    Rng c = init_rng.split(2);
    actor_ = Mlp::init(adims, a);
    critic_ = Mlp::init(cdims, c);
    reward_scale_ = 1.0 / std::max(cfg.price_cap * cfg.follower_cpu_max * nm, 1e-12);
}

std::vector<double> LeaderAgent::state_features(const LeaderState& s) const {
    std::vector<double> feats;
    feats.reserve(s.follower_freqs.size() + 1);
    const double fscale = std::max(cfg_->follower_cpu_max, 1e-12);
    for (double f : s.follower_freqs) feats.push_back(f / fscale);
    feats.push_back(s.unit_cost / std::max(cfg_->price_cap, 1e-12));
    return feats;
}

PriceQuote LeaderAgent::select(const LeaderState& s, Rng& rng, bool explore,
                               double sigma, std::vector<double>* u_out) const {
    const std::vector<double> out = actor_.forward(state_features(s));
    PriceQuote quote;
    quote.price.resize(out.size());
    std::vector<double> u(out.size());
    for (size_t i = 0; i < out.size(); ++i) {
        u[i] = out[i];
        if (explore && sigma > 0.0) u[i] += sigma * rng.normal();
        quote.price[i] = sigmoid(u[i]) * cfg_->price_cap;
    }
    if (u_out) *u_out = std::move(u);
    return quote;
}

void LeaderAgent::update() {
    if (pending_.empty()) return;
    const double gamma = cfg_->gamma;
    const int nm = cfg_->total_followers();

    // Critic: one pass of TD regression with greedy next prices.
    Mlp cgrad = Mlp::zeros(critic_.dims());
    const double inv_n = 1.0 / static_cast<double>(pending_.size());
    for (const auto& tr : pending_) {
        std::vector<double> next_in = tr.next_state_feats;
        const std::vector<double> next_out = actor_.forward(tr.next_state_feats);
        for (double o : next_out) next_in.push_back(sigmoid(o));
        const double next_q = critic_.forward(next_in)[0];
        const double target = tr.reward * reward_scale_ + gamma * next_q;

        std::vector<double> in = tr.state_feats;
        for (double p : tr.price) in.push_back(p / std::max(cfg_->price_cap, 1e-12));
        Mlp::Trace trace;
        const double q = critic_.forward(in, trace)[0];
        const double dy[1] = {2.0 * (q - target) * inv_n};
        critic_.backward(trace, dy, cgrad);
    }
    clip_gradient(cgrad, 10.0);
    critic_.axpy(-cfg_->lr_critic, cgrad);

    // Actor: ascend the critic at the greedy quote.
    Mlp agrad = Mlp::zeros(actor_.dims());
    for (const auto& tr : pending_) {
        Mlp::Trace atrace;
        const std::vector<double> out = actor_.forward(tr.state_feats, atrace);
        std::vector<double> cin = tr.state_feats;
        std::vector<double> fracs(out.size());
        for (size_t i = 0; i < out.size(); ++i) {
            fracs[i] = sigmoid(out[i]);
            cin.push_back(fracs[i]);
        }
        Mlp::Trace ctrace;
        critic_.forward(cin, ctrace);
        Mlp sink = Mlp::zeros(critic_.dims());
        const double dy[1] = {1.0};
        const std::vector<double> dq_din = critic_.backward(ctrace, dy, sink);
        std::vector<double> d_out(out.size());
        for (size_t i = 0; i < out.size(); ++i) {
            const double d_frac = dq_din[tr.state_feats.size() + i];
            d_out[i] = -d_frac * fracs[i] * (1.0 - fracs[i]) * inv_n;
        }
        actor_.backward(atrace, d_out, agrad);
    }
    clip_gradient(agrad, 10.0);
    actor_.axpy(-cfg_->lr_actor, agrad);

    (void)nm;
    pending_.clear();
}

} // namespace sgdtn
