#include "sgdtn/episode.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdtn {

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::Madfrl: return "madfrl";
        case PolicyKind::Marto: return "marto";
        case PolicyKind::Magcs: return "magcs";
        case PolicyKind::Mamcc: return "mamcc";
        case PolicyKind::OracleDpp: return "oracle";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy(const std::string& name) {
    if (name == "madfrl") return PolicyKind::Madfrl;
    if (name == "marto") return PolicyKind::Marto;
    if (name == "magcs") return PolicyKind::Magcs;
    if (name == "mamcc") return PolicyKind::Mamcc;
    if (name == "oracle") return PolicyKind::OracleDpp;
    return std::nullopt;
}

FollowerBank FollowerBank::init(const SimConfig& cfg, Rng rng) {
    FollowerBank bank;
    bank.codec = PolicyCodec::from_config(cfg);
    const std::vector<int> adims = bank.codec.actor_dims(cfg);
    const std::vector<int> cdims = bank.codec.critic_dims(cfg);
    // All actors share one initialization (the federation global model);
    // critics are per-follower.
    Rng actor_rng = rng.split(1);
    const Mlp actor0 = Mlp::init(adims, actor_rng);
    for (int g = 0; g < cfg.total_followers(); ++g) {
        bank.actors.push_back(actor0);
        Rng critic_rng = rng.split(0x1000 + static_cast<uint64_t>(g));
        bank.critics.push_back(Mlp::init(cdims, critic_rng));
    }
    return bank;
}

namespace {

struct PendingFollower {
    FollowerState state;
    FollowerAction action;
    ActionBox box;
    double reward = 0.0;
    double served = 0.0;
    double overhead = 0.0;
    ExploreParams explore;
    SelectionSample sample;
};

struct PendingLeader {
    std::vector<double> state_feats;
    std::vector<double> u;
    std::vector<double> price;
    double reward = 0.0;
};

OracleContext make_oracle_context(const SimConfig& cfg, const FollowerSlot& fs,
                                  int g, double queue, double price,
                                  const ActionBox& box,
                                  const std::vector<double>& i_intended,
                                  const std::vector<double>& i_final,
                                  const std::vector<FollowerAction>& peers) {
    OracleContext ctx;
    const int m_per = cfg.followers_per_mbs;
    ctx.mbs = g / m_per;
    ctx.queue = queue;
    ctx.price = price;
    ctx.loss_db = fs.loss_db;
    ctx.cycles_per_bit = fs.cycles_per_bit;
    ctx.box = box;
    const int r_ch = cfg.n_channels;
    ctx.i_intended.assign(static_cast<size_t>(r_ch), 0.0);
    ctx.i_final.assign(static_cast<size_t>(r_ch), 0.0);
    if (!i_intended.empty()) {
        for (int r = 0; r < r_ch; ++r) {
            ctx.i_intended[static_cast<size_t>(r)] = i_intended[static_cast<size_t>(ctx.mbs) * r_ch + r];
            ctx.i_final[static_cast<size_t>(r)] = i_final[static_cast<size_t>(ctx.mbs) * r_ch + r];
        }
    }
    if (!peers.empty()) {
        for (int m = 0; m < m_per; ++m) {
            const int peer = ctx.mbs * m_per + m;
            if (peer == g) continue;
            const double f = peers[static_cast<size_t>(peer)].cpu_freq;
            if (f > 0.0) ctx.peer_freqs.push_back(f);
        }
    }
    return ctx;
}

} // namespace

EpisodeResult run_episode(const SimConfig& cfg, PolicyKind kind,
                          FollowerBank* bank, LeaderAgent* leader,
                          Rng episode_rng, const EpisodeOptions& opts) {
    if (kind == PolicyKind::Madfrl && bank == nullptr)
        throw std::invalid_argument("run_episode: madfrl needs a follower bank");
    if (opts.learn && opts.shared_actor)
        throw std::invalid_argument("run_episode: cannot learn through a shared actor override");

    const int slots = opts.slots > 0 ? opts.slots : cfg.episode_slots;
    const int total = cfg.total_followers();
    const int m_per = cfg.followers_per_mbs;
    const double reward_scale = cfg.effective_reward_scale();

    Environment env(cfg, episode_rng.split(1));
    QueueState queues(total);
    Rng leader_rng = episode_rng.split(2);
    std::vector<Rng> act_rng;
    act_rng.reserve(static_cast<size_t>(total));
    for (int g = 0; g < total; ++g)
        act_rng.push_back(episode_rng.split(0x100 + static_cast<uint64_t>(g)));

    EpisodeResult result;
    result.transitions.resize(static_cast<size_t>(total));

    std::vector<double> prev_freqs(static_cast<size_t>(total), 0.0);
    std::vector<double> prev_i_intended;
    std::vector<double> prev_i_final;
    std::vector<FollowerAction> prev_actions;

    std::vector<PendingFollower> pending;
    bool has_pending = false;
    PendingLeader leader_pending;
    bool has_leader_pending = false;

    double critic_value_sum = 0.0;
    long long critic_value_count = 0;
    double served_sum = 0.0;

    const PolicyCodec* codec = bank ? &bank->codec : nullptr;

    auto complete_transitions = [&](const std::vector<FollowerState>& next_states,
                                    const std::vector<ActionBox>& next_boxes,
                                    const std::vector<double>& leader_next_feats) {
        if (has_pending) {
            for (int g = 0; g < total; ++g) {
                Transition tr;
                tr.state = pending[static_cast<size_t>(g)].state;
                tr.action = pending[static_cast<size_t>(g)].action;
                tr.box = pending[static_cast<size_t>(g)].box;
                tr.reward = pending[static_cast<size_t>(g)].reward;
                tr.served = pending[static_cast<size_t>(g)].served;
                tr.overhead = pending[static_cast<size_t>(g)].overhead;
                tr.explore = pending[static_cast<size_t>(g)].explore;
                tr.sample = pending[static_cast<size_t>(g)].sample;
                tr.next_state = next_states[static_cast<size_t>(g)];
                tr.next_box = next_boxes[static_cast<size_t>(g)];
                result.transitions[static_cast<size_t>(g)].push_back(tr);

                if (opts.learn && kind == PolicyKind::Madfrl) {
                    const std::span<const Transition> batch(&result.transitions[static_cast<size_t>(g)].back(), 1);
                    critic_update(bank->critics[static_cast<size_t>(g)], bank->actors[static_cast<size_t>(g)],
                                  *codec, batch, cfg.gamma, reward_scale, cfg.lr_critic);
                    actor_update(bank->actors[static_cast<size_t>(g)], bank->critics[static_cast<size_t>(g)],
                                 *codec, batch, reward_scale, cfg.lr_actor);
                    Rng greedy_rng(0);
                    const FollowerAction greedy =
                        actor_select(bank->actors[static_cast<size_t>(g)], *codec, tr.state, tr.box,
                                     greedy_rng, false, {});
                    critic_value_sum += critic_value(bank->critics[static_cast<size_t>(g)], *codec,
                                                     tr.state, greedy, tr.box);
                    ++critic_value_count;
                }
            }
        }
        if (has_leader_pending && opts.learn && kind == PolicyKind::Madfrl && leader) {
            LeaderTransition lt;
            lt.state_feats = leader_pending.state_feats;
            lt.u = leader_pending.u;
            lt.price.resize(leader_pending.price.size());
            const double cap = std::max(cfg.price_cap, 1e-12);
            for (size_t i = 0; i < leader_pending.price.size(); ++i)
                lt.price[i] = leader_pending.price[i] / cap;
            lt.reward = leader_pending.reward;
            lt.next_state_feats = leader_next_feats;
            lt.sigma = opts.explore_params.sigma;
            leader->observe(std::move(lt));
            leader->update();
        }
    };

    std::vector<FollowerState> states(static_cast<size_t>(total));
    std::vector<ActionBox> boxes(static_cast<size_t>(total));
    std::vector<FollowerAction> actions(static_cast<size_t>(total));
    std::vector<SelectionSample> samples(static_cast<size_t>(total));

    for (int t = 0; t < slots; ++t) {
        const SlotContext ctx = env.begin_slot();

        // Stackelberg ordering: the leader quotes first, from the previous
        // slot's observed frequencies.
        LeaderState lstate{prev_freqs, cfg.unit_energy_cost};
        std::vector<double> prices(static_cast<size_t>(total), cfg.baseline_price);
        std::vector<double> u_lead;
        std::vector<double> lfeats;
        if (kind == PolicyKind::Madfrl && leader) {
            lfeats = leader->state_features(lstate);
            const PriceQuote quote =
                leader->select(lstate, leader_rng, opts.explore, opts.explore_params.sigma, &u_lead);
            prices = quote.price;
        }

        for (int g = 0; g < total; ++g) {
            const FollowerSlot& fs = ctx.followers[static_cast<size_t>(g)];
            boxes[static_cast<size_t>(g)] = env.action_box(fs, queues.backlog[static_cast<size_t>(g)]);
            states[static_cast<size_t>(g)] =
                env.observe(fs, queues.backlog[static_cast<size_t>(g)], prices[static_cast<size_t>(g)]);
            samples[static_cast<size_t>(g)] = {};
            switch (kind) {
                case PolicyKind::Madfrl: {
                    const Mlp& actor = opts.shared_actor ? *opts.shared_actor
                                                         : bank->actors[static_cast<size_t>(g)];
                    actions[static_cast<size_t>(g)] =
                        actor_select(actor, *codec, states[static_cast<size_t>(g)],
                                     boxes[static_cast<size_t>(g)], act_rng[static_cast<size_t>(g)],
                                     opts.explore, opts.explore_params,
                                     &samples[static_cast<size_t>(g)]);
                    break;
                }
                case PolicyKind::Marto:
                    actions[static_cast<size_t>(g)] =
                        marto_select(boxes[static_cast<size_t>(g)], act_rng[static_cast<size_t>(g)]);
                    break;
                case PolicyKind::Magcs: {
                    std::vector<double> eff(static_cast<size_t>(cfg.n_channels), fs.loss_db);
                    if (!prev_i_final.empty()) {
                        const int n = g / m_per;
                        for (int r = 0; r < cfg.n_channels; ++r)
                            eff[static_cast<size_t>(r)] += 10.0 *
                                std::log10(1.0 + prev_i_final[static_cast<size_t>(n) * cfg.n_channels + r] /
                                                     cfg.noise_power);
                    }
                    actions[static_cast<size_t>(g)] =
                        magcs_select(boxes[static_cast<size_t>(g)], eff, act_rng[static_cast<size_t>(g)]);
                    break;
                }
                case PolicyKind::Mamcc:
                    actions[static_cast<size_t>(g)] =
                        mamcc_select(boxes[static_cast<size_t>(g)], cfg, act_rng[static_cast<size_t>(g)]);
                    break;
                case PolicyKind::OracleDpp: {
                    const OracleContext octx = make_oracle_context(
                        cfg, fs, g, queues.backlog[static_cast<size_t>(g)],
                        prices[static_cast<size_t>(g)], boxes[static_cast<size_t>(g)],
                        prev_i_intended, prev_i_final, prev_actions);
                    actions[static_cast<size_t>(g)] =
                        oracle_slot_action(octx, cfg, OracleGrid::from_config(cfg));
                    break;
                }
            }
        }

        const SlotResult res = env.resolve(ctx, actions);

        std::vector<double> freqs(static_cast<size_t>(total));
        for (int g = 0; g < total; ++g) freqs[static_cast<size_t>(g)] = actions[static_cast<size_t>(g)].cpu_freq;
        const double profit = leader_profit(prices, freqs, cfg.unit_energy_cost);

        std::vector<double> rewards(static_cast<size_t>(total));
        std::vector<double> queue_pre(queues.backlog);
        for (int g = 0; g < total; ++g) {
            rewards[static_cast<size_t>(g)] = instant_reward_term(
                queue_pre[static_cast<size_t>(g)], res.served[static_cast<size_t>(g)],
                actions[static_cast<size_t>(g)].cpu_freq, prices[static_cast<size_t>(g)],
                res.overhead_s[static_cast<size_t>(g)], cfg.v_lyapunov);
            result.stats.total_reward += rewards[static_cast<size_t>(g)];
            served_sum += res.served[static_cast<size_t>(g)];
        }

        for (int g = 0; g < total; ++g) {
            queues.backlog[static_cast<size_t>(g)] =
                queue_update(queues.backlog[static_cast<size_t>(g)], res.served[static_cast<size_t>(g)],
                             ctx.followers[static_cast<size_t>(g)].arrival);
        }
        queues.record();

        if (opts.record_metrics) {
            for (int g = 0; g < total; ++g) {
                MetricsRecord r;
                r.slot = t;
                r.mbs = g / m_per;
                r.follower = g % m_per;
                r.queue_bits = queues.backlog[static_cast<size_t>(g)];
                r.throughput_bits = res.served[static_cast<size_t>(g)];
                r.interference_w = res.interference_w[static_cast<size_t>(g)];
                r.overhead_s = res.overhead_s[static_cast<size_t>(g)];
                r.price = prices[static_cast<size_t>(g)];
                r.leader_profit = profit;
                r.policy = to_string(kind);
                r.seed = opts.seed_label;
                result.metrics.push_back(std::move(r));
            }
        }

        if (opts.record_oracle) {
            OracleSlotData data;
            for (int g = 0; g < total; ++g) {
                data.contexts.push_back(make_oracle_context(
                    cfg, ctx.followers[static_cast<size_t>(g)], g, queue_pre[static_cast<size_t>(g)],
                    prices[static_cast<size_t>(g)], boxes[static_cast<size_t>(g)],
                    res.i_intended, res.i_final, actions));
                data.actions.push_back(actions[static_cast<size_t>(g)]);
                data.served.push_back(res.served[static_cast<size_t>(g)]);
                data.overhead.push_back(res.overhead_s[static_cast<size_t>(g)]);
            }
            result.oracle.push_back(std::move(data));
        }

        // Complete the previous slot's transitions now that the successor
        // state is known.
        complete_transitions(states, boxes, lfeats);

        pending.assign(static_cast<size_t>(total), {});
        for (int g = 0; g < total; ++g) {
            auto& p = pending[static_cast<size_t>(g)];
            p.state = states[static_cast<size_t>(g)];
            p.action = actions[static_cast<size_t>(g)];
            p.box = boxes[static_cast<size_t>(g)];
            p.reward = rewards[static_cast<size_t>(g)];
            p.served = res.served[static_cast<size_t>(g)];
            p.overhead = res.overhead_s[static_cast<size_t>(g)];
            p.explore = opts.explore ? opts.explore_params : ExploreParams{};
            p.sample = samples[static_cast<size_t>(g)];
        }
        has_pending = true;
        leader_pending = PendingLeader{lfeats, u_lead, prices, profit};
        has_leader_pending = !lfeats.empty();

        result.stats.leader_return += profit;
        prev_freqs = std::move(freqs);
        prev_i_intended = res.i_intended;
        prev_i_final = res.i_final;
        prev_actions = actions;
    }

    // Terminal observation to close the last transitions.
    if (slots > 0) {
        const SlotContext term = env.begin_slot();
        std::vector<FollowerState> term_states(static_cast<size_t>(total));
        std::vector<ActionBox> term_boxes(static_cast<size_t>(total));
        for (int g = 0; g < total; ++g) {
            const FollowerSlot& fs = term.followers[static_cast<size_t>(g)];
            term_boxes[static_cast<size_t>(g)] = env.action_box(fs, queues.backlog[static_cast<size_t>(g)]);
            term_states[static_cast<size_t>(g)] =
                env.observe(fs, queues.backlog[static_cast<size_t>(g)],
                            leader_pending.price.empty() ? cfg.baseline_price
                                                         : leader_pending.price[static_cast<size_t>(g)]);
        }
        std::vector<double> term_lfeats;
        if (kind == PolicyKind::Madfrl && leader)
            term_lfeats = leader->state_features(LeaderState{prev_freqs, cfg.unit_energy_cost});
        complete_transitions(term_states, term_boxes, term_lfeats);
    }

    result.stats.mean_queue = queues.mean_backlog();
    result.stats.mean_throughput =
        slots > 0 ? served_sum / (static_cast<double>(slots) * total) : 0.0;
    result.stats.mean_critic_value =
        critic_value_count > 0 ? critic_value_sum / static_cast<double>(critic_value_count) : 0.0;
    return result;
}

} // namespace sgdtn
