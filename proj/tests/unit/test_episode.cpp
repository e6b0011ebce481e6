#include <doctest.h>

#include "sgdtn/episode.hpp"
#include "sgdtn/queueing.hpp"

using namespace sgdtn;

namespace {

SimConfig tiny_cfg() {
    SimConfig cfg;
    cfg.n_mbs = 1;
    cfg.followers_per_mbs = 2;
    cfg.n_leo = 1;
    cfg.n_channels = 2;
    cfg.hidden_dims = {8, 8};
    cfg.episode_slots = 20;
    cfg.arrival_lo = 8e6;
    cfg.arrival_hi = 2.4e7;
    cfg.x_lo = 200.0;
    cfg.x_hi = 400.0;
    cfg.y_lo = 200.0;
    cfg.y_hi = 400.0;
    cfg.validate();
    return cfg;
}

// An actor whose offload logit is pinned far negative: all-local play.
Mlp all_local_actor(const SimConfig& cfg) {
    const PolicyCodec codec = PolicyCodec::from_config(cfg);
    Mlp actor = Mlp::zeros(codec.actor_dims(cfg));
    std::vector<double> flat = actor.flatten();
    // Biases of the output layer are the last out_dim entries.
    flat[flat.size() - static_cast<size_t>(codec.actor_out_dim()) + 2] = -100.0;
    actor.unflatten(flat);
    return actor;
}

} // namespace

TEST_CASE("zero slots yields empty outputs") {
    const SimConfig cfg = tiny_cfg();
    FollowerBank bank = FollowerBank::init(cfg, Rng(1));
    EpisodeOptions opts;
    opts.slots = -1; // forces the cfg default
    SimConfig zero = cfg;
    zero.episode_slots = 0;
    const EpisodeResult res = run_episode(zero, PolicyKind::Marto, &bank, nullptr, Rng(2), {});
    CHECK(res.metrics.empty());
    for (const auto& traj : res.transitions) CHECK(traj.empty());
    CHECK(res.stats.total_reward == 0.0);
}

TEST_CASE("all-local play never interferes") {
    const SimConfig cfg = tiny_cfg();
    FollowerBank bank = FollowerBank::init(cfg, Rng(3));
    const Mlp local = all_local_actor(cfg);
    EpisodeOptions opts;
    opts.record_metrics = true;
    opts.shared_actor = &local;
    const EpisodeResult res =
        run_episode(cfg, PolicyKind::Madfrl, &bank, nullptr, Rng(4), opts);
    REQUIRE_FALSE(res.metrics.empty());
    for (const auto& r : res.metrics) CHECK(r.interference_w == 0.0);
    for (const auto& traj : res.transitions)
        for (const auto& tr : traj) CHECK_FALSE(tr.action.offload);
}

TEST_CASE("logged rewards replay exactly from logged primitives") {
    const SimConfig cfg = tiny_cfg();
    FollowerBank bank = FollowerBank::init(cfg, Rng(5));
    EpisodeOptions opts;
    opts.explore = true;
    opts.explore_params = {0.3, 0.5};
    const EpisodeResult res =
        run_episode(cfg, PolicyKind::Madfrl, &bank, nullptr, Rng(6), opts);
    long long checked = 0;
    for (const auto& traj : res.transitions) {
        for (const auto& tr : traj) {
            const double replayed =
                instant_reward_term(tr.state.queue, tr.served, tr.action.cpu_freq,
                                    tr.state.price, tr.overhead, cfg.v_lyapunov);
            CHECK(replayed == tr.reward);
            ++checked;
        }
    }
    CHECK(checked == cfg.episode_slots * cfg.total_followers());
}

TEST_CASE("every logged action satisfies the constraint set") {
    SimConfig cfg = tiny_cfg();
    cfg.n_mbs = 2;
    cfg.n_channels = 2;
    for (PolicyKind kind : {PolicyKind::Madfrl, PolicyKind::Marto, PolicyKind::Magcs,
                            PolicyKind::Mamcc, PolicyKind::OracleDpp}) {
        FollowerBank bank = FollowerBank::init(cfg, Rng(7));
        EpisodeOptions opts;
        opts.explore = kind == PolicyKind::Madfrl;
        opts.explore_params = {0.4, 0.6};
        const EpisodeResult res = run_episode(cfg, kind, &bank, nullptr, Rng(8), opts);
        for (const auto& traj : res.transitions) {
            for (const auto& tr : traj) {
                CHECK(tr.box.contains(tr.action));
                CHECK(tr.action.block_size >= cfg.block_min);
                CHECK(tr.action.block_size <= cfg.block_max);
                // f <= w Q / T is folded into the box bound.
                CHECK(tr.action.cpu_freq <= cfg.follower_cpu_max * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("identical seeds give identical episodes, different seeds differ") {
    const SimConfig cfg = tiny_cfg();
    FollowerBank b1 = FollowerBank::init(cfg, Rng(9));
    FollowerBank b2 = FollowerBank::init(cfg, Rng(9));
    EpisodeOptions opts;
    opts.explore = true;
    opts.explore_params = {0.3, 0.5};
    opts.record_metrics = true;
    const EpisodeResult r1 = run_episode(cfg, PolicyKind::Madfrl, &b1, nullptr, Rng(10), opts);
    const EpisodeResult r2 = run_episode(cfg, PolicyKind::Madfrl, &b2, nullptr, Rng(10), opts);
    REQUIRE(r1.metrics.size() == r2.metrics.size());
    for (size_t i = 0; i < r1.metrics.size(); ++i) {
        CHECK(r1.metrics[i].queue_bits == r2.metrics[i].queue_bits);
        CHECK(r1.metrics[i].throughput_bits == r2.metrics[i].throughput_bits);
    }
    FollowerBank b3 = FollowerBank::init(cfg, Rng(9));
    const EpisodeResult r3 = run_episode(cfg, PolicyKind::Madfrl, &b3, nullptr, Rng(11), opts);
    bool any_diff = false;
    for (size_t i = 0; i < r1.metrics.size(); ++i)
        if (r1.metrics[i].throughput_bits != r3.metrics[i].throughput_bits) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("per-slot learning leaves parameters changed") {
    const SimConfig cfg = tiny_cfg();
    FollowerBank bank = FollowerBank::init(cfg, Rng(12));
    const Mlp actor_before = bank.actors[0];
    const Mlp critic_before = bank.critics[0];
    EpisodeOptions opts;
    opts.explore = true;
    opts.learn = true;
    opts.explore_params = {0.3, 0.5};
    run_episode(cfg, PolicyKind::Madfrl, &bank, nullptr, Rng(13), opts);
    CHECK_FALSE(bank.actors[0] == actor_before);
    CHECK_FALSE(bank.critics[0] == critic_before);
}
