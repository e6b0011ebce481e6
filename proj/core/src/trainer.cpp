#include "sgdtn/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sgdtn/channel.hpp"
#include "sgdtn/maml.hpp"

namespace sgdtn {

Runner::Runner(const SimConfig& cfg, PolicyKind kind, uint64_t seed)
    : cfg_(cfg),
      kind_(kind),
      seed_(seed),
      root_(Rng(seed).split(0x52554eULL)),
      bank_(FollowerBank::init(cfg_, Rng(seed).split(0x42414eULL))),
      leader_(cfg_, Rng(seed).split(0x4c4541ULL)),
      ledger_(cfg_.n_delegates),
      global_actor_(bank_.actors.empty() ? Mlp() : bank_.actors[0]),
      fed_bits_(static_cast<size_t>(cfg.total_followers()), 0.0),
      fed_dist_(static_cast<size_t>(cfg.total_followers()), 0.0) {}

void Runner::train() {
    if (kind_ != PolicyKind::Madfrl) return;

    if (cfg_.maml_rounds > 0) {
        MamlDriver driver(cfg_, seed_);
        driver.run(cfg_.maml_rounds);
        const bool wrap_actor = cfg_.maml_wrap == "actor" || cfg_.maml_wrap == "both";
        const bool wrap_critic = cfg_.maml_wrap == "critic" || cfg_.maml_wrap == "both";
        for (int g = 0; g < cfg_.total_followers(); ++g) {
            if (wrap_actor) bank_.actors[static_cast<size_t>(g)] = driver.meta().actor;
            if (wrap_critic) bank_.critics[static_cast<size_t>(g)] = driver.meta().critic;
        }
        if (wrap_actor) global_actor_ = driver.meta().actor;
    }

    for (int ep = 0; ep < cfg_.train_episodes; ++ep) {
        EpisodeOptions opts;
        opts.explore = true;
        opts.learn = true;
        opts.explore_params = {
            cfg_.explore_eps0 * std::pow(cfg_.explore_eps_decay, ep),
            cfg_.explore_sigma0 * std::pow(cfg_.explore_sigma_decay, ep)};
        opts.rng_tag = static_cast<uint64_t>(ep);
        EpisodeResult res = run_episode(cfg_, kind_, &bank_, &leader_,
                                        root_.split(0xE0000 + static_cast<uint64_t>(ep)), opts);

        stats_.episode_reward.push_back(res.stats.total_reward);
        stats_.episode_critic_value.push_back(res.stats.mean_critic_value);
        stats_.episode_queue.push_back(res.stats.mean_queue);

        for (int g = 0; g < cfg_.total_followers(); ++g) {
            const Trajectory& traj = res.transitions[static_cast<size_t>(g)];
            for (const auto& tr : traj) {
                fed_bits_[static_cast<size_t>(g)] += tr.state.arrival;
                fed_dist_[static_cast<size_t>(g)] += slant_range(tr.state.leo_x, tr.state.leo_y);
                fed_block_sum_ += tr.action.block_size;
                ++fed_block_count_;
            }
        }
        ++episodes_done_;
        if (episodes_done_ % cfg_.fed_every == 0) federation_round();
    }
}

void Runner::federation_round() {
    const int total = cfg_.total_followers();
    double bits_total = 0.0;
    double dist_total = 0.0;
    for (int g = 0; g < total; ++g) {
        bits_total += fed_bits_[static_cast<size_t>(g)];
        dist_total += fed_dist_[static_cast<size_t>(g)];
    }
    if (bits_total <= 0.0 || dist_total <= 0.0) return;

    FederationRound round;
    round.global_model = global_actor_;
    round.agg_lr = cfg_.fl_agg_lr;
    for (int g = 0; g < total; ++g) {
        round.deltas.push_back(compute_delta(global_actor_, bank_.actors[static_cast<size_t>(g)]));
        round.weights.push_back(aggregation_weight(fed_bits_[static_cast<size_t>(g)],
                                                   fed_dist_[static_cast<size_t>(g)],
                                                   bits_total, dist_total));
    }
    const double block = fed_block_count_ > 0
        ? std::clamp(fed_block_sum_ / static_cast<double>(fed_block_count_),
                     cfg_.block_min, cfg_.block_max)
        : 0.5 * (cfg_.block_min + cfg_.block_max);
    const IssueResult issue = aggregate_and_issue(round, ledger_, block);
    if (issue.committed) {
        global_actor_ = issue.issued;
        for (int g = 0; g < total; ++g) bank_.actors[static_cast<size_t>(g)] = global_actor_;
        ++stats_.federation_rounds;
    }
    std::fill(fed_bits_.begin(), fed_bits_.end(), 0.0);
    std::fill(fed_dist_.begin(), fed_dist_.end(), 0.0);
    fed_block_sum_ = 0.0;
    fed_block_count_ = 0;
}

EpisodeResult Runner::evaluate(bool record_oracle) const {
    EpisodeOptions opts;
    opts.explore = false;
    opts.learn = false;
    opts.record_metrics = true;
    opts.record_oracle = record_oracle;
    opts.seed_label = seed_;
    // The evaluation episode gets its own stream, disjoint from training.
    Rng eval_rng = Rng(seed_).split(0x4556414cULL);
    FollowerBank bank_copy = bank_;
    LeaderAgent leader_copy = leader_;
    return run_episode(cfg_, kind_, &bank_copy, &leader_copy, eval_rng, opts);
}

void Runner::save_checkpoints(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    for (size_t g = 0; g < bank_.actors.size(); ++g) {
        bank_.actors[g].save(dir + "/actor_" + std::to_string(g) + ".bin");
        bank_.critics[g].save(dir + "/critic_" + std::to_string(g) + ".bin");
    }
    leader_.actor().save(dir + "/leader_actor.bin");
}

OracleVerifyResult oracle_verify(const SimConfig& cfg, const EpisodeResult& trace) {
    OracleVerifyResult out;
    out.all_maximal = true;
    const OracleGrid grid = OracleGrid::from_config(cfg);
    double logged_sum = 0.0;
    double oracle_sum = 0.0;
    for (const auto& slot : trace.oracle) {
        for (size_t g = 0; g < slot.contexts.size(); ++g) {
            const OracleContext& ctx = slot.contexts[g];
            const FollowerAction& logged = slot.actions[g];
            const double logged_obj =
                dpp_objective(ctx.queue, slot.served[g], logged.cpu_freq, ctx.price,
                              slot.overhead[g], cfg.v_lyapunov);
            double best_obj = 0.0;
            oracle_slot_action(ctx, cfg, grid, &logged, &best_obj);
            logged_sum += logged_obj;
            oracle_sum += best_obj;
            ++out.checked;
            // The oracle enumerates the logged action too, so any shortfall
            // beyond roundoff is a real defect.
            const double tol = 1e-9 * std::max(1.0, std::fabs(best_obj));
            if (best_obj + tol < logged_obj) {
                out.all_maximal = false;
                ++out.violations;
            }
        }
    }
    out.mean_logged = out.checked ? logged_sum / static_cast<double>(out.checked) : 0.0;
    out.mean_oracle = out.checked ? oracle_sum / static_cast<double>(out.checked) : 0.0;
    out.ratio = out.mean_oracle != 0.0 ? out.mean_logged / out.mean_oracle : 1.0;
    return out;
}

void write_transitions_csv(const std::string& path,
                           const std::vector<Trajectory>& trajectories) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_transitions_csv: cannot open " + path);
    out << "follower,step,arrival,leo_x,leo_y,price,queue,cpu_freq,channel,"
           "offload,block_size,reward,served,overhead\n";
    for (size_t g = 0; g < trajectories.size(); ++g) {
        for (size_t i = 0; i < trajectories[g].size(); ++i) {
            const Transition& tr = trajectories[g][i];
            out << g << ',' << i << ',' << format_double(tr.state.arrival) << ','
                << format_double(tr.state.leo_x) << ',' << format_double(tr.state.leo_y)
                << ',' << format_double(tr.state.price) << ','
                << format_double(tr.state.queue) << ','
                << format_double(tr.action.cpu_freq) << ',' << tr.action.channel << ','
                << (tr.action.offload ? 1 : 0) << ','
                << format_double(tr.action.block_size) << ','
                << format_double(tr.reward) << ',' << format_double(tr.served) << ','
                << format_double(tr.overhead) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write_transitions_csv: write failed for " + path);
}

} // namespace sgdtn
