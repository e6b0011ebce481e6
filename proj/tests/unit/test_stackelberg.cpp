#include <doctest.h>

#include "sgdtn/stackelberg.hpp"

using namespace sgdtn;

TEST_CASE("leader_profit arithmetic") {
    const std::vector<double> f{3e9};
    CHECK(leader_profit(std::vector<double>{2.0}, f, 1.0) == doctest::Approx(3e9));

    // Price equal to cost: zero margin.
    const std::vector<double> freqs{1e9, 2e9, 5e8};
    const std::vector<double> at_cost{1.5, 1.5, 1.5};
    CHECK(leader_profit(at_cost, freqs, 1.5) == doctest::Approx(0.0));

    // Idle followers earn nothing at any price.
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    CHECK(leader_profit(at_cost, zeros, 0.3) == 0.0);

    CHECK_THROWS_AS(leader_profit(std::vector<double>{-0.1}, std::vector<double>{1.0}, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(leader_profit(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("leader_profit is linear in each price") {
    Rng rng(51);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> prices(3), freqs(3);
        for (auto& p : prices) p = rng.uniform(0.0, 10.0);
        for (auto& f : freqs) f = rng.uniform(0.0, 2e9);
        const double c = rng.uniform(0.0, 5.0);
        const double base = leader_profit(prices, freqs, c);
        const double bump = rng.uniform(0.1, 2.0);
        std::vector<double> bumped = prices;
        bumped[1] += bump;
        CHECK(leader_profit(bumped, freqs, c) - base ==
              doctest::Approx(bump * freqs[1]).epsilon(1e-9));
    }
}

TEST_CASE("follower utility follows the printed sign convention") {
    // Zero overhead and zero price: utility is the running throughput.
    CHECK(follower_utility(1e6, 0.0, 0.0, 1e9) == doctest::Approx(1e6));
    // F2 = C_SBC - price * f, so paying more raises the printed utility.
    CHECK(follower_utility(1e6, 1e-3, 1.0, 1e9) ==
          doctest::Approx(1e6 - 1e-3 + 1e9));
    // The config flag flips the price term.
    CHECK(follower_utility(1e6, 1e-3, 1.0, 1e9, true) ==
          doctest::Approx(1e6 - 1e-3 - 1e9));
}

TEST_CASE("leader quotes are deterministic without exploration and stay capped") {
    SimConfig cfg;
    cfg.n_mbs = 1;
    cfg.followers_per_mbs = 3;
    cfg.hidden_dims = {8};
    cfg.validate();
    LeaderAgent leader(cfg, Rng(52));

    LeaderState s;
    s.follower_freqs = {1e9, 5e8, 2e9};
    s.unit_cost = 1.0;

    Rng r1(1), r2(2);
    const PriceQuote q1 = leader.select(s, r1, false, 0.5);
    const PriceQuote q2 = leader.select(s, r2, false, 0.5);
    REQUIRE(q1.price.size() == 3);
    for (size_t i = 0; i < 3; ++i) CHECK(q1.price[i] == q2.price[i]);

    Rng r3(3);
    for (int trial = 0; trial < 200; ++trial) {
        const PriceQuote q = leader.select(s, r3, true, 2.0);
        for (double p : q.price) {
            CHECK(p >= 0.0);
            CHECK(p <= cfg.price_cap);
        }
    }
}

TEST_CASE("leader updates move toward higher-profit quotes") {
    // One-step bandit: profit = price * f - c * f with a fixed response, so
    // the greedy quote should drift upward after training on it.
    SimConfig cfg;
    cfg.n_mbs = 1;
    cfg.followers_per_mbs = 1;
    cfg.hidden_dims = {8};
    cfg.lr_actor = 0.05;
    cfg.lr_critic = 0.1;
    cfg.gamma = 0.0;
    cfg.validate();
    LeaderAgent leader(cfg, Rng(53));

    LeaderState s;
    s.follower_freqs = {1e9};
    s.unit_cost = 1.0;
    const std::vector<double> feats = leader.state_features(s);

    Rng rng(54);
    const PriceQuote before = leader.select(s, rng, false, 0.0);
    for (int step = 0; step < 400; ++step) {
        std::vector<double> u;
        const PriceQuote q = leader.select(s, rng, true, 0.6, &u);
        LeaderTransition tr;
        tr.state_feats = feats;
        tr.u = u;
        tr.price = {q.price[0] / cfg.price_cap};
        tr.reward = leader_profit(q.price, s.follower_freqs, s.unit_cost);
        tr.next_state_feats = feats;
        tr.sigma = 0.6;
        leader.observe(std::move(tr));
        leader.update();
    }
    const PriceQuote after = leader.select(s, rng, false, 0.0);
    CHECK(after.price[0] > before.price[0]);
}
