#include <doctest.h>

#include <cmath>

#include "sgdtn/queueing.hpp"
#include "sgdtn/rng.hpp"

using namespace sgdtn;

TEST_CASE("queue_update clamps at zero") {
    CHECK(queue_update(12.0, 20.0, 5.0) == 0.0);
    CHECK(queue_update(10.0, 3.0, 5.0) == 12.0);
    CHECK(queue_update(7.5, 4.0, 4.0) == 7.5); // balanced slot
}

TEST_CASE("queue stays non-negative under adversarial sequences") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        double q = rng.uniform(0.0, 100.0);
        for (int t = 0; t < 500; ++t) {
            const double served = rng.uniform(0.0, 50.0);
            const double arrived = rng.uniform(0.0, 30.0);
            q = queue_update(q, served, arrived);
            CHECK(q >= 0.0);
        }
    }
}

TEST_CASE("telescoping identity on non-clamping steps") {
    Rng rng(22);
    for (int i = 0; i < 10000; ++i) {
        const double q = rng.uniform(10.0, 1e6);
        const double arrived = rng.uniform(0.0, 1e5);
        const double served = rng.uniform(0.0, q + arrived); // never clamps
        const double next = queue_update(q, served, arrived);
        REQUIRE(next == q - served + arrived);
        const double lhs = 0.5 * next * next - 0.5 * q * q;
        const double rhs = q * (arrived - served) + 0.5 * (arrived - served) * (arrived - served);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    // With clamping the drop in 0.5 Q^2 can only be larger than the identity.
    for (int i = 0; i < 10000; ++i) {
        const double q = rng.uniform(0.0, 100.0);
        const double arrived = rng.uniform(0.0, 10.0);
        const double served = q + arrived + rng.uniform(0.1, 50.0); // clamps
        const double next = queue_update(q, served, arrived);
        REQUIRE(next == 0.0);
        const double lhs = 0.5 * next * next - 0.5 * q * q;
        const double rhs = q * (arrived - served) + 0.5 * (arrived - served) * (arrived - served);
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("dpp_objective hand values") {
    // V = 0 reduces to pure queue drain.
    CHECK(dpp_objective(5.0, 3.0, 1e9, 2.0, 0.5, 0.0) == doctest::Approx(15.0));
    // Q=1e6, D=1e5, V=10, C=0.01, price=1, f=1e9.
    CHECK(dpp_objective(1e6, 1e5, 1e9, 1.0, 0.01, 10.0) ==
          doctest::Approx(90000999999.9).epsilon(1e-12));
}

TEST_CASE("dpp_objective is exactly linear in V") {
    Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
        const double q = rng.uniform(0.0, 1e8);
        const double d = rng.uniform(0.0, 1e7);
        const double f = rng.uniform(0.0, 2e9);
        const double price = rng.uniform(0.0, 10.0);
        const double c = rng.uniform(0.0, 1e-2);
        const double v1 = rng.uniform(0.0, 50.0);
        const double v2 = rng.uniform(0.0, 50.0);
        const double at_v1 = dpp_objective(q, d, f, price, c, v1);
        const double at_v2 = dpp_objective(q, d, f, price, c, v2);
        const double mid = dpp_objective(q, d, f, price, c, 0.5 * (v1 + v2));
        CHECK(mid == doctest::Approx(0.5 * (at_v1 + at_v2)).epsilon(1e-12));
    }
}

TEST_CASE("drift_bound arithmetic and Monte Carlo domination") {
    CHECK(drift_bound(0.0, 0.0) == 0.0);
    CHECK(drift_bound(2e12, 1e6) == doctest::Approx(2e12));

    // E[0.5 (A - D)^2] <= 0.5 eta + d_max^2 for A ~ U(a, b), D in [0, d_max].
    Rng rng(24);
    const double a = 8e7, b = 2.4e8, d_max = 1e8;
    const double eta = (b * b + a * b + a * a) / 3.0;
    const double x = drift_bound(eta, d_max);
    double acc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double arr = rng.uniform(a, b);
        const double served = rng.uniform(0.0, d_max);
        acc += 0.5 * (arr - served) * (arr - served);
    }
    CHECK(acc / n <= x);
}

TEST_CASE("theoretical_queue_bound") {
    CHECK(theoretical_queue_bound(1e12, 1e6, 0.0, 100.0, 1e5) ==
          doctest::Approx((1e12 + 1e8) / 1e5));
    // s_max = s_min: the bound is X_hat / varsigma, independent of V.
    CHECK(theoretical_queue_bound(5e10, 2.0, 2.0, 1.0, 1e4) ==
          theoretical_queue_bound(5e10, 2.0, 2.0, 1e6, 1e4));
    // Affine increasing in V.
    const double b1 = theoretical_queue_bound(1e10, 3.0, 1.0, 10.0, 100.0);
    const double b2 = theoretical_queue_bound(1e10, 3.0, 1.0, 20.0, 100.0);
    const double b3 = theoretical_queue_bound(1e10, 3.0, 1.0, 30.0, 100.0);
    CHECK(b2 > b1);
    CHECK(b3 - b2 == doctest::Approx(b2 - b1).epsilon(1e-12));
    CHECK_THROWS_AS(theoretical_queue_bound(1e10, 3.0, 1.0, 10.0, 0.0), std::domain_error);
}

TEST_CASE("instant reward sums per-follower dpp terms") {
    // Single follower: equals the objective.
    const RewardTerm one{1e6, 1e5, 1e9, 1.0, 0.01};
    CHECK(instant_reward(std::span<const RewardTerm>(&one, 1), 10.0) ==
          doctest::Approx(dpp_objective(1e6, 1e5, 1e9, 1.0, 0.01, 10.0)));

    // All idle: reward is -V * C_SBC summed.
    std::vector<RewardTerm> idle(4);
    for (auto& t : idle) {
        t.queue = 1e5;
        t.served = 0.0;
        t.cpu_freq = 0.0;
        t.price = 3.0;
        t.overhead = 2e-3;
    }
    CHECK(instant_reward(idle, 7.0) == doctest::Approx(-7.0 * 2e-3 * 4).epsilon(1e-12));

    // Doubling Q doubles the Q*D term only.
    const double base = instant_reward_term(1e5, 2e4, 1e8, 2.0, 1e-3, 5.0);
    const double doubled = instant_reward_term(2e5, 2e4, 1e8, 2.0, 1e-3, 5.0);
    CHECK(doubled - base == doctest::Approx(1e5 * 2e4).epsilon(1e-12));
}

TEST_CASE("drift constants capture the service ceiling") {
    SimConfig cfg;
    cfg.validate();
    const double eta = 1e15;
    const DriftConstants d = drift_constants(cfg, eta, 1e8, 2e8);
    CHECK(d.eta == eta);
    CHECK(d.x_bound == doctest::Approx(drift_bound(eta, d.d_max)));
    CHECK(d.x_hat == doctest::Approx(d.x_bound + 1e8 * 2e8));
    CHECK(d.d_max > 0.0);
}
