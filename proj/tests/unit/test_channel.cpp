#include <doctest.h>

#include <cmath>

#include "sgdtn/channel.hpp"
#include "sgdtn/rng.hpp"

using namespace sgdtn;

TEST_CASE("los_probability matches hand-evaluated points") {
    // 45 degrees elevation with the dense-urban constants.
    CHECK(los_probability(1000.0, 1000.0, 9.61, 0.16) == doctest::Approx(0.9677).epsilon(1e-3));
    // Near-vertical link: 1/(1 + 9.61 exp(-0.16 (90 - 9.61))).
    CHECK(los_probability(1.0, 1e12, 9.61, 0.16) == doctest::Approx(0.999975).epsilon(1e-5));
    // b1 = 0 collapses the denominator.
    CHECK(los_probability(123.0, 456.0, 0.0, 0.16) == doctest::Approx(1.0));
    CHECK_THROWS_AS(los_probability(0.0, 1.0, 9.61, 0.16), std::domain_error);
    CHECK_THROWS_AS(los_probability(-5.0, 1.0, 9.61, 0.16), std::domain_error);
}

TEST_CASE("los_probability is monotone in elevation") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(1.0, 1e6);
        const double y1 = rng.uniform(1.0, 1e6);
        const double y2 = y1 * rng.uniform(1.001, 3.0);
        CHECK(los_probability(x, y2, 9.61, 0.16) > los_probability(x, y1, 9.61, 0.16));
    }
}

TEST_CASE("path_loss free-space term") {
    // x = y = 1000 km, f_c = 0.1 GHz: 20 log10(4 pi 1e8 sqrt(2) 1e6 / 3e8).
    const double fs = path_loss(1e6, 1e6, 1e8, 3e8, 0.37, 0.0, 0.0);
    CHECK(fs == doctest::Approx(135.452).epsilon(1e-4));

    // Doubling the slant range adds exactly 20 log10 2 dB.
    const double d1 = path_loss(3e5, 4e5, 1e8, 3e8, 0.5, 0.0, 0.0);
    const double d2 = path_loss(6e5, 8e5, 1e8, 3e8, 0.5, 0.0, 0.0);
    CHECK(d2 - d1 == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("path_loss epsilon mixture") {
    // Equal extra losses make the mixture independent of p_LoS.
    const double a = path_loss(1e5, 2e5, 1e8, 3e8, 0.1, 7.5, 7.5);
    const double b = path_loss(1e5, 2e5, 1e8, 3e8, 0.9, 7.5, 7.5);
    CHECK(a == doctest::Approx(b).epsilon(1e-14));

    // p in {0, 1} selects exactly one epsilon term.
    const double fs = path_loss(1e5, 2e5, 1e8, 3e8, 0.0, 0.0, 0.0);
    CHECK(path_loss(1e5, 2e5, 1e8, 3e8, 1.0, 3.0, 20.0) == doctest::Approx(fs + 3.0));
    CHECK(path_loss(1e5, 2e5, 1e8, 3e8, 0.0, 3.0, 20.0) == doctest::Approx(fs + 20.0));
    CHECK_THROWS_AS(path_loss(0.0, 1.0, 1e8, 3e8, 0.5, 0.0, 0.0), std::domain_error);
}

namespace {

ChannelAssignment random_assignment(Rng& rng, int n_mbs, int m_per, int n_ch,
                                    std::vector<double>& losses) {
    ChannelAssignment assign;
    losses.clear();
    for (int n = 0; n < n_mbs; ++n) {
        for (int m = 0; m < m_per; ++m) {
            ChannelAssignment::Entry e;
            e.mbs = n;
            e.follower = m;
            if (rng.bernoulli(0.6)) {
                e.channel = static_cast<int>(rng.below(static_cast<uint64_t>(n_ch)));
                e.power = rng.uniform(0.1, 2.0);
                e.offload_target = 0;
            }
            assign.entries.push_back(e);
            losses.push_back(rng.uniform(60.0, 140.0));
        }
    }
    return assign;
}

// Naive reference: loop every follower of every other MBS.
double interference_oracle(const ChannelAssignment& assign,
                           const std::vector<double>& losses, int m_per,
                           int target_mbs, int channel) {
    double total = 0.0;
    for (const auto& e : assign.entries) {
        if (e.mbs == target_mbs || e.channel != channel || e.offload_target < 0) continue;
        const double amp = std::pow(10.0, -losses[static_cast<size_t>(e.mbs * m_per + e.follower)] / 10.0);
        total += e.power * amp * amp;
    }
    return total;
}

} // namespace

TEST_CASE("interference equals the brute-force double loop") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n_mbs = 1 + static_cast<int>(rng.below(4));
        const int m_per = 1 + static_cast<int>(rng.below(4));
        const int n_ch = 1 + static_cast<int>(rng.below(4));
        std::vector<double> losses;
        const ChannelAssignment assign = random_assignment(rng, n_mbs, m_per, n_ch, losses);
        for (int n = 0; n < n_mbs; ++n) {
            for (int r = 0; r < n_ch; ++r) {
                const double got = interference(assign, losses, n_mbs, m_per, n, r);
                const double want = interference_oracle(assign, losses, m_per, n, r);
                CHECK(got == doctest::Approx(want).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("interference edge cases") {
    // Single MBS: the sum over other cells is empty.
    Rng rng(5);
    std::vector<double> losses;
    const ChannelAssignment solo = random_assignment(rng, 1, 3, 2, losses);
    CHECK(interference(solo, losses, 1, 3, 0, 0) == 0.0);
    CHECK(interference(solo, losses, 1, 3, 0, 1) == 0.0);

    // One interferer at 1 W and 100 dB: (10^-10)^2.
    ChannelAssignment two;
    two.entries.push_back({0, 0, -1, 0.0, -1});
    two.entries.push_back({1, 0, 0, 1.0, 0});
    const std::vector<double> l{100.0, 100.0};
    CHECK(interference(two, l, 2, 1, 0, 0) == doctest::Approx(1e-20).epsilon(1e-12));
    // Nobody else on the channel.
    CHECK(interference(two, l, 2, 1, 0, 1) == 0.0);
    CHECK(interference(two, l, 2, 1, 1, 0) == 0.0);
}

TEST_CASE("offload_rate hand value and monotonicity") {
    // SNR = 1e-20 / 1e-13 = 1e-7.
    CHECK(offload_rate(1e7, true, 1.0, 100.0, 1e-13, 0.0) ==
          doctest::Approx(1.442695).epsilon(1e-5));
    CHECK(offload_rate(1e7, false, 1.0, 100.0, 1e-13, 0.0) == 0.0);
    // Interference blow-up kills the rate.
    CHECK(offload_rate(1e7, true, 1.0, 100.0, 1e-13, 1e6) ==
          doctest::Approx(0.0).epsilon(1e-12));

    Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        const double b = rng.uniform(1e6, 1e8);
        const double p = rng.uniform(0.1, 5.0);
        const double l = rng.uniform(50.0, 140.0);
        const double noise = 1e-13;
        const double i_w = rng.uniform(0.0, 1e-10);
        const double base = offload_rate(b, true, p, l, noise, i_w);
        CHECK(offload_rate(b, true, p, l, noise, i_w * 1.5 + 1e-15) <= base);
        CHECK(offload_rate(b, true, p, l + 1.0, noise, i_w) <= base);
        CHECK(offload_rate(b, true, p * 1.5, l, noise, i_w) >= base);
        CHECK(offload_rate(b * 1.5, true, p, l, noise, i_w) >= base);
    }
}

TEST_CASE("local and offload bit counts") {
    CHECK(local_bits(0.0, 2500.0, 1.0) == 0.0);
    CHECK(local_bits(2e9, 2000.0, 1.0) == doctest::Approx(1e6));
    CHECK_THROWS_AS(local_bits(1e9, 0.0, 1.0), std::domain_error);
    // Bits scale inversely with the per-bit cycle demand.
    CHECK(local_bits(2e9, 4000.0, 1.0) == doctest::Approx(0.5e6));

    CHECK(offload_bits(0.0, 1.0) == 0.0);
    CHECK(offload_bits(1e6, 1.0) == doctest::Approx(1e6));
    CHECK(offload_bits(1.442695, 2.0) == doctest::Approx(2.88539).epsilon(1e-5));
}
