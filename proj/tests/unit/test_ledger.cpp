#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>

#include "sgdtn/ledger.hpp"
#include "sgdtn/rng.hpp"

using namespace sgdtn;

TEST_CASE("aggregation overhead") {
    CHECK(aggregation_overhead(0.0, 6e9) == 0.0);
    CHECK(aggregation_overhead(1.2e6, 6e9) == doctest::Approx(2e-4));
    // Inversely proportional to the MBS frequency.
    CHECK(aggregation_overhead(1.2e6, 3e9) == doctest::Approx(4e-4));
    CHECK_THROWS_AS(aggregation_overhead(1e6, 0.0), std::domain_error);
}

TEST_CASE("transmission overhead") {
    CHECK(transmission_overhead(0.5, 1, 1e6, 5e9) == 0.0); // log2(1) = 0
    CHECK(transmission_overhead(0.5, 4, 1e6, 5e9) == doctest::Approx(2e-4));
    // Linear in delta.
    CHECK(transmission_overhead(1.0, 4, 1e6, 5e9) ==
          doctest::Approx(2.0 * transmission_overhead(0.5, 4, 1e6, 5e9)));
}

TEST_CASE("verification overhead") {
    const std::vector<double> solo{2e9};
    CHECK(verification_overhead(0.5, 4, 12, 0.0, 1e10, solo) == 0.0);
    // 0.5 log2(48) 1e6/1e10 + 1e6/2e9.
    const double want = 0.5 * std::log2(48.0) * 1e-4 + 5e-4;
    CHECK(verification_overhead(0.5, 4, 12, 1e6, 1e10, solo) ==
          doctest::Approx(want).epsilon(1e-12));

    // The slowest positive verifier binds; raising it shrinks the term.
    const std::vector<double> pair{2e9, 1e9};
    const std::vector<double> faster{2e9, 1.5e9};
    CHECK(verification_overhead(0.5, 4, 12, 1e6, 1e10, faster) <
          verification_overhead(0.5, 4, 12, 1e6, 1e10, pair));

    // Zero-frequency followers are skipped; all-zero is an error.
    const std::vector<double> with_idle{0.0, 2e9};
    CHECK(verification_overhead(0.5, 4, 12, 1e6, 1e10, with_idle) ==
          doctest::Approx(want).epsilon(1e-12));
    const std::vector<double> idle{0.0, 0.0};
    CHECK_THROWS_AS(verification_overhead(0.5, 4, 12, 1e6, 1e10, idle),
                    std::domain_error);
}

TEST_CASE("total overhead") {
    const OverheadBreakdown zero = total_overhead(0.0, 0.0, 0.0);
    CHECK(zero.total == 0.0);
    const OverheadBreakdown b = total_overhead(2e-4, 2e-4, 7.79248e-4);
    CHECK(b.total == doctest::Approx(1.179248e-3).epsilon(1e-9));
    // Permutation of the summands leaves the total unchanged.
    CHECK(total_overhead(7.79248e-4, 2e-4, 2e-4).total == doctest::Approx(b.total));
}

TEST_CASE("transaction state machine transitions") {
    Transaction tx;
    tx.payload = {1.0, 2.0, 3.0};
    tx.digest = payload_digest(tx.payload);
    CHECK(tx.status == TxStatus::Generated);

    // Commit on a freshly generated transaction is illegal.
    CHECK_THROWS_AS(advance_transaction(tx, TxEvent::VerifyPass), IllegalTransition);

    tx = advance_transaction(std::move(tx), TxEvent::Broadcast);
    CHECK(tx.status == TxStatus::Broadcast);
    tx = advance_transaction(std::move(tx), TxEvent::Package);
    tx = advance_transaction(std::move(tx), TxEvent::BeginVerify);
    CHECK(tx.status == TxStatus::Verifying);
    Transaction closed = advance_transaction(tx, TxEvent::VerifyFail);
    CHECK(closed.status == TxStatus::Closed);
    Transaction committed = advance_transaction(std::move(tx), TxEvent::VerifyPass);
    CHECK(committed.status == TxStatus::Committed);
    CHECK(committed.coin_reward == 1.0);
    // Terminal states accept nothing.
    CHECK_THROWS_AS(advance_transaction(committed, TxEvent::Broadcast), IllegalTransition);
    CHECK_THROWS_AS(advance_transaction(closed, TxEvent::VerifyPass), IllegalTransition);
}

TEST_CASE("ledger commits clean payloads and appends heights") {
    Ledger ledger(4);
    CHECK(ledger.quorum() == 3);
    for (int i = 0; i < 5; ++i) {
        Transaction tx;
        tx.id = ledger.allocate_id();
        tx.payload = {static_cast<double>(i), 2.0 * i};
        tx.digest = payload_digest(tx.payload);
        const Transaction done = ledger.process(std::move(tx), 5e5);
        CHECK(done.status == TxStatus::Committed);
        CHECK(ledger.height() == i + 1);
    }
    const auto& records = ledger.records();
    for (size_t i = 0; i < records.size(); ++i)
        CHECK(records[i].height == static_cast<long long>(i) + 1);
}

TEST_CASE("any single-bit payload mutation closes the transaction") {
    Rng rng(31);
    Ledger ledger(4);
    for (int trial = 0; trial < 300; ++trial) {
        Transaction tx;
        tx.id = ledger.allocate_id();
        tx.payload.resize(16);
        for (auto& v : tx.payload) v = rng.uniform(-1.0, 1.0);
        tx.digest = payload_digest(tx.payload);

        // Flip one random bit after the digest was taken.
        const size_t word = rng.below(tx.payload.size());
        const int bit = static_cast<int>(rng.below(64));
        uint64_t bits;
        std::memcpy(&bits, &tx.payload[word], sizeof bits);
        bits ^= (1ULL << bit);
        std::memcpy(&tx.payload[word], &bits, sizeof bits);

        const long long height_before = ledger.height();
        const Transaction done = ledger.process(std::move(tx), 5e5);
        CHECK(done.status == TxStatus::Closed);
        CHECK(ledger.height() == height_before);
    }
}

TEST_CASE("ledger export is newline-delimited") {
    Ledger ledger(3);
    Transaction tx;
    tx.id = ledger.allocate_id();
    tx.initiator_mbs = 1;
    tx.initiator_follower = 2;
    tx.payload = {42.0};
    tx.digest = payload_digest(tx.payload);
    ledger.process(std::move(tx), 1e5);
    const std::string path = "/tmp/sgdtn_test_ledger.csv";
    ledger.export_records(path);
    std::ifstream in(path);
    std::string header, row;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row));
    CHECK(header == "height,tx_id,initiator_mbs,initiator_follower,status,block_size");
    CHECK(row.find("1,1,1,2,committed,") == 0);
}
