// Privacy-protection overhead model (aggregation + transmission +
// verification) and the simulated transaction verification life cycle
// backing federated issuing.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgdtn/rng.hpp"

namespace sgdtn {

struct OverheadBreakdown {
    double aggregation = 0.0;  // C1, s
    double transmission = 0.0; // C2, s
    double verification = 0.0; // C3, s
    double total = 0.0;        // C_SBC
};

// C1 = |W_m| / f_MBS.
double aggregation_overhead(double model_size, double mbs_cpu_freq);

// C2 = delta * log2(N) * |W_m| / r_up.
double transmission_overhead(double delta, int n_mbs, double model_size,
                             double uplink_rate);

// C3 = delta * log2(M*N) * S_B / r_down + max_m S_B / f_m, the max taken
// over followers with f > 0. Throws if no follower can verify.
double verification_overhead(double delta, int n_mbs, int followers_per_mbs,
                             double block_size, double downlink_rate,
                             std::span<const double> follower_freqs);

OverheadBreakdown total_overhead(double aggregation, double transmission,
                                 double verification);

// --- Transaction state machine ---------------------------------------

enum class TxStatus { Generated, Broadcast, Packaged, Verifying, Committed, Closed };
enum class TxEvent { Broadcast, Package, BeginVerify, VerifyPass, VerifyFail };

const char* to_string(TxStatus s);
const char* to_string(TxEvent e);

class IllegalTransition : public std::runtime_error {
public:
    IllegalTransition(TxStatus status, TxEvent event);
};

// FNV-1a over the serialized payload. Not cryptographic; the digest choice
// is an implementation detail of the simulated verification step.
uint64_t payload_digest(std::span<const double> payload);

struct Transaction {
    uint64_t id = 0;
    int initiator_mbs = 0;
    int initiator_follower = 0;
    uint64_t digest = 0;            // computed at generation time
    std::vector<double> payload;    // parameter delta (or model) snapshot
    TxStatus status = TxStatus::Generated;
    double coin_reward = 0.0;       // credited on commit
};

// Pure transition function. Throws IllegalTransition on a bad (status,
// event) pair; Committed and Closed are terminal.
Transaction advance_transaction(Transaction tx, TxEvent event);

struct LedgerRecord {
    long long height = 0;
    uint64_t tx_id = 0;
    int initiator_mbs = 0;
    int initiator_follower = 0;
    TxStatus status = TxStatus::Committed;
    double block_size = 0.0;
};

// Append-only commit log plus the delegated-vote verification harness.
class Ledger {
public:
    explicit Ledger(int n_delegates) : n_delegates_(n_delegates) {}

    // Runs the full life cycle on a generated transaction: broadcast,
    // package, delegated-stake voting (each delegate recomputes the digest
    // of tx.payload), commit or close. Returns the terminal transaction.
    Transaction process(Transaction tx, double block_size);

    int quorum() const { return (2 * n_delegates_ + 2) / 3; } // ceil(2K/3)
    long long height() const { return static_cast<long long>(records_.size()); }
    const std::vector<LedgerRecord>& records() const { return records_; }

    // Newline-delimited export: height,tx_id,initiator,status,block_size.
    void export_records(const std::string& path) const;

private:
    int n_delegates_;
    std::vector<LedgerRecord> records_;
    uint64_t next_id_ = 1;

public:
    uint64_t allocate_id() { return next_id_++; }
};

} // namespace sgdtn
