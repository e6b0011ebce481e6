#include "sgdtn/ledger.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgdtn {

double aggregation_overhead(double model_size, double mbs_cpu_freq) {
    if (mbs_cpu_freq <= 0.0) throw std::domain_error("aggregation_overhead: mbs_cpu_freq must be > 0");
    return model_size / mbs_cpu_freq;
}

double transmission_overhead(double delta, int n_mbs, double model_size,
                             double uplink_rate) {
    if (uplink_rate <= 0.0) throw std::domain_error("transmission_overhead: uplink_rate must be > 0");
    if (n_mbs < 1) throw std::domain_error("transmission_overhead: n_mbs must be >= 1");
    return delta * std::log2(static_cast<double>(n_mbs)) * model_size / uplink_rate;
}

double verification_overhead(double delta, int n_mbs, int followers_per_mbs,
                             double block_size, double downlink_rate,
                             std::span<const double> follower_freqs) {
    if (downlink_rate <= 0.0) throw std::domain_error("verification_overhead: downlink_rate must be > 0");
    double slowest = 0.0;
    bool any = false;
    for (double f : follower_freqs) {
        if (f > 0.0) {
            slowest = any ? std::min(slowest, f) : f;
            any = true;
        }
    }
    if (!any) throw std::domain_error("verification_overhead: no follower with positive frequency");
    const double download = delta *
        std::log2(static_cast<double>(n_mbs) * static_cast<double>(followers_per_mbs)) *
        block_size / downlink_rate;
    return download + block_size / slowest;
}

OverheadBreakdown total_overhead(double aggregation, double transmission,
                                 double verification) {
    OverheadBreakdown b;
    b.aggregation = aggregation;
    b.transmission = transmission;
    b.verification = verification;
    b.total = aggregation + transmission + verification;
    return b;
}

const char* to_string(TxStatus s) {
    switch (s) {
        case TxStatus::Generated: return "generated";
        case TxStatus::Broadcast: return "broadcast";
        case TxStatus::Packaged: return "packaged";
        case TxStatus::Verifying: return "verifying";
        case TxStatus::Committed: return "committed";
        case TxStatus::Closed: return "closed";
    }
    return "?";
}

const char* to_string(TxEvent e) {
    switch (e) {
        case TxEvent::Broadcast: return "broadcast";
        case TxEvent::Package: return "package";
        case TxEvent::BeginVerify: return "begin_verify";
        case TxEvent::VerifyPass: return "verify_pass";
        case TxEvent::VerifyFail: return "verify_fail";
    }
    return "?";
}

IllegalTransition::IllegalTransition(TxStatus status, TxEvent event)
    : std::runtime_error(std::string("illegal transaction transition: status=") +
                         to_string(status) + " event=" + to_string(event)) {}

uint64_t payload_digest(std::span<const double> payload) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : payload) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffULL;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

Transaction advance_transaction(Transaction tx, TxEvent event) {
    switch (tx.status) {
        case TxStatus::Generated:
            if (event == TxEvent::Broadcast) { tx.status = TxStatus::Broadcast; return tx; }
            break;
        case TxStatus::Broadcast:
            if (event == TxEvent::Package) { tx.status = TxStatus::Packaged; return tx; }
            break;
        case TxStatus::Packaged:
            if (event == TxEvent::BeginVerify) { tx.status = TxStatus::Verifying; return tx; }
            break;
        case TxStatus::Verifying:
            if (event == TxEvent::VerifyPass) {
                tx.status = TxStatus::Committed;
                tx.coin_reward = 1.0;
                return tx;
            }
            if (event == TxEvent::VerifyFail) { tx.status = TxStatus::Closed; return tx; }
            break;
        case TxStatus::Committed:
        case TxStatus::Closed:
            break;
    }
    throw IllegalTransition(tx.status, event);
}

Transaction Ledger::process(Transaction tx, double block_size) {
    tx = advance_transaction(std::move(tx), TxEvent::Broadcast);
    tx = advance_transaction(std::move(tx), TxEvent::Package);
    tx = advance_transaction(std::move(tx), TxEvent::BeginVerify);

    int passes = 0;
    for (int d = 0; d < n_delegates_; ++d) {
        if (payload_digest(tx.payload) == tx.digest) ++passes;
    }
    if (passes >= quorum()) {
        tx = advance_transaction(std::move(tx), TxEvent::VerifyPass);
        records_.push_back(LedgerRecord{height() + 1, tx.id, tx.initiator_mbs,
                                        tx.initiator_follower, TxStatus::Committed,
                                        block_size});
    } else {
        tx = advance_transaction(std::move(tx), TxEvent::VerifyFail);
    }
    return tx;
}

void Ledger::export_records(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("ledger export: cannot open " + path);
    out << "height,tx_id,initiator_mbs,initiator_follower,status,block_size\n";
    char line[160];
    for (const auto& r : records_) {
        std::snprintf(line, sizeof line, "%lld,%llu,%d,%d,%s,%.17g\n", r.height,
                      static_cast<unsigned long long>(r.tx_id), r.initiator_mbs,
                      r.initiator_follower, to_string(r.status), r.block_size);
        out << line;
    }
}

} // namespace sgdtn
