#include "sgdtn/federation.hpp"

#include <stdexcept>

namespace sgdtn {

Mlp compute_delta(const Mlp& global_model, const Mlp& local_model) {
    if (!global_model.same_layout(local_model))
        throw std::invalid_argument("compute_delta: layout mismatch");
    Mlp delta = global_model;
    delta.axpy(-1.0, local_model);
    return delta;
}

double aggregation_weight(double task_bits, double slant_dist,
                          double total_bits, double total_dist) {
    return 0.5 * (task_bits / total_bits + slant_dist / total_dist);
}

IssueResult aggregate_and_issue(const FederationRound& round, Ledger& ledger,
                                double block_size,
                                void (*tamper)(std::vector<double>&)) {
    if (round.deltas.size() != round.weights.size())
        throw std::invalid_argument("aggregate_and_issue: deltas/weights size mismatch");

    Mlp next = round.global_model;
    for (size_t m = 0; m < round.deltas.size(); ++m) {
        if (!next.same_layout(round.deltas[m]))
            throw std::invalid_argument("aggregate_and_issue: delta layout mismatch");
        next.axpy(round.agg_lr * round.weights[m], round.deltas[m]);
    }

    Transaction tx;
    tx.id = ledger.allocate_id();
    tx.payload = next.flatten();
    tx.digest = payload_digest(tx.payload);
    if (tamper) tamper(tx.payload);
    tx = ledger.process(std::move(tx), block_size);

    IssueResult res;
    res.committed = tx.status == TxStatus::Committed;
    res.issued = res.committed ? next : round.global_model;
    res.tx = std::move(tx);
    return res;
}

} // namespace sgdtn
