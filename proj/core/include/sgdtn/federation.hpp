// Federated aggregation and issuing of actor parameters: deltas weighted
// by task size and slant distance, committed through the ledger before any
// follower receives the new global model.
#pragma once

#include <span>
#include <vector>

#include "sgdtn/ledger.hpp"
#include "sgdtn/mlp.hpp"

namespace sgdtn {

struct FederationRound {
    Mlp global_model;
    std::vector<Mlp> deltas;    // I_m = Z - Z_m, per follower
    std::vector<double> weights; // convex combination over followers
    double agg_lr = 1.0;         // u
};

// I = global - local, element-wise. Throws on layout mismatch.
Mlp compute_delta(const Mlp& global_model, const Mlp& local_model);

// ((bits / total_bits) + (dist / total_dist)) / 2; the halving makes the
// weights over all followers sum to one.
double aggregation_weight(double task_bits, double slant_dist,
                          double total_bits, double total_dist);

struct IssueResult {
    Mlp issued;          // new global model (old one if issuing was blocked)
    bool committed = false;
    Transaction tx;
};

// Z(t+1) = Z(t) + u * sum_m w_m I_m, gated by a ledger transaction carrying
// the digest of the serialized Z(t+1). A Closed transaction blocks issuing
// and the followers keep their local parameters. `tamper` (tests only)
// mutates the payload after the digest is computed.
IssueResult aggregate_and_issue(const FederationRound& round, Ledger& ledger,
                                double block_size,
                                void (*tamper)(std::vector<double>&) = nullptr);

} // namespace sgdtn
