// Comparison policies: random task offloading, greedy channel selection,
// and equal CPU sharing. Unspecified components fall back to the random
// rule so each baseline isolates one mechanism.
#pragma once

#include <span>
#include <string>

#include "sgdtn/action.hpp"
#include "sgdtn/config.hpp"
#include "sgdtn/rng.hpp"

namespace sgdtn {

enum class BaselineKind { Marto, Magcs, Mamcc };

const char* to_string(BaselineKind k);

// Random frequency/channel/offload/block within the feasibility box.
FollowerAction marto_select(const ActionBox& box, Rng& rng);

// Channel = argmin of the per-channel effective loss (ties to the lowest
// index); everything else random.
FollowerAction magcs_select(const ActionBox& box,
                            std::span<const double> channel_loss_db, Rng& rng);

// Equal share of a fixed CPU pool, clamped to the box; channel and offload
// random.
FollowerAction mamcc_select(const ActionBox& box, const SimConfig& cfg, Rng& rng);

} // namespace sgdtn
