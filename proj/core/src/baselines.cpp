#include "sgdtn/baselines.hpp"

#include <algorithm>

namespace sgdtn {

const char* to_string(BaselineKind k) {
    switch (k) {
        case BaselineKind::Marto: return "marto";
        case BaselineKind::Magcs: return "magcs";
        case BaselineKind::Mamcc: return "mamcc";
    }
    return "?";
}

FollowerAction marto_select(const ActionBox& box, Rng& rng) {
    FollowerAction a;
    a.cpu_freq = rng.uniform(0.0, box.cpu_hi);
    a.channel = static_cast<int>(rng.below(static_cast<uint64_t>(box.n_channels)));
    a.offload = rng.bernoulli(0.5);
    a.block_size = rng.uniform(box.block_lo, box.block_hi);
    return a;
}

FollowerAction magcs_select(const ActionBox& box,
                            std::span<const double> channel_loss_db, Rng& rng) {
    FollowerAction a = marto_select(box, rng);
    int best = 0;
    for (size_t r = 1; r < channel_loss_db.size(); ++r)
        if (channel_loss_db[r] < channel_loss_db[static_cast<size_t>(best)])
            best = static_cast<int>(r);
    a.channel = best;
    return a;
}

FollowerAction mamcc_select(const ActionBox& box, const SimConfig& cfg, Rng& rng) {
    FollowerAction a = marto_select(box, rng);
    const double share = cfg.mamcc_cpu_pool / cfg.total_followers();
    a.cpu_freq = std::min(share, box.cpu_hi);
    return a;
}

} // namespace sgdtn
