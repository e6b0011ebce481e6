// Slot-level network environment: stochastic arrivals, resampled LEO
// geometry, link losses, joint interference, the interference-cap demotion
// rule, and per-slot service/overhead outcomes.
#pragma once

#include <vector>

#include "sgdtn/action.hpp"
#include "sgdtn/channel.hpp"
#include "sgdtn/config.hpp"
#include "sgdtn/rng.hpp"

namespace sgdtn {

struct LeoGeometry {
    // Row-major over (mbs, follower, leo).
    std::vector<double> horizontal;
    std::vector<double> vertical;
    int n_leo = 0;

    double x(int g, int o) const { return horizontal[static_cast<size_t>(g) * n_leo + o]; }
    double y(int g, int o) const { return vertical[static_cast<size_t>(g) * n_leo + o]; }
};

struct ArrivalBatch {
    std::vector<double> bits;              // per follower
    std::vector<double> second_moment_est; // running eta per follower
};

// Resample all (x, y) pairs uniformly from the configured ranges.
LeoGeometry step_geometry(Rng& rng, const SimConfig& cfg);

// Stateful arrival sampler: keeps the running second-moment estimate,
// seeded with the closed-form uniform value.
class ArrivalProcess {
public:
    explicit ArrivalProcess(const SimConfig& cfg);
    ArrivalBatch sample(Rng& rng);
    const std::vector<double>& second_moments() const { return eta_; }

private:
    const SimConfig* cfg_;
    std::vector<double> eta_;
    long long count_ = 1; // the closed-form prior counts as one sample
};

// One-shot convenience with the closed-form second-moment estimate.
ArrivalBatch sample_arrivals(Rng& rng, const SimConfig& cfg);

// Everything one follower's decision depends on in a slot.
struct FollowerSlot {
    double arrival = 0.0;
    double cycles_per_bit = 0.0; // w for this slot's task
    int leo = 0;                 // serving LEO (nearest by slant range)
    double leo_x = 0.0;
    double leo_y = 0.0;
    double loss_db = 0.0;        // link loss to the serving LEO
};

struct SlotContext {
    long long t = 0;
    std::vector<FollowerSlot> followers;
};

struct SlotResult {
    std::vector<double> served;         // post-demotion D^{t1/t2}, bits
    std::vector<double> interference_w; // I on the follower's channel (0 if local)
    std::vector<double> overhead_s;     // per-follower C_SBC
    std::vector<bool> demoted;          // offload pushed back to local
    ChannelAssignment assignment;       // post-demotion
    // Interference tables per (mbs, channel), row-major: from the intended
    // assignment (what the demotion rule saw) and the final one.
    std::vector<double> i_intended;
    std::vector<double> i_final;

    double table(const std::vector<double>& t, int mbs, int channel, int n_channels) const {
        return t[static_cast<size_t>(mbs) * n_channels + channel];
    }
};

class Environment {
public:
    Environment(const SimConfig& cfg, Rng rng);

    const SimConfig& config() const { return cfg_; }

    // Advance the stochastic state and build the slot context.
    SlotContext begin_slot();

    ActionBox action_box(const FollowerSlot& fs, double queue) const;

    FollowerState observe(const FollowerSlot& fs, double queue, double price) const;

    // Apply joint actions: intended assignment -> interference ->
    // demotion of capped offloads -> served bits and overheads.
    SlotResult resolve(const SlotContext& ctx,
                       const std::vector<FollowerAction>& actions) const;

    const std::vector<double>& second_moments() const { return arrivals_.second_moments(); }

private:
    SimConfig cfg_;
    ArrivalProcess arrivals_;
    Rng arrival_rng_;
    Rng geom_rng_;
    Rng link_rng_;
    long long t_ = 0;
};

// Largest per-slot service any action can realize under `cfg`; used for
// the drift-bound constants.
double max_service_bits(const SimConfig& cfg);

} // namespace sgdtn
