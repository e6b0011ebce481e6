// Parameter sweeps: one full train + evaluate run per (axis value, seed),
// per-run record CSVs plus the summary schema, parallel across points with
// one RNG stream and output file per point.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgdtn/config.hpp"
#include "sgdtn/episode.hpp"
#include "sgdtn/metrics.hpp"

namespace sgdtn {

enum class SweepAxis {
    V,
    Bandwidth,
    TxPower,
    PriceCap,
    Delta,
    MbsFreq,
    UnitCost,
    NFollowers,
};

const char* to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(const std::string& name);

struct SweepSpec {
    SweepAxis axis = SweepAxis::V;
    std::vector<double> values; // non-empty, strictly monotone
    int repeats = 1;            // seeds per value

    void validate() const;
};

SimConfig apply_axis(const SimConfig& cfg, SweepAxis axis, double value);

struct RunArtifacts {
    std::string records_path;
    RunSummary summary;
    std::vector<MetricsRecord> records;
};

// Train (when applicable) and evaluate one policy; writes records.csv,
// transitions.csv, the resolved config, checkpoints for learned policies,
// and the ledger export.
RunArtifacts run_single(const SimConfig& cfg, PolicyKind kind, uint64_t seed,
                        const std::string& out_dir);

struct SweepResult {
    std::vector<SummaryRow> rows; // per (value, seed), in spec order
    std::string summary_path;
    std::string summary_agg_path;
};

SweepResult run_sweep(const SweepSpec& spec, const SimConfig& cfg, PolicyKind kind,
                      const std::string& out_dir);

} // namespace sgdtn
