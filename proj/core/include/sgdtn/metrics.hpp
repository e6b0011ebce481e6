// Per-slot metrics records, the CSV schemas, and summary statistics.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sgdtn {

struct MetricsRecord {
    long long slot = 0;
    int mbs = 0;
    int follower = 0;
    double queue_bits = 0.0;       // backlog after the slot's update
    double throughput_bits = 0.0;  // served this slot
    double interference_w = 0.0;
    double overhead_s = 0.0;
    double price = 0.0;
    double leader_profit = 0.0;    // slot total, repeated per follower
    std::string policy;
    uint64_t seed = 0;
};

struct RunSummary {
    double mean_throughput = 0.0;
    double mean_queue = 0.0;
    double mean_interference = 0.0;
    double mean_overhead = 0.0;
    double mean_profit = 0.0; // per-slot leader profit
};

RunSummary summarize(std::span<const MetricsRecord> records);

// UTF-8 CSV with a header row, one record per (slot, follower). Doubles are
// written with %.17g so a rerun is byte-identical and recomputation is
// lossless.
void write_records_csv(const std::string& path,
                       std::span<const MetricsRecord> records);

std::vector<MetricsRecord> read_records_csv(const std::string& path);

struct SummaryRow {
    double axis_value = 0.0;
    uint64_t seed = 0;
    RunSummary summary;
};

void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows);

// Per-axis-value mean and standard deviation across seeds.
void write_summary_agg_csv(const std::string& path, std::span<const SummaryRow> rows);

std::string format_double(double v);

} // namespace sgdtn
