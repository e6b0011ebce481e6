#include "sgdtn/sweep.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sgdtn/config_io.hpp"
#include "sgdtn/trainer.hpp"

namespace sgdtn {

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::V: return "V";
        case SweepAxis::Bandwidth: return "bandwidth";
        case SweepAxis::TxPower: return "tx_power";
        case SweepAxis::PriceCap: return "price_cap";
        case SweepAxis::Delta: return "delta";
        case SweepAxis::MbsFreq: return "mbs_freq";
        case SweepAxis::UnitCost: return "unit_cost";
        case SweepAxis::NFollowers: return "n_followers";
    }
    return "?";
}

std::optional<SweepAxis> parse_axis(const std::string& name) {
    if (name == "V" || name == "v") return SweepAxis::V;
    if (name == "bandwidth") return SweepAxis::Bandwidth;
    if (name == "tx_power") return SweepAxis::TxPower;
    if (name == "price_cap") return SweepAxis::PriceCap;
    if (name == "delta") return SweepAxis::Delta;
    if (name == "mbs_freq") return SweepAxis::MbsFreq;
    if (name == "unit_cost") return SweepAxis::UnitCost;
    if (name == "n_followers") return SweepAxis::NFollowers;
    return std::nullopt;
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
    if (values.size() > 1) {
        const bool increasing = values[1] > values[0];
        for (size_t i = 1; i < values.size(); ++i) {
            if (increasing ? values[i] <= values[i - 1] : values[i] >= values[i - 1])
                throw std::invalid_argument("sweep: values must be strictly monotone");
        }
    }
    if (repeats < 1) throw std::invalid_argument("sweep: repeats must be >= 1");
}

SimConfig apply_axis(const SimConfig& cfg, SweepAxis axis, double value) {
    SimConfig out = cfg;
    switch (axis) {
        case SweepAxis::V: out.v_lyapunov = value; break;
        case SweepAxis::Bandwidth: out.channel_bandwidth = value; break;
        case SweepAxis::TxPower: out.tx_power = value; break;
        case SweepAxis::PriceCap: out.price_cap = value; break;
        case SweepAxis::Delta: out.model_tx_factor = value; break;
        case SweepAxis::MbsFreq: out.mbs_cpu_freq = value; break;
        case SweepAxis::UnitCost: out.unit_energy_cost = value; break;
        case SweepAxis::NFollowers: out.followers_per_mbs = static_cast<int>(value); break;
    }
    out.validate();
    return out;
}

RunArtifacts run_single(const SimConfig& cfg, PolicyKind kind, uint64_t seed,
                        const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    Runner runner(cfg, kind, seed);
    runner.train();
    EpisodeResult res = runner.evaluate();

    RunArtifacts art;
    art.records_path = out_dir + "/records.csv";
    write_records_csv(art.records_path, res.metrics);
    write_transitions_csv(out_dir + "/transitions.csv", res.transitions);
    write_resolved_config(out_dir + "/resolved_config.txt", cfg);
    if (kind == PolicyKind::Madfrl) runner.save_checkpoints(out_dir + "/checkpoints");
    runner.ledger().export_records(out_dir + "/ledger.csv");
    art.summary = summarize(res.metrics);
    art.records = std::move(res.metrics);
    return art;
}

SweepResult run_sweep(const SweepSpec& spec, const SimConfig& cfg, PolicyKind kind,
                      const std::string& out_dir) {
    spec.validate();
    std::filesystem::create_directories(out_dir);

    struct Point {
        double value;
        uint64_t seed;
        std::string dir;
    };
    std::vector<Point> points;
    for (double value : spec.values) {
        for (int rep = 0; rep < spec.repeats; ++rep) {
            std::ostringstream dir;
            dir << out_dir << '/' << to_string(spec.axis) << '_' << value << "_seed"
                << (cfg.seed + static_cast<uint64_t>(rep));
            points.push_back({value, cfg.seed + static_cast<uint64_t>(rep), dir.str()});
        }
    }

    std::vector<SummaryRow> rows(points.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            const Point& p = points[i];
            const SimConfig point_cfg = apply_axis(cfg, spec.axis, p.value);
            SimConfig seeded = point_cfg;
            seeded.seed = p.seed;
            const RunArtifacts art = run_single(seeded, kind, p.seed, p.dir);
            rows[i] = SummaryRow{p.value, p.seed, art.summary};
        }
    };

    const int workers = std::min<int>(cfg.sweep_workers, static_cast<int>(points.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    result.rows = std::move(rows);
    result.summary_path = out_dir + "/summary.csv";
    result.summary_agg_path = out_dir + "/summary_agg.csv";
    write_summary_csv(result.summary_path, result.rows);
    write_summary_agg_csv(result.summary_agg_path, result.rows);
    return result;
}

} // namespace sgdtn
