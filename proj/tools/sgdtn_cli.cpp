// Experiment harness for the satellite-ground digital-twin scheduler:
// seeded runs, parameter sweeps, per-slot oracle certification, config
// validation, and ledger audits. CSV is the output contract; see README.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgdtn/config_io.hpp"
#include "sgdtn/sweep.hpp"
#include "sgdtn/trainer.hpp"

namespace {

sgdtn::SimConfig load_or_die(const std::string& path) {
    if (path.empty()) {
        sgdtn::SimConfig cfg;
        cfg.validate();
        return cfg;
    }
    const sgdtn::ConfigParseResult parsed = sgdtn::load_config(path);
    if (!parsed.ok()) {
        std::cerr << "config errors in " << path << ":\n"
                  << sgdtn::format_errors(parsed.errors);
        std::exit(2);
    }
    return parsed.config;
}

sgdtn::PolicyKind policy_or_die(const std::string& name) {
    const auto kind = sgdtn::parse_policy(name);
    if (!kind) {
        std::cerr << "unknown policy '" << name << "'\n";
        std::exit(2);
    }
    return *kind;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    return values;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satellite-ground digital twin network scheduler harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string policy_name = "madfrl";
    std::string out_dir = "out";
    std::string axis_name = "V";
    std::string values_csv;
    uint64_t seed = 0;
    bool seed_set = false;
    int repeats = 1;

    auto add_common = [&](CLI::App* cmd, bool with_policy) {
        cmd->add_option("--config", config_path, "config file (key = value)");
        cmd->add_option("--seed", seed, "RNG seed (overrides config)")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--out", out_dir, "output directory");
        if (with_policy)
            cmd->add_option("--policy", policy_name,
                            "madfrl | marto | magcs | mamcc | oracle");
    };

    CLI::App* run = app.add_subcommand("run", "train and evaluate one policy");
    add_common(run, true);

    CLI::App* sweep = app.add_subcommand("sweep", "full run per axis value and seed");
    add_common(sweep, true);
    sweep->add_option("--axis", axis_name,
                      "V | bandwidth | tx_power | price_cap | delta | mbs_freq | "
                      "unit_cost | n_followers");
    sweep->add_option("--values", values_csv, "comma-separated axis values")->required();
    sweep->add_option("--repeats", repeats, "seeds per value");

    CLI::App* verify = app.add_subcommand(
        "oracle-verify", "certify a trace against the per-slot enumeration oracle");
    add_common(verify, true);

    CLI::App* validate = app.add_subcommand("validate-config", "check a config file");
    validate->add_option("--config", config_path, "config file")->required();
    validate->add_option("--out", out_dir, "directory for the resolved config");

    CLI::App* audit = app.add_subcommand("ledger-audit",
                                         "run federation rounds and audit the ledger export");
    add_common(audit, false);

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) {
        const sgdtn::ConfigParseResult parsed = sgdtn::load_config(config_path);
        if (!parsed.ok()) {
            std::cerr << sgdtn::format_errors(parsed.errors);
            return 2;
        }
        std::filesystem::create_directories(out_dir);
        const std::string resolved = out_dir + "/resolved_config.txt";
        sgdtn::write_resolved_config(resolved, parsed.config);
        std::cout << "config ok; resolved -> " << resolved << "\n";
        return 0;
    }

    sgdtn::SimConfig cfg = load_or_die(config_path);
    if (seed_set) cfg.seed = seed;

    if (run->parsed()) {
        const sgdtn::PolicyKind kind = policy_or_die(policy_name);
        const sgdtn::RunArtifacts art = sgdtn::run_single(cfg, kind, cfg.seed, out_dir);
        std::printf("policy=%s seed=%llu slots=%d\n", sgdtn::to_string(kind),
                    static_cast<unsigned long long>(cfg.seed), cfg.episode_slots);
        std::printf("mean_throughput=%.6g mean_queue=%.6g mean_interference=%.6g "
                    "mean_overhead=%.6g mean_profit=%.6g\n",
                    art.summary.mean_throughput, art.summary.mean_queue,
                    art.summary.mean_interference, art.summary.mean_overhead,
                    art.summary.mean_profit);
        std::printf("records -> %s\n", art.records_path.c_str());
        return 0;
    }

    if (sweep->parsed()) {
        const sgdtn::PolicyKind kind = policy_or_die(policy_name);
        const auto axis = sgdtn::parse_axis(axis_name);
        if (!axis) {
            std::cerr << "unknown axis '" << axis_name << "'\n";
            return 2;
        }
        sgdtn::SweepSpec spec;
        spec.axis = *axis;
        spec.values = parse_values(values_csv);
        spec.repeats = repeats;
        try {
            const sgdtn::SweepResult result = sgdtn::run_sweep(spec, cfg, kind, out_dir);
            std::printf("sweep axis=%s points=%zu summary -> %s\n",
                        sgdtn::to_string(*axis), result.rows.size(),
                        result.summary_path.c_str());
        } catch (const std::exception& e) {
            std::cerr << "sweep failed: " << e.what() << "\n";
            return 1;
        }
        return 0;
    }

    if (verify->parsed()) {
        const sgdtn::PolicyKind kind = policy_or_die(policy_name);
        sgdtn::Runner runner(cfg, kind, cfg.seed);
        runner.train();
        const sgdtn::EpisodeResult trace = runner.evaluate(true);
        const sgdtn::OracleVerifyResult res = sgdtn::oracle_verify(cfg, trace);
        std::filesystem::create_directories(out_dir);
        sgdtn::write_records_csv(out_dir + "/records.csv", trace.metrics);
        std::printf("checked=%lld violations=%lld mean_logged=%.6g mean_oracle=%.6g "
                    "ratio=%.4f\n",
                    res.checked, res.violations, res.mean_logged, res.mean_oracle,
                    res.ratio);
        std::printf("oracle-maximal: %s\n", res.all_maximal ? "yes" : "NO");
        return res.all_maximal ? 0 : 1;
    }

    if (audit->parsed()) {
        sgdtn::Runner runner(cfg, sgdtn::PolicyKind::Madfrl, cfg.seed);
        runner.train();
        std::filesystem::create_directories(out_dir);
        const std::string path = out_dir + "/ledger.csv";
        runner.ledger().export_records(path);
        const auto& records = runner.ledger().records();
        bool heights_ok = true;
        for (size_t i = 0; i < records.size(); ++i)
            if (records[i].height != static_cast<long long>(i) + 1) heights_ok = false;
        std::printf("ledger height=%lld strictly-increasing=%s export -> %s\n",
                    runner.ledger().height(), heights_ok ? "yes" : "NO", path.c_str());
        return heights_ok ? 0 : 1;
    }
    return 0;
}
