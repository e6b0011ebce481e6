#include "sgdtn/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sgdtn {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunSummary summarize(std::span<const MetricsRecord> records) {
    RunSummary s;
    if (records.empty()) return s;
    double profit_sum = 0.0;
    std::map<long long, double> slot_profit;
    for (const auto& r : records) {
        s.mean_throughput += r.throughput_bits;
        s.mean_queue += r.queue_bits;
        s.mean_interference += r.interference_w;
        s.mean_overhead += r.overhead_s;
        slot_profit[r.slot] = r.leader_profit;
    }
    const double n = static_cast<double>(records.size());
    s.mean_throughput /= n;
    s.mean_queue /= n;
    s.mean_interference /= n;
    s.mean_overhead /= n;
    for (const auto& [slot, p] : slot_profit) profit_sum += p;
    s.mean_profit = slot_profit.empty() ? 0.0 : profit_sum / static_cast<double>(slot_profit.size());
    return s;
}

void write_records_csv(const std::string& path,
                       std::span<const MetricsRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_records_csv: cannot open " + path);
    out << "slot,mbs,follower,queue_bits,throughput_bits,interference_w,"
           "overhead_s,price,leader_profit,policy,seed\n";
    for (const auto& r : records) {
        out << r.slot << ',' << r.mbs << ',' << r.follower << ','
            << format_double(r.queue_bits) << ',' << format_double(r.throughput_bits)
            << ',' << format_double(r.interference_w) << ','
            << format_double(r.overhead_s) << ',' << format_double(r.price) << ','
            << format_double(r.leader_profit) << ',' << r.policy << ',' << r.seed
            << '\n';
    }
    if (!out) throw std::runtime_error("write_records_csv: write failed for " + path);
}

std::vector<MetricsRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records_csv: cannot open " + path);
    std::vector<MetricsRecord> records;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        MetricsRecord r;
        auto next = [&]() {
            if (!std::getline(ss, field, ','))
                throw std::runtime_error("read_records_csv: short row in " + path);
            return field;
        };
        r.slot = std::stoll(next());
        r.mbs = std::stoi(next());
        r.follower = std::stoi(next());
        r.queue_bits = std::stod(next());
        r.throughput_bits = std::stod(next());
        r.interference_w = std::stod(next());
        r.overhead_s = std::stod(next());
        r.price = std::stod(next());
        r.leader_profit = std::stod(next());
        r.policy = next();
        r.seed = std::stoull(next());
        records.push_back(std::move(r));
    }
    return records;
}

void write_summary_csv(const std::string& path, std::span<const SummaryRow> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_summary_csv: cannot open " + path);
    out << "axis_value,seed,mean_throughput,mean_queue,mean_interference,"
           "mean_overhead,mean_profit\n";
    for (const auto& r : rows) {
        out << format_double(r.axis_value) << ',' << r.seed << ','
            << format_double(r.summary.mean_throughput) << ','
            << format_double(r.summary.mean_queue) << ','
            << format_double(r.summary.mean_interference) << ','
            << format_double(r.summary.mean_overhead) << ','
            << format_double(r.summary.mean_profit) << '\n';
    }
    if (!out) throw std::runtime_error("write_summary_csv: write failed for " + path);
}

void write_summary_agg_csv(const std::string& path, std::span<const SummaryRow> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_summary_agg_csv: cannot open " + path);
    out << "axis_value,n_seeds,mean_throughput,std_throughput,mean_queue,std_queue,"
           "mean_interference,std_interference,mean_overhead,std_overhead,"
           "mean_profit,std_profit\n";

    // Preserve first-seen axis order (the sweep emits values in spec order).
    std::vector<double> order;
    std::map<double, std::vector<const SummaryRow*>> groups;
    for (const auto& r : rows) {
        if (!groups.count(r.axis_value)) order.push_back(r.axis_value);
        groups[r.axis_value].push_back(&r);
    }
    auto mean_std = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - m) * (x - m);
        var /= static_cast<double>(v.size());
        return std::pair<double, double>(m, std::sqrt(var));
    };
    for (double value : order) {
        const auto& g = groups[value];
        std::vector<double> tp, q, itf, oh, pf;
        for (const auto* r : g) {
            tp.push_back(r->summary.mean_throughput);
            q.push_back(r->summary.mean_queue);
            itf.push_back(r->summary.mean_interference);
            oh.push_back(r->summary.mean_overhead);
            pf.push_back(r->summary.mean_profit);
        }
        const auto [tm, ts] = mean_std(tp);
        const auto [qm, qs] = mean_std(q);
        const auto [im, is] = mean_std(itf);
        const auto [om, os] = mean_std(oh);
        const auto [pm, ps] = mean_std(pf);
        out << format_double(value) << ',' << g.size() << ',' << format_double(tm)
            << ',' << format_double(ts) << ',' << format_double(qm) << ','
            << format_double(qs) << ',' << format_double(im) << ','
            << format_double(is) << ',' << format_double(om) << ','
            << format_double(os) << ',' << format_double(pm) << ','
            << format_double(ps) << '\n';
    }
    if (!out) throw std::runtime_error("write_summary_agg_csv: write failed for " + path);
}

} // namespace sgdtn
