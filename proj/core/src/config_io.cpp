#include "sgdtn/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sgdtn/metrics.hpp"

namespace sgdtn {

namespace {

struct KeyHandler {
    std::function<void(SimConfig&, const std::string&)> set;
    std::function<std::string(const SimConfig&)> get;
};

double parse_double(const std::string& s) {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

long long parse_int(const std::string& s) {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::invalid_argument("not a boolean: '" + s + "'");
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const size_t a = item.find_first_not_of(" \t");
        const size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty list entry");
        out.push_back(static_cast<int>(parse_int(item.substr(a, b - a + 1))));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::string render_int_list(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

#define DOUBLE_KEY(name) \
    {#name, {[](SimConfig& c, const std::string& v) { c.name = parse_double(v); }, \
             [](const SimConfig& c) { return format_double(c.name); }}}
#define INT_KEY(name) \
    {#name, {[](SimConfig& c, const std::string& v) { c.name = static_cast<int>(parse_int(v)); }, \
             [](const SimConfig& c) { return std::to_string(c.name); }}}
#define BOOL_KEY(name) \
    {#name, {[](SimConfig& c, const std::string& v) { c.name = parse_bool(v); }, \
             [](const SimConfig& c) { return c.name ? std::string("true") : std::string("false"); }}}

const std::vector<std::pair<std::string, KeyHandler>>& registry() {
    static const std::vector<std::pair<std::string, KeyHandler>> reg = {
        INT_KEY(n_mbs),
        INT_KEY(followers_per_mbs),
        INT_KEY(n_leo),
        INT_KEY(n_channels),
        DOUBLE_KEY(slot_duration),
        DOUBLE_KEY(arrival_lo),
        DOUBLE_KEY(arrival_hi),
        DOUBLE_KEY(cycles_per_bit_lo),
        DOUBLE_KEY(cycles_per_bit_hi),
        DOUBLE_KEY(x_lo),
        DOUBLE_KEY(x_hi),
        DOUBLE_KEY(y_lo),
        DOUBLE_KEY(y_hi),
        DOUBLE_KEY(carrier_freq),
        DOUBLE_KEY(light_speed),
        DOUBLE_KEY(eps_los_lo),
        DOUBLE_KEY(eps_los_hi),
        DOUBLE_KEY(eps_nlos_lo),
        DOUBLE_KEY(eps_nlos_hi),
        DOUBLE_KEY(b1),
        DOUBLE_KEY(b2),
        DOUBLE_KEY(noise_power),
        DOUBLE_KEY(tx_power),
        DOUBLE_KEY(channel_bandwidth),
        DOUBLE_KEY(i_max),
        DOUBLE_KEY(v_lyapunov),
        DOUBLE_KEY(unit_energy_cost),
        DOUBLE_KEY(price_cap),
        DOUBLE_KEY(baseline_price),
        INT_KEY(f1_window),
        DOUBLE_KEY(mbs_cpu_freq),
        DOUBLE_KEY(uplink_rate),
        DOUBLE_KEY(downlink_rate),
        DOUBLE_KEY(model_tx_factor),
        DOUBLE_KEY(model_size),
        DOUBLE_KEY(block_min),
        DOUBLE_KEY(block_max),
        INT_KEY(n_delegates),
        DOUBLE_KEY(follower_cpu_max),
        DOUBLE_KEY(mamcc_cpu_pool),
        {"hidden_dims",
         {[](SimConfig& c, const std::string& v) { c.hidden_dims = parse_int_list(v); },
          [](const SimConfig& c) { return render_int_list(c.hidden_dims); }}},
        DOUBLE_KEY(lr_actor),
        DOUBLE_KEY(lr_critic),
        DOUBLE_KEY(gamma),
        DOUBLE_KEY(explore_eps0),
        DOUBLE_KEY(explore_eps_decay),
        DOUBLE_KEY(explore_sigma0),
        DOUBLE_KEY(explore_sigma_decay),
        DOUBLE_KEY(reward_scale),
        INT_KEY(episode_slots),
        INT_KEY(train_episodes),
        INT_KEY(fed_every),
        DOUBLE_KEY(fl_agg_lr),
        BOOL_KEY(flip_price_sign),
        INT_KEY(maml_rounds),
        DOUBLE_KEY(maml_inner_lr),
        DOUBLE_KEY(maml_outer_lr),
        INT_KEY(maml_inner_steps),
        INT_KEY(maml_traj_per_task),
        INT_KEY(maml_task_batch),
        DOUBLE_KEY(maml_arrival_jitter),
        DOUBLE_KEY(maml_geom_jitter),
        DOUBLE_KEY(maml_price_jitter),
        {"maml_wrap",
         {[](SimConfig& c, const std::string& v) {
              if (v != "actor" && v != "critic" && v != "both")
                  throw std::invalid_argument("must be one of actor|critic|both");
              c.maml_wrap = v;
          },
          [](const SimConfig& c) { return c.maml_wrap; }}},
        INT_KEY(oracle_f_levels),
        INT_KEY(oracle_block_levels),
        INT_KEY(sweep_workers),
        {"seed",
         {[](SimConfig& c, const std::string& v) { c.seed = static_cast<uint64_t>(parse_int(v)); },
          [](const SimConfig& c) { return std::to_string(c.seed); }}},
    };
    return reg;
}

#undef DOUBLE_KEY
#undef INT_KEY
#undef BOOL_KEY

const KeyHandler* find_key(const std::string& key) {
    for (const auto& [name, handler] : registry())
        if (name == key) return &handler;
    return nullptr;
}

} // namespace

ConfigParseResult parse_config_text(const std::string& text) {
    ConfigParseResult result;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const size_t comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const size_t last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            result.errors.push_back({line_no, "", "expected 'key = value'"});
            continue;
        }
        auto trim = [](std::string s) {
            const size_t a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const size_t b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            result.errors.push_back({line_no, "", "missing key"});
            continue;
        }
        const KeyHandler* handler = find_key(key);
        if (!handler) {
            result.errors.push_back({line_no, key, "unknown key"});
            continue;
        }
        if (value.empty()) {
            result.errors.push_back({line_no, key, "missing value"});
            continue;
        }
        try {
            handler->set(result.config, value);
        } catch (const std::exception& e) {
            result.errors.push_back({line_no, key, e.what()});
        }
    }
    if (result.errors.empty()) {
        try {
            result.config.validate();
        } catch (const std::exception& e) {
            result.errors.push_back({0, "", e.what()});
        }
    }
    return result;
}

ConfigParseResult load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigParseResult result;
        result.errors.push_back({0, "", "cannot open " + path});
        return result;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string render_config(const SimConfig& cfg) {
    std::string out;
    for (const auto& [name, handler] : registry())
        out += name + " = " + handler.get(cfg) + "\n";
    return out;
}

void write_resolved_config(const std::string& path, const SimConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_resolved_config: cannot open " + path);
    out << render_config(cfg);
}

std::string format_errors(const std::vector<ConfigError>& errors) {
    std::string out;
    for (const auto& e : errors) {
        out += "line " + std::to_string(e.line);
        if (!e.key.empty()) out += " [" + e.key + "]";
        out += ": " + e.message + "\n";
    }
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [name, handler] : registry()) keys.push_back(name);
    return keys;
}

} // namespace sgdtn
