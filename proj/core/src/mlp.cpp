#include "sgdtn/mlp.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sgdtn {

static constexpr uint32_t kMagic = 0x5347444eu; // "SGDN"
static constexpr uint32_t kVersion = 1;

Mlp Mlp::init(const std::vector<int>& dims, Rng& rng) {
    if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
    Mlp net = zeros(dims);
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        const double fan_in = dims[l];
        const double fan_out = dims[l + 1];
        const double r = std::sqrt(6.0 / (fan_in + fan_out));
        for (auto& w : net.weights_[l]) w = rng.uniform(-r, r);
    }
    return net;
}

Mlp Mlp::zeros(const std::vector<int>& dims) {
    if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
    Mlp net;
    net.dims_ = dims;
    net.weights_.resize(dims.size() - 1);
    net.biases_.resize(dims.size() - 1);
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        net.weights_[l].assign(static_cast<size_t>(dims[l + 1]) * dims[l], 0.0);
        net.biases_[l].assign(static_cast<size_t>(dims[l + 1]), 0.0);
    }
    return net;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
    Trace scratch;
    return forward(x, scratch);
}

std::vector<double> Mlp::forward(std::span<const double> x, Trace& trace) const {
    if (static_cast<int>(x.size()) != input_dim())
        throw std::invalid_argument("Mlp::forward: input size mismatch");
    trace.layer_in.clear();
    std::vector<double> cur(x.begin(), x.end());
    const size_t n_layers = weights_.size();
    for (size_t l = 0; l < n_layers; ++l) {
        trace.layer_in.push_back(cur);
        const int in = dims_[l];
        const int out = dims_[l + 1];
        std::vector<double> next(static_cast<size_t>(out));
        for (int j = 0; j < out; ++j) {
            double acc = biases_[l][static_cast<size_t>(j)];
            const double* row = &weights_[l][static_cast<size_t>(j) * in];
            for (int i = 0; i < in; ++i) acc += row[i] * cur[static_cast<size_t>(i)];
            next[static_cast<size_t>(j)] = (l + 1 < n_layers) ? std::tanh(acc) : acc;
        }
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> Mlp::backward(const Trace& trace, std::span<const double> dy,
                                  Mlp& grad) const {
    if (!same_layout(grad)) throw std::invalid_argument("Mlp::backward: gradient layout mismatch");
    if (trace.layer_in.size() != weights_.size())
        throw std::invalid_argument("Mlp::backward: stale trace");

    std::vector<double> delta(dy.begin(), dy.end());
    for (size_t li = weights_.size(); li-- > 0;) {
        const int in = dims_[li];
        const int out = dims_[li + 1];
        const auto& inputs = trace.layer_in[li];

        // Hidden layers have tanh outputs; fold the activation derivative
        // into delta. The layer's output equals the next layer's input.
        if (li + 1 < weights_.size()) {
            const auto& activated = trace.layer_in[li + 1];
            for (int j = 0; j < out; ++j)
                delta[static_cast<size_t>(j)] *= 1.0 - activated[static_cast<size_t>(j)] * activated[static_cast<size_t>(j)];
        }

        std::vector<double> prev_delta(static_cast<size_t>(in), 0.0);
        for (int j = 0; j < out; ++j) {
            const double d = delta[static_cast<size_t>(j)];
            grad.biases_[li][static_cast<size_t>(j)] += d;
            double* grow = &grad.weights_[li][static_cast<size_t>(j) * in];
            const double* wrow = &weights_[li][static_cast<size_t>(j) * in];
            for (int i = 0; i < in; ++i) {
                grow[i] += d * inputs[static_cast<size_t>(i)];
                prev_delta[static_cast<size_t>(i)] += d * wrow[i];
            }
        }
        delta = std::move(prev_delta);
    }
    return delta;
}

size_t Mlp::param_count() const {
    size_t count = 0;
    for (size_t l = 0; l < weights_.size(); ++l)
        count += weights_[l].size() + biases_[l].size();
    return count;
}

std::vector<double> Mlp::flatten() const {
    std::vector<double> flat;
    flat.reserve(param_count());
    for (size_t l = 0; l < weights_.size(); ++l) {
        flat.insert(flat.end(), weights_[l].begin(), weights_[l].end());
        flat.insert(flat.end(), biases_[l].begin(), biases_[l].end());
    }
    return flat;
}

void Mlp::unflatten(std::span<const double> flat) {
    if (flat.size() != param_count()) throw std::invalid_argument("Mlp::unflatten: size mismatch");
    size_t pos = 0;
    for (size_t l = 0; l < weights_.size(); ++l) {
        std::memcpy(weights_[l].data(), flat.data() + pos, weights_[l].size() * sizeof(double));
        pos += weights_[l].size();
        std::memcpy(biases_[l].data(), flat.data() + pos, biases_[l].size() * sizeof(double));
        pos += biases_[l].size();
    }
}

void Mlp::axpy(double scale, const Mlp& other) {
    if (!same_layout(other)) throw std::invalid_argument("Mlp::axpy: layout mismatch");
    for (size_t l = 0; l < weights_.size(); ++l) {
        for (size_t i = 0; i < weights_[l].size(); ++i) weights_[l][i] += scale * other.weights_[l][i];
        for (size_t i = 0; i < biases_[l].size(); ++i) biases_[l][i] += scale * other.biases_[l][i];
    }
}

void Mlp::scale(double s) {
    for (size_t l = 0; l < weights_.size(); ++l) {
        for (auto& w : weights_[l]) w *= s;
        for (auto& b : biases_[l]) b *= s;
    }
}

double Mlp::max_abs_param() const {
    double m = 0.0;
    for (size_t l = 0; l < weights_.size(); ++l) {
        for (double w : weights_[l]) m = std::max(m, std::fabs(w));
        for (double b : biases_[l]) m = std::max(m, std::fabs(b));
    }
    return m;
}

void Mlp::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("Mlp::save: cannot open " + path);
    const uint32_t n_dims = static_cast<uint32_t>(dims_.size());
    out.write(reinterpret_cast<const char*>(&kMagic), sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    out.write(reinterpret_cast<const char*>(&n_dims), sizeof n_dims);
    for (int d : dims_) {
        const uint32_t v = static_cast<uint32_t>(d);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    const std::vector<double> flat = flatten();
    out.write(reinterpret_cast<const char*>(flat.data()),
              static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!out) throw std::runtime_error("Mlp::save: write failed for " + path);
}

Mlp Mlp::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("Mlp::load: cannot open " + path);
    uint32_t magic = 0, version = 0, n_dims = 0;
    in.read(reinterpret_cast<char*>(&magic), sizeof magic);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&n_dims), sizeof n_dims);
    if (!in || magic != kMagic) throw std::runtime_error("Mlp::load: bad header in " + path);
    if (version != kVersion) throw std::runtime_error("Mlp::load: unsupported version");
    if (n_dims < 2 || n_dims > 64) throw std::runtime_error("Mlp::load: implausible layout");
    std::vector<int> dims(n_dims);
    for (auto& d : dims) {
        uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        d = static_cast<int>(v);
    }
    Mlp net = zeros(dims);
    std::vector<double> flat(net.param_count());
    in.read(reinterpret_cast<char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!in) throw std::runtime_error("Mlp::load: truncated file " + path);
    net.unflatten(flat);
    return net;
}

} // namespace sgdtn
