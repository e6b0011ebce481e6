// Small dense feed-forward approximator with hand-written gradients.
// tanh hidden layers, linear output. Doubles throughout so the analytic
// gradients can be checked against central finite differences tightly.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sgdtn/rng.hpp"

namespace sgdtn {

class Mlp {
public:
    Mlp() = default;

    // dims = {input, hidden..., output}; weights ~ U(-r, r) with
    // r = sqrt(6 / (fan_in + fan_out)), biases zero.
    static Mlp init(const std::vector<int>& dims, Rng& rng);
    static Mlp zeros(const std::vector<int>& dims);

    const std::vector<int>& dims() const { return dims_; }
    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }
    bool same_layout(const Mlp& other) const { return dims_ == other.dims_; }

    // Activations recorded during a forward pass, consumed by backward().
    struct Trace {
        std::vector<std::vector<double>> layer_in; // inputs to each layer
    };

    std::vector<double> forward(std::span<const double> x) const;
    std::vector<double> forward(std::span<const double> x, Trace& trace) const;

    // Backpropagate dL/dy through the traced pass. Parameter gradients are
    // accumulated into `grad` (same layout); returns dL/dx.
    std::vector<double> backward(const Trace& trace, std::span<const double> dy,
                                 Mlp& grad) const;

    // Flat parameter vector view (weights then biases, layer by layer).
    size_t param_count() const;
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> flat);

    // this += scale * other, element-wise. Layouts must match.
    void axpy(double scale, const Mlp& other);
    void scale(double s);

    double max_abs_param() const;

    // Versioned flat binary with a layout header.
    void save(const std::string& path) const;
    static Mlp load(const std::string& path);

    friend bool operator==(const Mlp& a, const Mlp& b) {
        return a.dims_ == b.dims_ && a.weights_ == b.weights_ && a.biases_ == b.biases_;
    }

private:
    std::vector<int> dims_;
    // weights_[l] is row-major (dims_[l+1] x dims_[l]).
    std::vector<std::vector<double>> weights_;
    std::vector<std::vector<double>> biases_;
};

} // namespace sgdtn
