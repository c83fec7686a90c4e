#include "gradsense/model.hpp"

#include <cmath>
#include <stdexcept>

#include "gradsense/errors.hpp"

namespace gradsense {

namespace {

// u_i = sum_k w_k x_ik + b, accumulated in feature order.
std::vector<double> preactivations(const ModelParams& params, const Dataset& data) {
    std::vector<double> u(data.samples());
    for (std::size_t i = 0; i < data.samples(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < data.features(); ++k) s += params.weights[k] * data.x(i, k);
        u[i] = s + params.bias;
    }
    return u;
}

// MSE jet with the seed routed into the pre-activation: coeff(i) is
// d(u_i)/d(seeded coordinate) — x_ij for weight j, 1 for the bias.
template <class CoeffFn>
Jet3 mse_jet(const Dataset& data, const std::vector<double>& u, CoeffFn coeff) {
    Jet3 acc = constant(0.0);
    for (std::size_t i = 0; i < data.samples(); ++i) {
        const Jet3 pre{u[i], coeff(i), 0.0, 0.0};
        const Jet3 residual = tanh(pre) - constant(data.target[i]);
        acc = acc + square(residual);
    }
    return scale(acc, 1.0 / static_cast<double>(data.samples()));
}

void check_shapes(const ModelParams& params, const Dataset& data) {
    if (data.samples() == 0) throw DataError("empty dataset");
    if (params.weights.size() != data.features()) {
        throw std::invalid_argument("weight count does not match feature count");
    }
}

}  // namespace

std::vector<double> glorot_init(std::size_t n_in, std::size_t n_out, Rng& rng) {
    if (n_in < 1 || n_out < 1) throw std::invalid_argument("glorot_init: fan sizes must be >= 1");
    const double sd = std::sqrt(2.0 / static_cast<double>(n_in + n_out));
    std::vector<double> w(n_in);
    for (auto& v : w) v = rng.normal(0.0, sd);
    return w;
}

double loss_value(const ModelParams& params, const Dataset& data) {
    check_shapes(params, data);
    const auto u = preactivations(params, data);
    double acc = 0.0;
    for (std::size_t i = 0; i < data.samples(); ++i) {
        const double r = std::tanh(u[i]) - data.target[i];
        acc = acc + r * r;
    }
    // same final scaling as the jet path, so both routes agree bit-for-bit
    return acc * (1.0 / static_cast<double>(data.samples()));
}

Jet3 loss_jet(const ModelParams& params, const Dataset& data, std::size_t feature) {
    check_shapes(params, data);
    if (feature >= data.features()) throw std::invalid_argument("feature index out of range");
    const auto u = preactivations(params, data);
    return mse_jet(data, u, [&](std::size_t i) { return data.x(i, feature); });
}

double bias_gradient(const ModelParams& params, const Dataset& data) {
    check_shapes(params, data);
    const auto u = preactivations(params, data);
    return mse_jet(data, u, [](std::size_t) { return 1.0; }).d1;
}

std::vector<TrainResult> train(const Dataset& data, const TrainConfig& cfg) {
    if (data.samples() == 0) throw DataError("empty dataset");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");

    const std::size_t n = data.features();
    const auto epochs = static_cast<std::size_t>(cfg.epochs);

    std::vector<TrainResult> results;
    results.reserve(static_cast<std::size_t>(cfg.runs));

    for (int run = 0; run < cfg.runs; ++run) {
        const std::uint64_t sub_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(run));
        Rng rng(sub_seed);

        ModelParams params;
        params.weights = glorot_init(n, 1, rng);
        params.bias = 0.0;

        GradientTrace trace;
        trace.run_id = run;
        trace.seed_used = sub_seed;
        trace.loss.assign(epochs, 0.0);
        trace.d1 = Matrix(epochs, n);
        trace.d2 = Matrix(epochs, n);
        trace.d3 = Matrix(epochs, n);

        for (std::size_t e = 0; e < epochs; ++e) {
            const auto u = preactivations(params, data);
            for (std::size_t j = 0; j < n; ++j) {
                const Jet3 lj = mse_jet(data, u, [&](std::size_t i) { return data.x(i, j); });
                if (j == 0) trace.loss[e] = lj.v;
                trace.d1(e, j) = lj.d1;
                trace.d2(e, j) = lj.d2;
                trace.d3(e, j) = lj.d3;
            }
            const double bias_d1 = mse_jet(data, u, [](std::size_t) { return 1.0; }).d1;

            bool finite = std::isfinite(trace.loss[e]) && std::isfinite(bias_d1);
            for (std::size_t j = 0; finite && j < n; ++j) {
                finite = std::isfinite(trace.d1(e, j)) && std::isfinite(trace.d2(e, j)) &&
                         std::isfinite(trace.d3(e, j));
            }
            if (!finite) {
                throw DivergenceError("divergence detected (reduce learning rate) at epoch " +
                                          std::to_string(e),
                                      static_cast<int>(e));
            }

            for (std::size_t j = 0; j < n; ++j) {
                params.weights[j] -= cfg.learning_rate * trace.d1(e, j);
            }
            params.bias -= cfg.learning_rate * bias_d1;
        }

        results.push_back(TrainResult{std::move(params), std::move(trace)});
    }
    return results;
}

}  // namespace gradsense
