#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oran/rng.hpp"

namespace oran::nn {

/// Row-per-sample batch: [batch x features].
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { relu, sigmoid, linear };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

struct LayerSpec {
    int input_dim = 1;
    int output_dim = 1;
    Activation activation = Activation::linear;
    /// Normalize the pre-activation (after the affine map, before the activation).
    bool batch_norm = false;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Dense stack in -> hidden... -> out. Hidden layers share one activation; the
/// first hidden layer optionally carries batch normalization.
std::vector<LayerSpec> make_mlp(int input_dim, std::span<const int> hidden, int output_dim,
                                Activation hidden_activation, Activation output_activation,
                                bool batch_norm_first = false);

/// Flat parameter payload in canonical layer order: per layer W (column-major
/// in x out), b, then BN scale and shift when present.
struct ParamVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

std::size_t param_count(std::span<const LayerSpec> specs);
/// Running mean and variance of every BN layer.
std::size_t stats_count(std::span<const LayerSpec> specs);

struct BatchNormSettings {
    double momentum = 0.99;
    double epsilon = 1e-5;
};

struct Gradients {
    ParamVector params;
    Matrix input;
};

/// Multilayer perceptron with parameters held in one contiguous buffer so that
/// optimizers, soft updates and federated averaging work on flat vectors.
class MlpNetwork {
public:
    MlpNetwork() = default;
    /// Zero weights and biases; BN scale 1, running variance 1.
    explicit MlpNetwork(std::vector<LayerSpec> specs, BatchNormSettings bn = {});
    /// He-uniform for relu layers, Xavier-uniform otherwise; zero biases.
    MlpNetwork(std::vector<LayerSpec> specs, Rng& rng, BatchNormSettings bn = {});

    const std::vector<LayerSpec>& specs() const { return specs_; }
    int input_dim() const { return specs_.front().input_dim; }
    int output_dim() const { return specs_.back().output_dim; }
    std::size_t param_count() const { return params_.size(); }
    bool has_batch_norm() const { return !stats_.empty(); }

    void set_training(bool on) { training_ = on; }
    bool training() const { return training_; }

    /// Forward pass that caches activations for backward(). In training mode BN
    /// layers use batch statistics (B >= 2) and update their running statistics.
    Matrix forward(const Matrix& x);
    /// Inference in eval mode; no cache, no side effects.
    Matrix predict(const Matrix& x) const;
    Vector predict_one(std::span<const double> x) const;

    /// Gradients of sum(upstream .* output) for the cached batch.
    Gradients backward(const Matrix& upstream) const;

    ParamVector extract_params() const { return {params_}; }
    void inject_params(const ParamVector& p);
    ParamVector extract_stats() const { return {stats_}; }
    void inject_stats(const ParamVector& s);

    std::span<double> raw_params() { return params_; }
    std::span<const double> raw_params() const { return params_; }
    std::span<double> raw_stats() { return stats_; }
    std::span<const double> raw_stats() const { return stats_; }

private:
    struct Offsets {
        std::size_t weight = 0;
        std::size_t bias = 0;
        std::size_t gamma = 0;
        std::size_t beta = 0;
        std::size_t mean = 0;
        std::size_t var = 0;
    };
    struct LayerCache {
        Matrix input;
        Matrix zhat;     // normalized pre-activation (BN layers)
        Vector inv_std;  // BN layers
        Matrix output;   // post-activation
        bool batch_stats = false;
    };

    void layout();
    Matrix run(const Matrix& x, bool batch_stats, std::vector<LayerCache>* cache,
               std::vector<double>* stats_out) const;

    std::vector<LayerSpec> specs_;
    std::vector<Offsets> offsets_;
    std::vector<double> params_;
    std::vector<double> stats_;
    BatchNormSettings bn_;
    bool training_ = false;
    std::vector<LayerCache> cache_;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState for_params(std::size_t n, double lr);
    void reset();
};

/// One bias-corrected Adam update. Throws std::invalid_argument on shape
/// mismatch and std::domain_error on non-finite gradients (nothing is applied).
void adam_step(MlpNetwork& net, const ParamVector& grads, AdamState& opt);

/// target <- tau * online + (1 - tau) * target; BN running stats are copied.
void soft_update(MlpNetwork& target, const MlpNetwork& online, double tau);

/// Copies parameters and BN statistics.
void hard_update(MlpNetwork& target, const MlpNetwork& online);

/// Flushes denormal doubles to zero on the calling thread while alive and
/// restores the previous mode afterwards. Long training runs otherwise slow
/// down severalfold once saturated units start producing denormals. No-op
/// on targets without SSE control registers.
class DenormalFlushGuard {
public:
    DenormalFlushGuard();
    ~DenormalFlushGuard();
    DenormalFlushGuard(const DenormalFlushGuard&) = delete;
    DenormalFlushGuard& operator=(const DenormalFlushGuard&) = delete;

private:
    unsigned saved_ = 0;
};

/// Stacks rows into a batch matrix.
Matrix rows_to_matrix(std::span<const std::vector<double>> rows);

}  // namespace oran::nn
