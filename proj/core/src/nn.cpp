#include "oran/nn.hpp"

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#endif

#include <cmath>
#include <stdexcept>
#include <string>

namespace oran::nn {

namespace {

using ConstMap = Eigen::Map<const Matrix>;
using MutMap = Eigen::Map<Matrix>;
using ConstVecMap = Eigen::Map<const Vector>;

Matrix activate(const Matrix& y, Activation a) {
    switch (a) {
        case Activation::relu: return y.cwiseMax(0.0);
        case Activation::sigmoid: return (1.0 + (-y.array()).exp()).inverse().matrix();
        case Activation::linear: return y;
    }
    return y;
}

// dL/dy given dL/da and the layer output a.
Matrix activation_backward(const Matrix& upstream, const Matrix& out, Activation a) {
    switch (a) {
        case Activation::relu: return (out.array() > 0.0).select(upstream, 0.0);
        case Activation::sigmoid: return (upstream.array() * out.array() * (1.0 - out.array())).matrix();
        case Activation::linear: return upstream;
    }
    return upstream;
}

}  // namespace

std::string to_string(Activation a) {
    switch (a) {
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::linear: return "linear";
    }
    return "linear";
}

Activation activation_from_string(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "linear") return Activation::linear;
    throw std::invalid_argument("unknown activation '" + s + "'");
}

std::vector<LayerSpec> make_mlp(int input_dim, std::span<const int> hidden, int output_dim,
                                Activation hidden_activation, Activation output_activation,
                                bool batch_norm_first) {
    std::vector<LayerSpec> specs;
    int in = input_dim;
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        specs.push_back({in, hidden[i], hidden_activation, batch_norm_first && i == 0});
        in = hidden[i];
    }
    specs.push_back({in, output_dim, output_activation, false});
    return specs;
}

std::size_t param_count(std::span<const LayerSpec> specs) {
    std::size_t n = 0;
    for (const auto& s : specs) {
        n += static_cast<std::size_t>(s.input_dim) * s.output_dim + s.output_dim;
        if (s.batch_norm) n += 2 * static_cast<std::size_t>(s.output_dim);
    }
    return n;
}

std::size_t stats_count(std::span<const LayerSpec> specs) {
    std::size_t n = 0;
    for (const auto& s : specs) {
        if (s.batch_norm) n += 2 * static_cast<std::size_t>(s.output_dim);
    }
    return n;
}

MlpNetwork::MlpNetwork(std::vector<LayerSpec> specs, BatchNormSettings bn)
    : specs_(std::move(specs)), bn_(bn) {
    layout();
}

MlpNetwork::MlpNetwork(std::vector<LayerSpec> specs, Rng& rng, BatchNormSettings bn)
    : specs_(std::move(specs)), bn_(bn) {
    layout();
    for (std::size_t l = 0; l < specs_.size(); ++l) {
        const auto& s = specs_[l];
        const double limit = s.activation == Activation::relu
                                 ? std::sqrt(6.0 / s.input_dim)
                                 : std::sqrt(6.0 / (s.input_dim + s.output_dim));
        std::uniform_real_distribution<double> dist(-limit, limit);
        const std::size_t n = static_cast<std::size_t>(s.input_dim) * s.output_dim;
        for (std::size_t i = 0; i < n; ++i) params_[offsets_[l].weight + i] = dist(rng);
    }
}

void MlpNetwork::layout() {
    if (specs_.empty()) throw std::invalid_argument("network needs at least one layer");
    for (std::size_t l = 0; l < specs_.size(); ++l) {
        if (specs_[l].input_dim < 1 || specs_[l].output_dim < 1) {
            throw std::invalid_argument("layer dimensions must be >= 1");
        }
        if (l > 0 && specs_[l].input_dim != specs_[l - 1].output_dim) {
            throw std::invalid_argument("layer " + std::to_string(l) + " input does not chain");
        }
    }
    params_.assign(nn::param_count(specs_), 0.0);
    stats_.assign(nn::stats_count(specs_), 0.0);
    offsets_.clear();
    std::size_t p = 0;
    std::size_t s = 0;
    for (const auto& spec : specs_) {
        Offsets o;
        o.weight = p;
        p += static_cast<std::size_t>(spec.input_dim) * spec.output_dim;
        o.bias = p;
        p += spec.output_dim;
        if (spec.batch_norm) {
            o.gamma = p;
            p += spec.output_dim;
            o.beta = p;
            p += spec.output_dim;
            o.mean = s;
            s += spec.output_dim;
            o.var = s;
            s += spec.output_dim;
            for (int i = 0; i < spec.output_dim; ++i) {
                params_[o.gamma + i] = 1.0;
                stats_[o.var + i] = 1.0;
            }
        }
        offsets_.push_back(o);
    }
}

Matrix MlpNetwork::run(const Matrix& x, bool batch_stats, std::vector<LayerCache>* cache,
                       std::vector<double>* stats_out) const {
    if (x.cols() != input_dim()) {
        throw std::invalid_argument("input has " + std::to_string(x.cols()) + " columns, network expects " +
                                    std::to_string(input_dim()));
    }
    if (x.rows() < 1) throw std::invalid_argument("empty batch");
    if (batch_stats && has_batch_norm() && x.rows() < 2) {
        throw std::invalid_argument("batch normalization in training mode needs a batch of >= 2");
    }
    if (cache) cache->assign(specs_.size(), LayerCache{});

    Matrix a = x;
    for (std::size_t l = 0; l < specs_.size(); ++l) {
        const auto& s = specs_[l];
        const auto& o = offsets_[l];
        ConstMap w(params_.data() + o.weight, s.input_dim, s.output_dim);
        ConstVecMap b(params_.data() + o.bias, s.output_dim);
        Matrix y = a * w;
        y.rowwise() += b.transpose();

        LayerCache* lc = cache ? &(*cache)[l] : nullptr;
        if (lc) lc->input = a;

        if (s.batch_norm) {
            ConstVecMap gamma(params_.data() + o.gamma, s.output_dim);
            ConstVecMap beta(params_.data() + o.beta, s.output_dim);
            Vector mean;
            Vector var;
            if (batch_stats) {
                mean = y.colwise().mean().transpose();
                var = (y.rowwise() - mean.transpose()).array().square().colwise().mean().transpose();
                if (stats_out) {
                    double* rm = stats_out->data() + o.mean;
                    double* rv = stats_out->data() + o.var;
                    for (int i = 0; i < s.output_dim; ++i) {
                        rm[i] = bn_.momentum * rm[i] + (1.0 - bn_.momentum) * mean[i];
                        rv[i] = bn_.momentum * rv[i] + (1.0 - bn_.momentum) * var[i];
                    }
                }
            } else {
                mean = ConstVecMap(stats_.data() + o.mean, s.output_dim);
                var = ConstVecMap(stats_.data() + o.var, s.output_dim);
            }
            const Vector inv_std = (var.array() + bn_.epsilon).rsqrt().matrix();
            Matrix zhat = (y.rowwise() - mean.transpose()) * inv_std.asDiagonal();
            y = zhat * gamma.asDiagonal();
            y.rowwise() += beta.transpose();
            if (lc) {
                lc->zhat = std::move(zhat);
                lc->inv_std = inv_std;
                lc->batch_stats = batch_stats;
            }
        }
        a = activate(y, s.activation);
        if (lc) lc->output = a;
    }
    return a;
}

Matrix MlpNetwork::forward(const Matrix& x) {
    return run(x, training_, &cache_, training_ ? &stats_ : nullptr);
}

Matrix MlpNetwork::predict(const Matrix& x) const { return run(x, false, nullptr, nullptr); }

Vector MlpNetwork::predict_one(std::span<const double> x) const {
    Matrix m(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = x[i];
    return predict(m).row(0).transpose();
}

Gradients MlpNetwork::backward(const Matrix& upstream) const {
    if (cache_.size() != specs_.size()) throw std::logic_error("backward() without a cached forward()");
    const auto& last = cache_.back();
    if (upstream.rows() != last.output.rows() || upstream.cols() != last.output.cols()) {
        throw std::invalid_argument("upstream gradient shape does not match the cached output");
    }
    Gradients g;
    g.params.values.assign(params_.size(), 0.0);
    Matrix grad = upstream;
    for (std::size_t li = specs_.size(); li-- > 0;) {
        const auto& s = specs_[li];
        const auto& o = offsets_[li];
        const auto& lc = cache_[li];
        Matrix dy = activation_backward(grad, lc.output, s.activation);

        if (s.batch_norm) {
            ConstVecMap gamma(params_.data() + o.gamma, s.output_dim);
            MutMap dgamma(g.params.values.data() + o.gamma, s.output_dim, 1);
            MutMap dbeta(g.params.values.data() + o.beta, s.output_dim, 1);
            dgamma = (dy.array() * lc.zhat.array()).colwise().sum().transpose();
            dbeta = dy.colwise().sum().transpose();
            const Matrix dzhat = dy * gamma.asDiagonal();
            if (lc.batch_stats) {
                const double n = static_cast<double>(dy.rows());
                const Eigen::RowVectorXd sum_dz = dzhat.colwise().sum();
                const Eigen::RowVectorXd sum_dz_z = (dzhat.array() * lc.zhat.array()).colwise().sum();
                Matrix t = n * dzhat;
                t.rowwise() -= sum_dz;
                t -= (lc.zhat.array().rowwise() * sum_dz_z.array()).matrix();
                dy = t * (lc.inv_std / n).asDiagonal();
            } else {
                dy = dzhat * lc.inv_std.asDiagonal();
            }
        }

        MutMap dw(g.params.values.data() + o.weight, s.input_dim, s.output_dim);
        MutMap db(g.params.values.data() + o.bias, s.output_dim, 1);
        dw.noalias() = lc.input.transpose() * dy;
        db = dy.colwise().sum().transpose();
        ConstMap w(params_.data() + o.weight, s.input_dim, s.output_dim);
        grad = dy * w.transpose();
    }
    g.input = std::move(grad);
    return g;
}

void MlpNetwork::inject_params(const ParamVector& p) {
    if (p.size() != params_.size()) {
        throw std::invalid_argument("parameter vector has " + std::to_string(p.size()) + " entries, expected " +
                                    std::to_string(params_.size()));
    }
    params_ = p.values;
    cache_.clear();
}

void MlpNetwork::inject_stats(const ParamVector& s) {
    if (s.size() != stats_.size()) throw std::invalid_argument("stats vector length mismatch");
    stats_ = s.values;
}

AdamState AdamState::for_params(std::size_t n, double lr) {
    AdamState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    s.lr = lr;
    return s;
}

void AdamState::reset() {
    std::fill(m.begin(), m.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    step = 0;
}

void adam_step(MlpNetwork& net, const ParamVector& grads, AdamState& opt) {
    auto p = net.raw_params();
    if (grads.size() != p.size() || opt.m.size() != p.size() || opt.v.size() != p.size()) {
        throw std::invalid_argument("adam_step: gradient/moment shape does not match the network");
    }
    for (double g : grads.values) {
        if (!std::isfinite(g)) throw std::domain_error("adam_step: non-finite gradient");
    }
    ++opt.step;
    const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double g = grads.values[i];
        opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * g;
        opt.v[i] = opt.beta2 * opt.v[i] + (1.0 - opt.beta2) * g * g;
        const double mhat = opt.m[i] / c1;
        const double vhat = opt.v[i] / c2;
        p[i] -= opt.lr * mhat / (std::sqrt(vhat) + opt.eps);
    }
}

void soft_update(MlpNetwork& target, const MlpNetwork& online, double tau) {
    if (target.specs() != online.specs()) throw std::invalid_argument("soft_update: network specs differ");
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("soft_update: tau must be in [0, 1]");
    auto t = target.raw_params();
    auto o = online.raw_params();
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = tau * o[i] + (1.0 - tau) * t[i];
    auto ts = target.raw_stats();
    auto os = online.raw_stats();
    std::copy(os.begin(), os.end(), ts.begin());
}

void hard_update(MlpNetwork& target, const MlpNetwork& online) {
    if (target.specs() != online.specs()) throw std::invalid_argument("hard_update: network specs differ");
    target.inject_params(online.extract_params());
    target.inject_stats(online.extract_stats());
}

#if defined(__SSE__) || defined(_M_X64)
DenormalFlushGuard::DenormalFlushGuard() : saved_(_mm_getcsr()) {
    _mm_setcsr(saved_ | 0x8040u);  // FTZ | DAZ
}
DenormalFlushGuard::~DenormalFlushGuard() { _mm_setcsr(saved_); }
#else
DenormalFlushGuard::DenormalFlushGuard() = default;
DenormalFlushGuard::~DenormalFlushGuard() = default;
#endif

Matrix rows_to_matrix(std::span<const std::vector<double>> rows) {
    if (rows.empty()) return Matrix(0, 0);
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

}  // namespace oran::nn
