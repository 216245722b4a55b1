// Copyright 2026 The aqecsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aqec/rl/policy.hpp"

#include <cmath>
#include <numbers>

namespace aqec::rl {

double log_one_minus_tanh_sq(double x) {
    // 1 - tanh^2 x = sech^2 x, and log sech|x| = log 2 - |x| - log1p(e^{-2|x|}).
    const double ax = std::abs(x);
    return 2.0 * (std::numbers::ln2 - ax - std::log1p(std::exp(-2.0 * ax)));
}

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 log(2 pi)

void init_layer(RealMatrix& W, RealVector& b, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const double std_dev = scale / std::sqrt(static_cast<double>(W.cols()));
    for (int i = 0; i < W.rows(); ++i)
        for (int j = 0; j < W.cols(); ++j) W(i, j) = std_dev * nd(rng);
    b.setZero();
}

}  // namespace

PolicyNet::PolicyNet(PolicyConfig cfg, std::uint64_t init_seed) : cfg_(std::move(cfg)) {
    if (cfg_.obs_dim < 1 || cfg_.act_dim_c < 1 || cfg_.act_dim_d < 0) {
        throw ConfigError("bad policy dimensions");
    }
    std::mt19937_64 rng(init_seed);
    const double scale = cfg_.init_weight_scale > 0 ? cfg_.init_weight_scale : 1.0;
    int in = cfg_.obs_dim;
    for (int h : cfg_.hidden) {
        Layer l{RealMatrix(h, in), RealVector(h)};
        init_layer(l.W, l.b, rng, scale);
        backbone_.push_back(std::move(l));
        in = h;
    }
    head_c_ = {RealMatrix(cfg_.act_dim_c, in), RealVector(cfg_.act_dim_c)};
    init_layer(head_c_.W, head_c_.b, rng, 0.1 * scale);
    head_d_ = {RealMatrix(std::max(cfg_.act_dim_d, 0), in), RealVector(std::max(cfg_.act_dim_d, 0))};
    if (cfg_.act_dim_d > 0) init_layer(head_d_.W, head_d_.b, rng, 0.1 * scale);
    head_v_ = {RealMatrix(1, in), RealVector(1)};
    init_layer(head_v_.W, head_v_.b, rng, scale);
    log_std_ = RealVector::Constant(cfg_.act_dim(), cfg_.init_log_std);
}

PolicyNet::Trace PolicyNet::trace_forward(const RealVector& obs) const {
    if (obs.size() != cfg_.obs_dim) throw StructuralError("observation dimension mismatch");
    Trace tr;
    tr.activations.push_back(obs);
    RealVector h = obs;
    for (const auto& layer : backbone_) {
        h = (layer.W * h + layer.b).array().tanh().matrix();
        tr.activations.push_back(h);
    }
    return tr;
}

PolicyOutput PolicyNet::forward(const RealVector& obs) const {
    Trace tr = trace_forward(obs);
    const RealVector& top = tr.activations.back();
    PolicyOutput out;
    out.mean.resize(cfg_.act_dim());
    out.mean.head(cfg_.act_dim_c) = head_c_.W * top + head_c_.b;
    if (cfg_.act_dim_d > 0) out.mean.tail(cfg_.act_dim_d) = head_d_.W * top + head_d_.b;
    out.log_std = log_std_;
    out.value = (head_v_.W * top + head_v_.b)(0);
    if (!out.mean.allFinite() || !std::isfinite(out.value) || !out.log_std.allFinite()) {
        throw NumericalError("policy forward produced non-finite parameters", 0.0);
    }
    return out;
}

SampledAction PolicyNet::sample(const RealVector& obs, std::mt19937_64& rng) const {
    PolicyOutput po = forward(obs);
    std::normal_distribution<double> nd(0.0, 1.0);
    SampledAction sa;
    sa.pre_squash.resize(po.mean.size());
    sa.action.resize(po.mean.size());
    double lp = 0.0;
    for (int i = 0; i < po.mean.size(); ++i) {
        const double sigma = std::exp(po.log_std(i));
        const double x = po.mean(i) + sigma * nd(rng);
        sa.pre_squash(i) = x;
        sa.action(i) = std::tanh(x);
        const double z = (x - po.mean(i)) / sigma;
        lp += -0.5 * z * z - po.log_std(i) - kHalfLog2Pi - log_one_minus_tanh_sq(x);
    }
    sa.log_prob = lp;
    sa.value = po.value;
    return sa;
}

double PolicyNet::log_prob(const RealVector& obs, const RealVector& pre_squash) const {
    PolicyOutput po = forward(obs);
    double lp = 0.0;
    for (int i = 0; i < po.mean.size(); ++i) {
        const double sigma = std::exp(po.log_std(i));
        const double z = (pre_squash(i) - po.mean(i)) / sigma;
        lp += -0.5 * z * z - po.log_std(i) - kHalfLog2Pi - log_one_minus_tanh_sq(pre_squash(i));
    }
    return lp;
}

double PolicyNet::entropy() const {
    return log_std_.sum() + cfg_.act_dim() * (0.5 + kHalfLog2Pi);
}

int PolicyNet::num_params() const {
    int n = 0;
    for (const auto& l : backbone_) n += static_cast<int>(l.W.size() + l.b.size());
    n += static_cast<int>(head_c_.W.size() + head_c_.b.size());
    n += static_cast<int>(head_d_.W.size() + head_d_.b.size());
    n += static_cast<int>(head_v_.W.size() + head_v_.b.size());
    n += static_cast<int>(log_std_.size());
    return n;
}

namespace {

void pack(const RealMatrix& W, const RealVector& b, RealVector& out, int& pos) {
    for (int j = 0; j < W.cols(); ++j)
        for (int i = 0; i < W.rows(); ++i) out(pos++) = W(i, j);
    for (int i = 0; i < b.size(); ++i) out(pos++) = b(i);
}

void unpack(RealMatrix& W, RealVector& b, const RealVector& in, int& pos) {
    for (int j = 0; j < W.cols(); ++j)
        for (int i = 0; i < W.rows(); ++i) W(i, j) = in(pos++);
    for (int i = 0; i < b.size(); ++i) b(i) = in(pos++);
}

}  // namespace

RealVector PolicyNet::get_params() const {
    RealVector out(num_params());
    int pos = 0;
    for (const auto& l : backbone_) pack(l.W, l.b, out, pos);
    pack(head_c_.W, head_c_.b, out, pos);
    pack(head_d_.W, head_d_.b, out, pos);
    pack(head_v_.W, head_v_.b, out, pos);
    for (int i = 0; i < log_std_.size(); ++i) out(pos++) = log_std_(i);
    return out;
}

void PolicyNet::set_params(const RealVector& theta) {
    if (theta.size() != num_params()) throw StructuralError("parameter size mismatch");
    int pos = 0;
    for (auto& l : backbone_) unpack(l.W, l.b, theta, pos);
    unpack(head_c_.W, head_c_.b, theta, pos);
    unpack(head_d_.W, head_d_.b, theta, pos);
    unpack(head_v_.W, head_v_.b, theta, pos);
    for (int i = 0; i < log_std_.size(); ++i) log_std_(i) = theta(pos++);
}

int PolicyNet::log_std_offset() const { return num_params() - static_cast<int>(log_std_.size()); }

void PolicyNet::accumulate_gradient(const RealVector& obs, const RealVector& dmean, double dvalue,
                                    RealVector& grad) const {
    Trace tr = trace_forward(obs);
    const RealVector& top = tr.activations.back();

    // Backprop into the heads, collecting d loss / d top.
    RealVector dtop = RealVector::Zero(top.size());
    const RealVector dmean_c = dmean.head(cfg_.act_dim_c);
    dtop += head_c_.W.transpose() * dmean_c;
    if (cfg_.act_dim_d > 0) dtop += head_d_.W.transpose() * dmean.tail(cfg_.act_dim_d);
    dtop += head_v_.W.transpose() * (RealVector::Constant(1, dvalue));

    // Head parameter gradients land after the backbone block.
    int pos = 0;
    for (const auto& l : backbone_) pos += static_cast<int>(l.W.size() + l.b.size());
    auto add_head = [&](const Layer& head, const RealVector& dout) {
        for (int j = 0; j < head.W.cols(); ++j)
            for (int i = 0; i < head.W.rows(); ++i) grad(pos++) += dout(i) * top(j);
        for (int i = 0; i < head.b.size(); ++i) grad(pos++) += dout(i);
    };
    add_head(head_c_, dmean_c);
    if (cfg_.act_dim_d > 0) {
        add_head(head_d_, dmean.tail(cfg_.act_dim_d));
    }
    add_head(head_v_, RealVector::Constant(1, dvalue));

    // Backbone backward pass: delta through tanh layers.
    RealVector delta = dtop;
    for (int li = static_cast<int>(backbone_.size()) - 1; li >= 0; --li) {
        const RealVector& out_act = tr.activations[li + 1];
        const RealVector& in_act = tr.activations[li];
        delta = delta.cwiseProduct((1.0 - out_act.array().square()).matrix());
        // Gradient block offset of backbone layer li.
        int lpos = 0;
        for (int k = 0; k < li; ++k) {
            lpos += static_cast<int>(backbone_[k].W.size() + backbone_[k].b.size());
        }
        const Layer& l = backbone_[li];
        for (int j = 0; j < l.W.cols(); ++j)
            for (int i = 0; i < l.W.rows(); ++i) grad(lpos + j * l.W.rows() + i) += delta(i) * in_act(j);
        const int bpos = lpos + static_cast<int>(l.W.size());
        for (int i = 0; i < l.b.size(); ++i) grad(bpos + i) += delta(i);
        if (li > 0) delta = l.W.transpose() * delta;
    }
}

}  // namespace aqec::rl
