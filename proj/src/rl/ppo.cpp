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

#include "aqec/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aqec::rl {

std::vector<double> advantages_from(const std::vector<double>& rewards,
                                    const std::vector<double>& values, double discount) {
    if (rewards.size() != values.size()) throw StructuralError("rewards/values length mismatch");
    if (discount <= 0.0 || discount > 1.0) throw ConfigError("discount must be in (0, 1]");
    std::vector<double> adv(rewards.size());
    double running = 0.0;
    for (int t = static_cast<int>(rewards.size()) - 1; t >= 0; --t) {
        running = rewards[t] + discount * running;
        adv[t] = running - values[t];
    }
    return adv;
}

void compute_advantages(std::vector<Transition>& episode, double discount) {
    if (discount <= 0.0 || discount > 1.0) throw ConfigError("discount must be in (0, 1]");
    double running = 0.0;
    for (int t = static_cast<int>(episode.size()) - 1; t >= 0; --t) {
        running = episode[t].reward + discount * running;
        episode[t].return_to_go = running;
        episode[t].advantage = running - episode[t].value_old;
    }
}

namespace {

struct SampleEval {
    double ratio;
    double surrogate;          // min(r A, clip(r) A)
    double dsurrogate_dlogp;   // derivative through the ratio
};

SampleEval eval_sample(double logp, double logp_old, double advantage, double clip_eps) {
    SampleEval ev;
    ev.ratio = std::exp(logp - logp_old);
    const double unclipped = ev.ratio * advantage;
    const double clipped =
        std::clamp(ev.ratio, 1.0 - clip_eps, 1.0 + clip_eps) * advantage;
    if (unclipped <= clipped) {
        ev.surrogate = unclipped;
        ev.dsurrogate_dlogp = ev.ratio * advantage;  // d(rA)/dlogp = rA
    } else {
        ev.surrogate = clipped;
        // Inside the clip interval the two branches coincide, so reaching
        // here means the clip is binding and the gradient vanishes.
        ev.dsurrogate_dlogp = 0.0;
    }
    return ev;
}

}  // namespace

double ppo_loss(const PolicyNet& policy, const std::vector<Transition>& batch,
                const PpoConfig& cfg) {
    if (batch.empty()) throw ConfigError("empty PPO batch");
    double loss = 0.0;
    for (const auto& tr : batch) {
        const double logp = policy.log_prob(tr.obs, tr.pre_squash);
        const auto ev = eval_sample(logp, tr.log_prob_old, tr.advantage, cfg.clip_eps);
        const double v = policy.forward(tr.obs).value;
        const double dv = v - tr.return_to_go;
        loss += -ev.surrogate + cfg.value_coef * dv * dv;
    }
    loss /= static_cast<double>(batch.size());
    loss -= cfg.entropy_coef * policy.entropy();
    return loss;
}

RealVector ppo_loss_gradient(const PolicyNet& policy, const std::vector<Transition>& batch,
                             const PpoConfig& cfg) {
    if (batch.empty()) throw ConfigError("empty PPO batch");
    const int np = policy.num_params();
    RealVector grad = RealVector::Zero(np);
    const int act_dim = policy.config().act_dim();
    const int ls_off = policy.log_std_offset();
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (const auto& tr : batch) {
        const PolicyOutput po = policy.forward(tr.obs);
        double logp = 0.0;
        RealVector z(act_dim);
        for (int i = 0; i < act_dim; ++i) {
            const double sigma = std::exp(po.log_std(i));
            z(i) = (tr.pre_squash(i) - po.mean(i)) / sigma;
            logp += -0.5 * z(i) * z(i) - po.log_std(i) - 0.9189385332046727 -
                    log_one_minus_tanh_sq(tr.pre_squash(i));
        }
        const auto ev = eval_sample(logp, tr.log_prob_old, tr.advantage, cfg.clip_eps);
        // loss contribution: -surrogate  ->  dloss/dlogp = -dsurr.
        const double dloss_dlogp = -ev.dsurrogate_dlogp * inv_b;
        // dlogp/dmean_i = z_i / sigma_i ; dlogp/dlogstd_i = z_i^2 - 1.
        RealVector dmean(act_dim);
        for (int i = 0; i < act_dim; ++i) {
            const double sigma = std::exp(po.log_std(i));
            dmean(i) = dloss_dlogp * z(i) / sigma;
            grad(ls_off + i) += dloss_dlogp * (z(i) * z(i) - 1.0);
        }
        const double dvalue = cfg.value_coef * 2.0 * (po.value - tr.return_to_go) * inv_b;
        policy.accumulate_gradient(tr.obs, dmean, dvalue, grad);
    }
    // Entropy bonus: -c_e * sum(log_std) + const.
    for (int i = 0; i < act_dim; ++i) grad(ls_off + i) -= cfg.entropy_coef;
    return grad;
}

PpoUpdater::PpoUpdater(PolicyNet& policy, PpoConfig cfg) : policy_(policy), cfg_(cfg) {
    m_ = RealVector::Zero(policy_.num_params());
    v_ = RealVector::Zero(policy_.num_params());
}

void PpoUpdater::adam_step(const RealVector& grad) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++step_count_;
    m_ = b1 * m_ + (1.0 - b1) * grad;
    v_ = b2 * v_.array().matrix() + (1.0 - b2) * grad.cwiseProduct(grad);
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
    RealVector theta = policy_.get_params();
    theta -= (cfg_.learning_rate / bc1) *
             m_.cwiseQuotient((v_ / bc2).cwiseSqrt().array().matrix() +
                              RealVector::Constant(m_.size(), eps));
    policy_.set_params(theta);
}

PpoStats PpoUpdater::update(std::vector<Transition>& batch, std::mt19937_64& rng) {
    if (batch.empty()) throw ConfigError("empty PPO batch");
    PpoStats stats;
    if (cfg_.normalize_returns) {
        for (const auto& t : batch) {
            ++return_count_;
            const double d = t.return_to_go - return_mean_;
            return_mean_ += d / static_cast<double>(return_count_);
            return_m2_ += d * (t.return_to_go - return_mean_);
        }
        const double var =
            return_count_ > 1 ? return_m2_ / static_cast<double>(return_count_ - 1) : 1.0;
        const double sd = std::max(std::sqrt(var), 1e-4);
        // Value targets and advantages move to normalized units; value_old
        // already lives there (the head is trained on normalized returns).
        for (auto& t : batch) {
            t.return_to_go = (t.return_to_go - return_mean_) / sd;
            t.advantage = t.return_to_go - t.value_old;
        }
    }
    if (cfg_.normalize_advantages && batch.size() > 1) {
        double mean = 0.0;
        for (const auto& t : batch) mean += t.advantage;
        mean /= static_cast<double>(batch.size());
        double var = 0.0;
        for (const auto& t : batch) var += (t.advantage - mean) * (t.advantage - mean);
        const double sd = std::sqrt(var / static_cast<double>(batch.size())) + 1e-8;
        for (auto& t : batch) t.advantage = (t.advantage - mean) / sd;
    }
    std::vector<int> index(batch.size());
    std::iota(index.begin(), index.end(), 0);
    std::vector<Transition> mini;
    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
        std::shuffle(index.begin(), index.end(), rng);
        for (size_t start = 0; start < index.size(); start += cfg_.minibatch) {
            mini.clear();
            for (size_t k = start; k < std::min(index.size(), start + cfg_.minibatch); ++k) {
                mini.push_back(batch[index[k]]);
            }
            bool finite = true;
            double ratio_acc = 0.0;
            for (const auto& t : mini) {
                const double r = std::exp(policy_.log_prob(t.obs, t.pre_squash) - t.log_prob_old);
                if (!std::isfinite(r)) finite = false;
                ratio_acc += r;
            }
            if (!finite) {
                ++stats.skipped_minibatches;
                continue;
            }
            stats.mean_ratio = ratio_acc / static_cast<double>(mini.size());
            RealVector grad = ppo_loss_gradient(policy_, mini, cfg_);
            if (!grad.allFinite()) {
                ++stats.skipped_minibatches;
                continue;
            }
            adam_step(grad);
        }
    }
    // Report final-epoch diagnostics.
    double surr = 0.0, vloss = 0.0;
    for (const auto& t : batch) {
        const double logp = policy_.log_prob(t.obs, t.pre_squash);
        const double r = std::exp(logp - t.log_prob_old);
        surr += std::min(r * t.advantage,
                         std::clamp(r, 1.0 - cfg_.clip_eps, 1.0 + cfg_.clip_eps) * t.advantage);
        const double dv = policy_.forward(t.obs).value - t.return_to_go;
        vloss += dv * dv;
    }
    stats.surrogate = surr / static_cast<double>(batch.size());
    stats.value_loss = vloss / static_cast<double>(batch.size());
    stats.entropy = policy_.entropy();
    return stats;
}

}  // namespace aqec::rl
