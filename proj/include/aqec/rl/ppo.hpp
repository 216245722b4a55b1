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

#pragma once

#include <random>
#include <vector>

#include "aqec/rl/policy.hpp"

namespace aqec::rl {

/// One on-policy transition (the rollout buffer is cleared after each
/// update; the persisted episode log is separate).
struct Transition {
    RealVector obs;
    RealVector pre_squash;
    double log_prob_old = 0.0;
    double value_old = 0.0;
    double reward = 0.0;
    double advantage = 0.0;
    double return_to_go = 0.0;
};

/// A_t = -V(o_{t-1}) + r_t + g r_{t+1} + g^2 r_{t+2} + ...; also fills the
/// discounted returns used for the value regression.
void compute_advantages(std::vector<Transition>& episode, double discount);

/// Plain advantage computation for tests: rewards/values -> advantages.
std::vector<double> advantages_from(const std::vector<double>& rewards,
                                    const std::vector<double>& values, double discount);

struct PpoConfig {
    double clip_eps = 0.2;
    int epochs = 4;
    int minibatch = 64;
    double learning_rate = 3e-4;
    double value_coef = 0.5;
    double entropy_coef = 0.01;
    double discount = 0.99;
    bool normalize_advantages = true;
    // Rewards are O(f1) = O(250); the value head regresses normalized
    // returns so the regression cannot swamp the shared backbone.
    bool normalize_returns = true;
    int episodes_per_update = 16;
};

struct PpoStats {
    double surrogate = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double mean_ratio = 1.0;
    int skipped_minibatches = 0;
};

/// Total loss at the current parameters (no update); used by the
/// finite-difference oracle tests. Loss = -surrogate + c_v (V - R)^2
/// - c_e entropy, averaged over the batch.
double ppo_loss(const PolicyNet& policy, const std::vector<Transition>& batch,
                const PpoConfig& cfg);

/// Analytic gradient of ppo_loss w.r.t. the flat parameter vector.
RealVector ppo_loss_gradient(const PolicyNet& policy, const std::vector<Transition>& batch,
                             const PpoConfig& cfg);

/// Adam-based clipped-surrogate updater.
class PpoUpdater {
  public:
    PpoUpdater(PolicyNet& policy, PpoConfig cfg);

    /// Runs cfg.epochs passes of minibatch updates over the batch.
    /// Minibatches with non-finite ratios are skipped and counted.
    PpoStats update(std::vector<Transition>& batch, std::mt19937_64& rng);

    const PpoConfig& config() const { return cfg_; }

  private:
    void adam_step(const RealVector& grad);

    PolicyNet& policy_;
    PpoConfig cfg_;
    RealVector m_, v_;
    long step_count_ = 0;
    // Running return statistics (Welford) for value-target normalization.
    long return_count_ = 0;
    double return_mean_ = 0.0;
    double return_m2_ = 0.0;
};

}  // namespace aqec::rl
