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

#include "aqec/core.hpp"

// Actor-critic network: shared tanh backbone, two mean heads (codeword and
// ladder branches), a state-independent per-dimension log-spread, and a
// value head. Actions are tanh-squashed Gaussian samples in (-1, 1).
namespace aqec::rl {

struct PolicyConfig {
    int obs_dim = 39;
    std::vector<int> hidden = {256, 256};
    int act_dim_c = 8;  // codeword branch
    int act_dim_d = 7;  // ladder branch
    double init_log_std = -0.7;  // sigma ~ 0.5
    double init_weight_scale = 0.0;  // 0 = orthogonal-ish default scaling

    int act_dim() const { return act_dim_c + act_dim_d; }
};

struct PolicyOutput {
    RealVector mean;     // act_dim
    RealVector log_std;  // act_dim
    double value;
};

/// A tanh-squashed Gaussian sample with everything the learner needs.
struct SampledAction {
    RealVector pre_squash;  // x ~ N(mean, sigma)
    RealVector action;      // tanh(x), strictly inside (-1, 1)
    double log_prob;        // includes the tanh Jacobian correction
    double value;
};

class PolicyNet {
  public:
    explicit PolicyNet(PolicyConfig cfg, std::uint64_t init_seed = 0);

    const PolicyConfig& config() const { return cfg_; }

    /// Deterministic forward pass. Throws on non-finite outputs.
    PolicyOutput forward(const RealVector& obs) const;

    SampledAction sample(const RealVector& obs, std::mt19937_64& rng) const;

    /// log pi(action | obs) for a stored pre-squash sample.
    double log_prob(const RealVector& obs, const RealVector& pre_squash) const;

    /// Sum over dimensions of the Gaussian entropy (the squashed entropy has
    /// no closed form; the Gaussian term is the standard bonus).
    double entropy() const;

    /// Flat parameter access (backbone, heads, log_std) for the optimizer
    /// and for finite-difference checks.
    int num_params() const;
    RealVector get_params() const;
    void set_params(const RealVector& theta);

    /// Gradient contributions of one observation, given upstream gradients
    /// d loss / d mean and d loss / d value; accumulates into `grad`
    /// (layout matches get_params). dlog_std accumulation is handled by the
    /// caller via log_std_offset().
    void accumulate_gradient(const RealVector& obs, const RealVector& dmean, double dvalue,
                             RealVector& grad) const;

    int log_std_offset() const;  // index of log_std block inside the flat vector
    const RealVector& log_std() const { return log_std_; }

  private:
    struct Layer {
        RealMatrix W;
        RealVector b;
    };

    // Forward pass keeping pre-activations for backprop.
    struct Trace {
        std::vector<RealVector> activations;  // input, then each hidden output
    };
    Trace trace_forward(const RealVector& obs) const;

    PolicyConfig cfg_;
    std::vector<Layer> backbone_;
    Layer head_c_, head_d_, head_v_;
    RealVector log_std_;
};

/// log(1 - tanh(x)^2) in a cancellation-free form.
double log_one_minus_tanh_sq(double x);

}  // namespace aqec::rl
