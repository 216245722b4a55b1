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

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "aqec/analytic_solver.hpp"
#include "aqec/core.hpp"

// MDP over the analytic solver: actions choose a codeword partition and a
// ladder; states carry six fidelities, the previous and initial actions,
// and the normalized system features.
namespace aqec::rl {

/// o_t = [six fidelities, previous action (15), initial action (15),
/// normalized (gamma_b/gamma_a, gamma_a2/gamma_a, g/gamma_a)] -> 39 reals.
struct Observation {
    static constexpr int kFidelities = 6;
    RealVector v;

    static int dim(int fock_dim) { return kFidelities + 2 * (2 * fock_dim - 1) + 3; }
};

struct ActionVector {
    RealVector c;  // fock_dim coefficients in (-1, 1)
    RealVector d;  // fock_dim - 1 ladder coefficients; |d| used as weights

    RealVector concat() const;
    static ActionVector split(const RealVector& flat, int fock_dim);
};

struct RewardConfig {
    double f1 = 250.0;
    double f2 = 2.0;
    double penalty = -20.0;
    double alpha_clip = 0.97;
    enum class Mode { Phase1, Phase2, DeltaFidelity } mode = Mode::Phase1;

    void validate() const;
};

struct CurriculumSchedule {
    int phase1_max_steps = 4;
    int phase2_max_steps = 70;
    double step_tau = 0.06;
    int episodes_phase1 = 2000;
    int episodes_phase2 = 2000;
    // Sampling ranges for zeta = (gamma_b/gamma_a, gamma_a2/gamma_a, g/gamma_a).
    double gamma_b_lo = 600.0, gamma_b_hi = 1800.0;
    double eta_lo = 0.0, eta_hi = 0.08;
    double g_lo = 300.0, g_hi = 600.0;
    // Optional pinned parameters (the smoke tests fix zeta at paper values).
    bool fixed_zeta = false;
    double fixed_gamma_b = 1800.0, fixed_eta = 0.012, fixed_g = 600.0;
    // Phase 2 horizon ramp: K grows linearly from phase1_max_steps to
    // phase2_max_steps over the first ramp_fraction of phase-2 episodes.
    bool ramp_phase2 = true;
    double ramp_fraction = 0.2;

    void validate() const;
};

enum class Termination { None, Horizon, BelowBreakeven, InvalidAction };
const char* termination_label(Termination t);

struct StepRecord {
    Observation observation;  // observation after the step
    ActionVector action;
    double reward = 0.0;
    double mean_fidelity = 1.0;
    double breakeven = 1.0;
};

struct EpisodeRecord {
    double gamma_b_ratio = 0.0, eta2 = 0.0, g_ratio = 0.0;
    std::vector<StepRecord> steps;
    Termination termination = Termination::None;
    double final_eps = 0.0;
    double total_reward = 0.0;
};

/// Delta-fidelity increment (the documented reward failure mode).
double reward_delta_fidelity(double f_k, double f_k_minus_1);

class AqecEnv {
  public:
    AqecEnv(CurriculumSchedule schedule, RewardConfig reward, int fock_dim = kDefaultFockDim);

    /// Samples zeta with the seeded generator and returns the initial
    /// observation (fidelities 1, zero actions).
    Observation reset(std::uint64_t seed);

    struct StepResult {
        Observation observation;
        double reward = 0.0;
        bool done = false;
        Termination termination = Termination::None;
        double mean_fidelity = 1.0;
        double eps = 0.0;
    };
    StepResult step(const ActionVector& action);

    int max_steps() const { return max_steps_; }
    void set_max_steps(int k);
    int steps_taken() const { return static_cast<int>(record_.steps.size()); }
    bool episode_active() const { return active_; }
    double current_tau() const { return tau_; }
    const EpisodeRecord& record() const { return record_; }
    int fock_dim() const { return dim_; }
    const RewardConfig& reward_config() const { return reward_; }
    void set_reward_mode(RewardConfig::Mode m) { reward_.mode = m; }

    /// epsilon = mean fidelity - breakeven at the cumulative tau.
    static double epsilon(double mean_fidelity, double tau);

  private:
    Observation make_observation(const std::array<double, 6>& fids,
                                 const RealVector& prev_action,
                                 const RealVector& init_action) const;

    CurriculumSchedule schedule_;
    RewardConfig reward_;
    int dim_;
    int max_steps_;

    bool active_ = false;
    double tau_ = 0.0;
    double gamma_b_ = 0.0, eta_ = 0.0, g_ = 0.0;
    double lambda_eng_ = 0.0;
    double prev_mean_fid_ = 1.0;
    std::array<Matrix, 6> initial_states_;
    std::array<Matrix, 6> current_states_;
    bool states_ready_ = false;
    RealVector prev_action_;
    RealVector init_action_;
    EpisodeRecord record_;
};

}  // namespace aqec::rl
