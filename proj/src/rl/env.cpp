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

#include "aqec/rl/env.hpp"

#include <cmath>

#include "aqec/codes.hpp"
#include "aqec/fidelity.hpp"

namespace aqec::rl {

RealVector ActionVector::concat() const {
    RealVector out(c.size() + d.size());
    out << c, d;
    return out;
}

ActionVector ActionVector::split(const RealVector& flat, int fock_dim) {
    if (flat.size() != 2 * fock_dim - 1) throw StructuralError("action length mismatch");
    return {flat.head(fock_dim), flat.tail(fock_dim - 1)};
}

void RewardConfig::validate() const {
    if (!(f1 > f2 && f2 >= 0.0)) throw ConfigError("reward config requires f1 > f2 >= 0");
}

void CurriculumSchedule::validate() const {
    if (phase1_max_steps < 1 || phase2_max_steps < phase1_max_steps) {
        throw ConfigError("schedule requires 1 <= K1 <= K2");
    }
    if (step_tau <= 0.0) throw ConfigError("step_tau must be > 0");
    if (episodes_phase1 < 0 || episodes_phase2 < 0) throw ConfigError("episode counts >= 0");
    if (gamma_b_hi < gamma_b_lo || eta_hi < eta_lo || g_hi < g_lo) {
        throw ConfigError("zeta ranges must be ordered");
    }
    if (ramp_fraction <= 0.0 || ramp_fraction > 1.0) throw ConfigError("ramp fraction in (0,1]");
}

const char* termination_label(Termination t) {
    switch (t) {
        case Termination::None: return "none";
        case Termination::Horizon: return "horizon";
        case Termination::BelowBreakeven: return "below_breakeven";
        case Termination::InvalidAction: return "invalid_action";
    }
    return "?";
}

double reward_delta_fidelity(double f_k, double f_k_minus_1) { return f_k - f_k_minus_1; }

AqecEnv::AqecEnv(CurriculumSchedule schedule, RewardConfig reward, int fock_dim)
    : schedule_(std::move(schedule)), reward_(reward), dim_(fock_dim),
      max_steps_(schedule_.phase1_max_steps) {
    schedule_.validate();
    reward_.validate();
    if (dim_ < 2) throw ConfigError("fock_dim must be >= 2");
}

void AqecEnv::set_max_steps(int k) {
    if (k < 1) throw ConfigError("max steps must be >= 1");
    max_steps_ = k;
}

double AqecEnv::epsilon(double mean_fidelity, double tau) {
    return mean_fidelity - breakeven_reference(tau);
}

Observation AqecEnv::make_observation(const std::array<double, 6>& fids,
                                      const RealVector& prev_action,
                                      const RealVector& init_action) const {
    Observation o;
    o.v.resize(Observation::dim(dim_));
    int pos = 0;
    for (double f : fids) o.v(pos++) = f;
    o.v.segment(pos, prev_action.size()) = prev_action;
    pos += static_cast<int>(prev_action.size());
    o.v.segment(pos, init_action.size()) = init_action;
    pos += static_cast<int>(init_action.size());
    auto norm01 = [](double x, double lo, double hi) {
        return hi > lo ? (x - lo) / (hi - lo) : 0.0;
    };
    o.v(pos++) = norm01(gamma_b_, schedule_.gamma_b_lo, schedule_.gamma_b_hi);
    o.v(pos++) = norm01(eta_, schedule_.eta_lo, schedule_.eta_hi);
    o.v(pos++) = norm01(g_, schedule_.g_lo, schedule_.g_hi);
    return o;
}

Observation AqecEnv::reset(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (schedule_.fixed_zeta) {
        gamma_b_ = schedule_.fixed_gamma_b;
        eta_ = schedule_.fixed_eta;
        g_ = schedule_.fixed_g;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        gamma_b_ = schedule_.gamma_b_lo + (schedule_.gamma_b_hi - schedule_.gamma_b_lo) * u(rng);
        eta_ = schedule_.eta_lo + (schedule_.eta_hi - schedule_.eta_lo) * u(rng);
        g_ = schedule_.g_lo + (schedule_.g_hi - schedule_.g_lo) * u(rng);
    }
    lambda_eng_ = SystemParams::make(gamma_b_, eta_, g_).pump_ratio();
    tau_ = 0.0;
    prev_mean_fid_ = 1.0;
    states_ready_ = false;
    active_ = true;
    const int act_len = 2 * dim_ - 1;
    prev_action_ = RealVector::Zero(act_len);
    init_action_ = RealVector::Zero(act_len);
    record_ = EpisodeRecord{};
    record_.gamma_b_ratio = gamma_b_;
    record_.eta2 = eta_;
    record_.g_ratio = g_;
    return make_observation({1, 1, 1, 1, 1, 1}, prev_action_, init_action_);
}

AqecEnv::StepResult AqecEnv::step(const ActionVector& action) {
    if (!active_) throw StructuralError("step on an inactive episode; call reset first");
    if (action.c.size() != dim_ || action.d.size() != dim_ - 1) {
        throw StructuralError("action dimensions do not match the Fock space");
    }
    StepResult res;
    const bool first_step = !states_ready_;
    const RealVector flat = action.concat();

    // Invalid action: all-one-sign codeword part or a numerically zero ladder.
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < action.c.size(); ++i) {
        has_pos = has_pos || action.c(i) > 0.0;
        has_neg = has_neg || action.c(i) < 0.0;
    }
    const bool ladder_ok = action.d.cwiseAbs().norm() > 1e-9;
    if (!(has_pos && has_neg) || !ladder_ok) {
        active_ = false;
        record_.termination = Termination::InvalidAction;
        res.reward = reward_.penalty;
        res.done = true;
        res.termination = Termination::InvalidAction;
        res.mean_fidelity = prev_mean_fid_;
        res.eps = epsilon(prev_mean_fid_, tau_);
        res.observation = make_observation({1, 1, 1, 1, 1, 1}, flat, init_action_);
        record_.total_reward += res.reward;
        record_.steps.push_back({res.observation, action, res.reward, res.mean_fidelity,
                                 breakeven_reference(tau_)});
        return res;
    }

    if (first_step) {
        Codeword code = codeword_from_action(action.c);
        initial_states_ = cardinal_matrices(code);
        current_states_ = initial_states_;
        init_action_ = flat;
        states_ready_ = true;
    }
    ProjectorLadder ladder(action.d.cwiseAbs(), dim_);
    AnalyticPropagator prop(dim_, LossChannelSet::with_double_photon(eta_), ladder, lambda_eng_);

    std::array<double, 6> fids{};
    double fbar = 0.0;
    for (int i = 0; i < 6; ++i) {
        current_states_[i] = prop.evolve_matrix(current_states_[i], schedule_.step_tau);
        fids[i] = initial_states_[i].conjugate().cwiseProduct(current_states_[i]).sum().real();
        fbar += fids[i];
    }
    fbar /= 6.0;
    tau_ += schedule_.step_tau;
    const double eps = epsilon(fbar, tau_);

    // Action consistency (1 on the first step, clipped to 1 above 0.97).
    double alpha = 1.0;
    if (!first_step) {
        const double denom = prev_action_.norm() * flat.norm();
        alpha = denom > 0.0 ? prev_action_.dot(flat) / denom : 0.0;
        if (alpha > reward_.alpha_clip) alpha = 1.0;
    }

    bool done = false;
    Termination term = Termination::None;
    double reward = 0.0;
    switch (reward_.mode) {
        case RewardConfig::Mode::Phase1:
            reward = reward_.f1 * eps;
            break;
        case RewardConfig::Mode::Phase2:
            if (eps < 0.0) {
                reward = reward_.penalty;
                done = true;
                term = Termination::BelowBreakeven;
            } else {
                reward = reward_.f1 * eps + reward_.f2 * alpha;
            }
            break;
        case RewardConfig::Mode::DeltaFidelity:
            reward = reward_delta_fidelity(fbar, prev_mean_fid_);
            break;
    }
    prev_action_ = flat;
    prev_mean_fid_ = fbar;

    if (!done && steps_taken() + 1 >= max_steps_) {
        done = true;
        term = Termination::Horizon;
    }

    res.observation = make_observation(fids, flat, init_action_);
    res.reward = reward;
    res.done = done;
    res.termination = term;
    res.mean_fidelity = fbar;
    res.eps = eps;

    record_.steps.push_back({res.observation, action, reward, fbar, breakeven_reference(tau_)});
    record_.total_reward += reward;
    record_.final_eps = eps;
    if (done) {
        record_.termination = term;
        active_ = false;
    }
    return res;
}

}  // namespace aqec::rl
