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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "aqec/codes.hpp"
#include "aqec/fidelity.hpp"
#include "aqec/rl/curriculum.hpp"
#include "aqec/rl/env.hpp"
#include "aqec/rl/policy.hpp"
#include "aqec/rl/ppo.hpp"

using namespace aqec;
using namespace aqec::rl;

namespace {

CurriculumSchedule paper_schedule() {
    CurriculumSchedule s;
    s.fixed_zeta = true;
    s.fixed_gamma_b = 1800.0;
    s.fixed_eta = 0.012;
    s.fixed_g = 600.0;
    return s;
}

ActionVector grl_action() {
    RealVector c = RealVector::Zero(8);
    c(4) = 0.9;
    c(7) = -0.9;
    RealVector d = RealVector::Zero(7);
    d(2) = d(3) = d(5) = d(6) = 0.5;
    return {c, d};
}

}  // namespace

TEST_CASE("observation layout and reset determinism") {
    AqecEnv env(paper_schedule(), RewardConfig{});
    auto obs = env.reset(42);
    CHECK(obs.v.size() == 39);
    for (int i = 0; i < 6; ++i) CHECK(obs.v(i) == doctest::Approx(1.0));
    for (int i = 6; i < 36; ++i) CHECK(obs.v(i) == doctest::Approx(0.0));
    // zeta normalized into [0,1]
    for (int i = 36; i < 39; ++i) {
        CHECK(obs.v(i) >= 0.0);
        CHECK(obs.v(i) <= 1.0);
    }

    CurriculumSchedule random_sched;
    AqecEnv env2(random_sched, RewardConfig{});
    auto a = env2.reset(7);
    auto b = env2.reset(7);
    CHECK((a.v - b.v).cwiseAbs().maxCoeff() == 0.0);
    auto c = env2.reset(8);
    CHECK((a.v - c.v).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("epsilon consistency and the phase-1 reward") {
    RewardConfig rc;
    rc.mode = RewardConfig::Mode::Phase1;
    AqecEnv env(paper_schedule(), rc);
    env.reset(1);
    auto action = grl_action();
    auto sr = env.step(action);

    // Independent route: mean_fidelity at the same cumulative tau.
    auto grl = named_code("grl");
    const double lambda = SystemParams::make(1800.0, 0.012, 600.0).pump_ratio();
    const double f_ref = mean_fidelity(grl.code, LossChannelSet::with_double_photon(0.012),
                                       grl.ladder, lambda, 0.06);
    const double eps_ref = f_ref - breakeven_reference(0.06);
    CHECK(std::abs(sr.eps - eps_ref) < 1e-9);
    CHECK(sr.reward == doctest::Approx(250.0 * eps_ref).epsilon(1e-9));
    CHECK(!sr.done);

    // Second identical step: cumulative tau composes.
    auto sr2 = env.step(action);
    const double f_ref2 = mean_fidelity(grl.code, LossChannelSet::with_double_photon(0.012),
                                        grl.ladder, lambda, 0.12);
    CHECK(std::abs(sr2.mean_fidelity - f_ref2) < 1e-9);
    CHECK(std::abs(sr2.eps - (f_ref2 - breakeven_reference(0.12))) < 1e-9);
}

TEST_CASE("phase-2 reward adds the clipped consistency term") {
    // GRL sits below breakeven during the initial dip (tau < ~0.4), so use
    // a coarser step where eps is comfortably positive.
    RewardConfig rc;
    rc.mode = RewardConfig::Mode::Phase2;
    CurriculumSchedule sched = paper_schedule();
    sched.step_tau = 0.6;
    AqecEnv env(sched, rc);
    env.set_max_steps(10);
    env.reset(1);
    auto action = grl_action();
    auto s1 = env.step(action);
    CHECK(s1.eps > 0.0);  // 0.9175 vs breakeven 0.8384
    // First step: alpha defined as 1.
    CHECK(s1.reward == doctest::Approx(250.0 * s1.eps + 2.0).epsilon(1e-9));
    // Identical consecutive action: cosine similarity 1 (clip keeps it 1).
    auto s2 = env.step(action);
    CHECK(s2.eps > 0.0);
    CHECK(s2.reward == doctest::Approx(250.0 * s2.eps + 2.0).epsilon(1e-9));
    // Reward bound and term ordering at eps >= f2/f1.
    CHECK(s2.reward <= 250.0 * s2.eps + 2.0 + 1e-12);
    if (s2.eps >= 2.0 / 250.0) CHECK(250.0 * s2.eps >= 2.0);

    // A rotated-but-close action keeps alpha below the clip; the reward
    // carries the measured cosine similarity.
    auto action3 = action;
    action3.c(4) = 0.4;
    action3.d(2) = 0.9;
    const RealVector f2v = action.concat();
    const RealVector f3v = action3.concat();
    const double alpha = f2v.dot(f3v) / (f2v.norm() * f3v.norm());
    REQUIRE(alpha < 0.97);
    auto s3 = env.step(action3);
    if (s3.eps >= 0.0) {
        CHECK(s3.reward == doctest::Approx(250.0 * s3.eps + 2.0 * alpha).epsilon(1e-9));
    }
}

TEST_CASE("phase-2 below-breakeven penalty terminates") {
    RewardConfig rc;
    rc.mode = RewardConfig::Mode::Phase2;
    AqecEnv env(paper_schedule(), rc);
    env.reset(1);
    // |6>,|7> code decays far faster than breakeven.
    RealVector c = RealVector::Zero(8);
    c(6) = 1.0;
    c(7) = -1.0;
    RealVector d = RealVector::Zero(7);
    d(0) = 0.5;
    auto sr = env.step({c, d});
    CHECK(sr.done);
    CHECK(sr.termination == Termination::BelowBreakeven);
    CHECK(sr.reward == doctest::Approx(-20.0));
    CHECK(env.record().termination == Termination::BelowBreakeven);
}

TEST_CASE("invalid actions draw the penalty and terminate") {
    AqecEnv env(paper_schedule(), RewardConfig{});
    env.reset(3);
    RealVector c = RealVector::Ones(8);  // all one sign
    RealVector d = RealVector::Zero(7);
    d(0) = 1.0;
    auto sr = env.step({c, d});
    CHECK(sr.done);
    CHECK(sr.termination == Termination::InvalidAction);
    CHECK(sr.reward == doctest::Approx(-20.0));

    env.reset(3);
    auto act = grl_action();
    act.d.setZero();  // degenerate ladder
    auto sr2 = env.step(act);
    CHECK(sr2.termination == Termination::InvalidAction);

    CHECK_THROWS_AS(env.step(act), StructuralError);  // episode already over
}

TEST_CASE("episode determinism and horizon bookkeeping") {
    RewardConfig rc;
    CurriculumSchedule sched;  // randomized zeta
    AqecEnv env1(sched, rc), env2(sched, rc);
    env1.reset(77);
    env2.reset(77);
    auto act = grl_action();
    for (int k = 0; k < 4; ++k) {
        auto a = env1.step(act);
        auto b = env2.step(act);
        CHECK(a.reward == b.reward);  // bit-stable
        CHECK((a.observation.v - b.observation.v).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.done == b.done);
        if (a.done) {
            CHECK(a.termination == Termination::Horizon);
        } else {
            CHECK(a.termination == Termination::None);
        }
    }
    CHECK(env1.record().steps.size() == 4);
    CHECK(env1.steps_taken() <= env1.max_steps());
}

TEST_CASE("delta-fidelity mode and the oscillation pathology") {
    CHECK(reward_delta_fidelity(0.9, 0.9) == doctest::Approx(0.0));
    CHECK(reward_delta_fidelity(0.95, 0.90) == doctest::Approx(0.05));

    // Scripted oscillating-fidelity policy on the code |0_L> = |0>,
    // |1_L> = |7>. The |7> branch and the coherences die within a few steps.
    // Afterwards a |1><0| pump every fourth step expels the vacuum
    // population (fidelity crashes) and the three idle steps let it decay
    // back (fidelity recovers in positive increments). The delta reward pays
    // every recovery stroke while the state never regains breakeven
    // performance: the documented failure mode.
    RewardConfig rc;
    rc.mode = RewardConfig::Mode::DeltaFidelity;
    CurriculumSchedule sched = paper_schedule();
    sched.fixed_eta = 0.0;
    AqecEnv env(sched, rc);
    env.set_max_steps(31);
    env.reset(5);
    RealVector c = RealVector::Zero(8);
    c(0) = 1.0;
    c(7) = -1.0;
    RealVector d_pump = RealVector::Zero(7);
    d_pump(0) = 1.0;  // |1><0| empties the vacuum
    RealVector d_idle = RealVector::Zero(7);
    d_idle(5) = 1.0;  // |6><5| never touches the surviving population
    double cumulative_window = 0.0;
    int positive_steps = 0;
    double final_fid = 1.0, final_tau = 0.0;
    for (int k = 0; k < 31; ++k) {
        const bool pump = (k % 4 == 0);
        auto sr = env.step({c, pump ? d_pump : d_idle});
        if (k >= 9) {  // window from the post-transient trough (k = 8 pump)
            cumulative_window += sr.reward;
            if (sr.reward > 0.0) ++positive_steps;
        }
        final_fid = sr.mean_fidelity;
        final_tau = env.current_tau();
        if (sr.done) break;
    }
    CHECK(cumulative_window > 0.0);
    CHECK(positive_steps >= 10);
    CHECK(final_fid < breakeven_reference(final_tau));
}

TEST_CASE("policy forward contract") {
    PolicyConfig cfg;
    cfg.hidden = {32, 32};
    PolicyNet net(cfg, 11);
    RealVector obs = RealVector::Constant(39, 0.3);
    auto out1 = net.forward(obs);
    auto out2 = net.forward(obs);
    CHECK(out1.mean.size() == 15);
    CHECK(out1.log_std.size() == 15);
    CHECK((out1.mean - out2.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK(out1.value == out2.value);

    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        auto sa = net.sample(obs, rng);
        CHECK(sa.action.cwiseAbs().maxCoeff() < 1.0);
        CHECK(std::isfinite(sa.log_prob));
        CHECK(sa.log_prob == doctest::Approx(net.log_prob(obs, sa.pre_squash)).epsilon(1e-12));
    }

    RealVector bad = net.get_params();
    bad(0) = std::numeric_limits<double>::quiet_NaN();
    net.set_params(bad);
    CHECK_THROWS_AS(net.forward(obs), NumericalError);
}

TEST_CASE("compute_advantages formula") {
    CHECK(advantages_from({5.0}, {0.0}, 0.99)[0] == doctest::Approx(5.0));
    auto a = advantages_from({1.0, 1.0}, {0.0, 0.0}, 0.99);
    CHECK(a[0] == doctest::Approx(1.99));
    CHECK(a[1] == doctest::Approx(1.0));
    // Constant reward with the exact value function: all advantages zero.
    const double g = 0.9;
    std::vector<double> rewards(5, 2.0), values(5);
    for (int t = 0; t < 5; ++t) {
        double v = 0.0;
        for (int k = t; k < 5; ++k) v += 2.0 * std::pow(g, k - t);
        values[t] = v;
    }
    for (double adv : advantages_from(rewards, values, g)) {
        CHECK(adv == doctest::Approx(0.0));
    }
    CHECK_THROWS_AS(advantages_from({1.0}, {0.0}, 1.5), ConfigError);
}

TEST_CASE("PPO ratios at theta = theta_old and clip inactivity") {
    PolicyConfig cfg;
    cfg.obs_dim = 4;
    cfg.hidden = {8};
    cfg.act_dim_c = 2;
    cfg.act_dim_d = 1;
    PolicyNet net(cfg, 5);
    std::mt19937_64 rng(9);
    std::vector<Transition> batch;
    for (int k = 0; k < 6; ++k) {
        RealVector obs = RealVector::Random(4);
        auto sa = net.sample(obs, rng);
        Transition t;
        t.obs = obs;
        t.pre_squash = sa.pre_squash;
        t.log_prob_old = sa.log_prob;  // theta == theta_old
        t.value_old = sa.value;
        t.advantage = (k % 2 == 0) ? 1.0 : -0.5;
        t.return_to_go = 0.3;
        batch.push_back(t);
    }
    PpoConfig pc;
    // At theta_old every ratio is 1, so clipped == unclipped and the
    // surrogate reduces to mean(A).
    double mean_adv = 0.0;
    for (const auto& t : batch) mean_adv += t.advantage;
    mean_adv /= batch.size();
    double vloss = 0.0;
    for (const auto& t : batch) {
        const double dv = net.forward(t.obs).value - t.return_to_go;
        vloss += dv * dv;
    }
    vloss /= batch.size();
    const double expected = -mean_adv + pc.value_coef * vloss - pc.entropy_coef * net.entropy();
    CHECK(ppo_loss(net, batch, pc) == doctest::Approx(expected).epsilon(1e-12));

    // A > 0 with ratio beyond 1+eps: the actor part of the gradient vanishes.
    std::vector<Transition> one(1, batch[0]);
    one[0].advantage = 2.0;
    one[0].log_prob_old = net.log_prob(one[0].obs, one[0].pre_squash) - std::log(1.5);
    PpoConfig actor_only = pc;
    actor_only.value_coef = 0.0;
    actor_only.entropy_coef = 0.0;
    RealVector grad = ppo_loss_gradient(net, one, actor_only);
    CHECK(grad.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("PPO gradient matches central finite differences on a toy policy") {
    PolicyConfig cfg;
    cfg.obs_dim = 1;
    cfg.hidden = {};
    cfg.act_dim_c = 1;
    cfg.act_dim_d = 0;
    PolicyNet net(cfg, 2);
    std::mt19937_64 rng(4);
    std::vector<Transition> batch;
    for (int k = 0; k < 8; ++k) {
        RealVector obs(1);
        obs << 0.5 * (k - 4);
        auto sa = net.sample(obs, rng);
        Transition t;
        t.obs = obs;
        t.pre_squash = sa.pre_squash;
        t.log_prob_old = sa.log_prob;
        t.advantage = (k % 3 == 0) ? 0.8 : -0.6;
        t.return_to_go = 0.2 * k;
        batch.push_back(t);
    }
    PpoConfig pc;
    RealVector theta0 = net.get_params();
    RealVector analytic = ppo_loss_gradient(net, batch, pc);
    const double h = 1e-6;
    for (int i = 0; i < theta0.size(); ++i) {
        RealVector tp = theta0, tm = theta0;
        tp(i) += h;
        tm(i) -= h;
        net.set_params(tp);
        const double lp = ppo_loss(net, batch, pc);
        net.set_params(tm);
        const double lm = ppo_loss(net, batch, pc);
        net.set_params(theta0);
        const double fd = (lp - lm) / (2.0 * h);
        const double scale = std::max(std::abs(fd), 1e-6);
        CHECK(std::abs(analytic(i) - fd) / scale < 1e-4);
    }
}

TEST_CASE("PPO gradient matches finite differences on the full architecture") {
    PolicyConfig cfg;
    cfg.obs_dim = 39;
    cfg.hidden = {12, 10};
    PolicyNet net(cfg, 6);
    std::mt19937_64 rng(12);
    std::vector<Transition> batch;
    for (int k = 0; k < 4; ++k) {
        RealVector obs = RealVector::Random(39);
        auto sa = net.sample(obs, rng);
        Transition t;
        t.obs = obs;
        t.pre_squash = sa.pre_squash;
        t.log_prob_old = sa.log_prob + ((k % 2) ? 0.05 : -0.05);
        t.advantage = (k % 2) ? 1.2 : -0.7;
        t.return_to_go = 0.1 * k;
        batch.push_back(t);
    }
    PpoConfig pc;
    RealVector theta0 = net.get_params();
    RealVector analytic = ppo_loss_gradient(net, batch, pc);
    // Spot-check a spread of parameters (full sweep is ~1000 evals).
    std::mt19937_64 pick(1);
    const double h = 1e-6;
    double worst = 0.0;
    for (int probe = 0; probe < 120; ++probe) {
        const int i = static_cast<int>(pick() % theta0.size());
        RealVector tp = theta0, tm = theta0;
        tp(i) += h;
        tm(i) -= h;
        net.set_params(tp);
        const double lp = ppo_loss(net, batch, pc);
        net.set_params(tm);
        const double lm = ppo_loss(net, batch, pc);
        const double fd = (lp - lm) / (2.0 * h);
        worst = std::max(worst, std::abs(analytic(i) - fd) / std::max(std::abs(fd), 1e-5));
    }
    net.set_params(theta0);
    CHECK(worst < 1e-4);
}

TEST_CASE("PPO update moves the policy and skips non-finite ratios") {
    PolicyConfig cfg;
    cfg.obs_dim = 4;
    cfg.hidden = {8};
    cfg.act_dim_c = 2;
    cfg.act_dim_d = 1;
    PolicyNet net(cfg, 5);
    PpoConfig pc;
    pc.minibatch = 4;
    PpoUpdater upd(net, pc);
    std::mt19937_64 rng(9);
    std::vector<Transition> batch;
    for (int k = 0; k < 12; ++k) {
        RealVector obs = RealVector::Random(4);
        auto sa = net.sample(obs, rng);
        Transition t;
        t.obs = obs;
        t.pre_squash = sa.pre_squash;
        t.log_prob_old = sa.log_prob;
        t.value_old = sa.value;
        t.reward = (k % 2) ? 1.0 : -1.0;
        batch.push_back(t);
    }
    compute_advantages(batch, pc.discount);
    RealVector before = net.get_params();
    auto stats = upd.update(batch, rng);
    CHECK((net.get_params() - before).cwiseAbs().maxCoeff() > 0.0);
    CHECK(stats.skipped_minibatches == 0);

    auto bad = batch;
    bad[0].log_prob_old = -std::numeric_limits<double>::infinity();
    auto stats2 = upd.update(bad, rng);
    CHECK(stats2.skipped_minibatches > 0);
}

TEST_CASE("checkpoint round-trip") {
    PolicyConfig cfg;
    cfg.obs_dim = 7;
    cfg.hidden = {5};
    cfg.act_dim_c = 3;
    cfg.act_dim_d = 2;
    PolicyNet net(cfg, 21);
    const std::string path = std::filesystem::temp_directory_path() / "aqec_ckpt_test.bin";
    save_checkpoint(net, path, 0xabcdef12u);
    std::uint64_t hash = 0;
    PolicyNet loaded = load_checkpoint(path, &hash);
    CHECK(hash == 0xabcdef12u);
    CHECK((loaded.get_params() - net.get_params()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(loaded.config().hidden == cfg.hidden);
    std::filesystem::remove(path);
}

TEST_CASE("run_curriculum with zero episodes returns initialized state") {
    TrainConfig cfg;
    cfg.schedule = paper_schedule();
    cfg.schedule.episodes_phase1 = 0;
    cfg.schedule.episodes_phase2 = 0;
    auto art = run_curriculum(cfg);
    CHECK(art.summaries.empty());
    CHECK(!art.best.found());
    CHECK(art.policy.num_params() > 0);
}

TEST_CASE("run_curriculum short smoke run is deterministic") {
    TrainConfig cfg;
    cfg.schedule = paper_schedule();
    cfg.schedule.episodes_phase1 = 4;
    cfg.schedule.episodes_phase2 = 2;
    cfg.schedule.phase2_max_steps = 6;
    cfg.net.hidden = {16, 16};
    cfg.seed = 99;
    auto a = run_curriculum(cfg);
    auto b = run_curriculum(cfg);
    REQUIRE(a.summaries.size() == 6);
    REQUIRE(b.summaries.size() == 6);
    for (size_t i = 0; i < a.summaries.size(); ++i) {
        CHECK(a.summaries[i].total_reward == b.summaries[i].total_reward);
        CHECK(a.summaries[i].final_eps == b.summaries[i].final_eps);
        CHECK(a.summaries[i].phase == (i < 4 ? 1 : 2));
    }
    CHECK((a.policy.get_params() - b.policy.get_params()).cwiseAbs().maxCoeff() == 0.0);
}
