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

#include "aqec/rl/curriculum.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "aqec/io.hpp"

namespace aqec::rl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

nlohmann::json record_to_json(int episode, int phase, const EpisodeRecord& rec) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : rec.steps) {
        nlohmann::json js;
        js["observation"] = std::vector<double>(s.observation.v.data(),
                                                s.observation.v.data() + s.observation.v.size());
        js["action_c"] = std::vector<double>(s.action.c.data(), s.action.c.data() + s.action.c.size());
        js["action_d"] = std::vector<double>(s.action.d.data(), s.action.d.data() + s.action.d.size());
        js["reward"] = s.reward;
        js["mean_fidelity"] = s.mean_fidelity;
        js["breakeven"] = s.breakeven;
        steps.push_back(std::move(js));
    }
    return nlohmann::json{{"episode", episode},
                          {"phase", phase},
                          {"zeta", {{"gamma_b_ratio", rec.gamma_b_ratio},
                                    {"eta2", rec.eta2},
                                    {"g_ratio", rec.g_ratio}}},
                          {"termination", termination_label(rec.termination)},
                          {"total_reward", rec.total_reward},
                          {"final_eps", rec.final_eps},
                          {"steps", std::move(steps)}};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t phase, std::uint64_t episode) {
    return splitmix64(master ^ splitmix64(phase * 0x100000001b3ull + episode));
}

TrainingArtifact run_curriculum(const TrainConfig& cfg) {
    cfg.schedule.validate();
    cfg.reward.validate();
    if (Observation::dim(cfg.fock_dim) != cfg.net.obs_dim) {
        throw ConfigError("policy obs_dim must equal the environment observation length");
    }
    if (cfg.net.act_dim_c != cfg.fock_dim || cfg.net.act_dim_d != cfg.fock_dim - 1) {
        throw ConfigError("policy action heads must match the Fock dimension");
    }

    TrainingArtifact art{PolicyNet(cfg.net, derive_seed(cfg.seed, 0, 0)), {}, {}, 0};
    PpoUpdater updater(art.policy, cfg.ppo);
    std::mt19937_64 rng_actions(derive_seed(cfg.seed, 0, 1));
    std::mt19937_64 rng_shuffle(derive_seed(cfg.seed, 0, 2));

    std::ofstream log;
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        log.open(cfg.out_dir + "/episodes.jsonl");
        if (!log) throw ConfigError("cannot open episode log in " + cfg.out_dir);
    }
    nlohmann::json cfg_fingerprint{{"seed", cfg.seed},
                                   {"episodes_phase1", cfg.schedule.episodes_phase1},
                                   {"episodes_phase2", cfg.schedule.episodes_phase2}};
    const std::uint64_t ckpt_hash = config_hash(cfg_fingerprint);

    AqecEnv env(cfg.schedule, cfg.reward, cfg.fock_dim);
    std::vector<Transition> traj;
    std::vector<Transition> pool;
    int global_episode = 0;
    for (int phase = 1; phase <= 2; ++phase) {
        const int episodes =
            phase == 1 ? cfg.schedule.episodes_phase1 : cfg.schedule.episodes_phase2;
        env.set_reward_mode(phase == 1 ? RewardConfig::Mode::Phase1 : RewardConfig::Mode::Phase2);
        pool.clear();
        int pooled_episodes = 0;
        for (int ep = 0; ep < episodes; ++ep, ++global_episode) {
            int horizon = cfg.schedule.phase1_max_steps;
            if (phase == 2) {
                horizon = cfg.schedule.phase2_max_steps;
                if (cfg.schedule.ramp_phase2) {
                    const int ramp_eps =
                        std::max(1, static_cast<int>(cfg.schedule.ramp_fraction * episodes));
                    if (ep < ramp_eps) {
                        const double frac = static_cast<double>(ep) / ramp_eps;
                        horizon = cfg.schedule.phase1_max_steps +
                                  static_cast<int>(frac * (cfg.schedule.phase2_max_steps -
                                                           cfg.schedule.phase1_max_steps));
                    }
                }
            }
            env.set_max_steps(horizon);
            Observation obs = env.reset(derive_seed(cfg.seed, phase, ep));
            traj.clear();
            bool done = false;
            while (!done) {
                SampledAction sa = art.policy.sample(obs.v, rng_actions);
                ActionVector action = ActionVector::split(sa.action, cfg.fock_dim);
                auto sr = env.step(action);
                traj.push_back(
                    {obs.v, sa.pre_squash, sa.log_prob, sa.value, sr.reward, 0.0, 0.0});
                obs = sr.observation;
                done = sr.done;
            }
            const EpisodeRecord& rec = env.record();
            if (rec.termination != Termination::InvalidAction && !rec.steps.empty() &&
                rec.final_eps > art.best.eps) {
                art.best.eps = rec.final_eps;
                art.best.episode = global_episode;
                art.best.phase = phase;
                art.best.codeword_action = rec.steps.front().action.c;
                art.best.ladder_action = rec.steps.back().action.d;
            }
            compute_advantages(traj, cfg.ppo.discount);
            pool.insert(pool.end(), traj.begin(), traj.end());
            ++pooled_episodes;
            if (pooled_episodes >= cfg.ppo.episodes_per_update || ep + 1 == episodes) {
                auto stats = updater.update(pool, rng_shuffle);
                art.skipped_minibatches += stats.skipped_minibatches;
                pool.clear();
                pooled_episodes = 0;
            }
            art.summaries.push_back({global_episode, phase, static_cast<int>(rec.steps.size()),
                                     rec.total_reward, rec.final_eps, rec.termination});
            if (log && (global_episode % std::max(1, cfg.log_every)) == 0) {
                log << record_to_json(global_episode, phase, rec).dump() << "\n";
            }
        }
        if (!cfg.out_dir.empty()) {
            save_checkpoint(art.policy,
                            cfg.out_dir + "/phase" + std::to_string(phase) + ".ckpt", ckpt_hash);
        }
    }
    return art;
}

namespace {
constexpr std::uint32_t kCkptMagic = 0x4b435141;  // "AQCK"
constexpr std::uint32_t kCkptVersion = 1;
}  // namespace

void save_checkpoint(const PolicyNet& policy, const std::string& path,
                     std::uint64_t config_hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open checkpoint for writing: " + path);
    auto put32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put32(kCkptMagic);
    put32(kCkptVersion);
    put64(config_hash);
    const auto& cfg = policy.config();
    put32(static_cast<std::uint32_t>(cfg.obs_dim));
    put32(static_cast<std::uint32_t>(cfg.hidden.size()));
    for (int h : cfg.hidden) put32(static_cast<std::uint32_t>(h));
    put32(static_cast<std::uint32_t>(cfg.act_dim_c));
    put32(static_cast<std::uint32_t>(cfg.act_dim_d));
    const RealVector theta = policy.get_params();
    put64(static_cast<std::uint64_t>(theta.size()));
    out.write(reinterpret_cast<const char*>(theta.data()),
              static_cast<std::streamsize>(theta.size() * sizeof(double)));
}

PolicyNet load_checkpoint(const std::string& path, std::uint64_t* config_hash_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open checkpoint: " + path);
    auto get32 = [&]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get64 = [&]() {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    if (get32() != kCkptMagic) throw ConfigError("not a checkpoint file: " + path);
    if (get32() != kCkptVersion) throw ConfigError("unsupported checkpoint version");
    const std::uint64_t hash = get64();
    if (config_hash_out) *config_hash_out = hash;
    PolicyConfig cfg;
    cfg.obs_dim = static_cast<int>(get32());
    const int n_hidden = static_cast<int>(get32());
    cfg.hidden.clear();
    for (int i = 0; i < n_hidden; ++i) cfg.hidden.push_back(static_cast<int>(get32()));
    cfg.act_dim_c = static_cast<int>(get32());
    cfg.act_dim_d = static_cast<int>(get32());
    PolicyNet policy(cfg, 0);
    const auto n = static_cast<Eigen::Index>(get64());
    if (n != policy.num_params()) throw ConfigError("checkpoint parameter count mismatch");
    RealVector theta(n);
    in.read(reinterpret_cast<char*>(theta.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw ConfigError("truncated checkpoint: " + path);
    policy.set_params(theta);
    return policy;
}

}  // namespace aqec::rl
