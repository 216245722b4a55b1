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

#include <optional>
#include <string>

#include "aqec/rl/env.hpp"
#include "aqec/rl/policy.hpp"
#include "aqec/rl/ppo.hpp"

// Two-phase curriculum driver: short-horizon exploration with the plain
// fidelity-gain reward, then long horizons with the consistency term,
// warm-started from the phase-1 networks.
namespace aqec::rl {

struct TrainConfig {
    CurriculumSchedule schedule;
    RewardConfig reward;  // f1/f2/penalty shared; the mode is set per phase
    PpoConfig ppo;
    PolicyConfig net;
    std::uint64_t seed = 1;
    int fock_dim = kDefaultFockDim;
    std::string out_dir;  // empty: keep everything in memory
    int log_every = 1;    // episode-record sampling interval for the JSONL log
};

struct EpisodeSummary {
    int episode = 0;
    int phase = 1;
    int steps = 0;
    double total_reward = 0.0;
    double final_eps = 0.0;
    Termination termination = Termination::None;
};

struct BestCode {
    RealVector codeword_action;  // step-1 c
    RealVector ladder_action;    // final-step d
    double eps = -1e300;
    int episode = -1;
    int phase = 0;
    bool found() const { return episode >= 0; }
};

struct TrainingArtifact {
    PolicyNet policy;
    std::vector<EpisodeSummary> summaries;
    BestCode best;
    int skipped_minibatches = 0;
};

TrainingArtifact run_curriculum(const TrainConfig& cfg);

/// Versioned binary checkpoint with an embedded config hash.
void save_checkpoint(const PolicyNet& policy, const std::string& path,
                     std::uint64_t config_hash);
PolicyNet load_checkpoint(const std::string& path,
                          std::uint64_t* config_hash_out = nullptr);

/// Deterministic per-episode seed derivation (splitmix64 over the master
/// seed and episode coordinates).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t phase, std::uint64_t episode);

}  // namespace aqec::rl
