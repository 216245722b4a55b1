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

#include <functional>
#include <optional>
#include <vector>

#include "aqec/core.hpp"

// Brute-force reference: generic adaptive Lindblad integration on the full
// cavity (x) ancilla (x readout) space, in dimensionless time tau = gamma_a t.
// Rates follow Eq.-4 convention: each channel enters as (rate/2) D[X].
namespace aqec {

class Codeword;
class ProjectorLadder;

/// Density matrix on the tensor-product space cavity (x) ancilla ((x) readout).
struct HybridState {
    int cavity_dim = kDefaultFockDim;
    int ancilla_dim = 2;
    int readout_dim = 0;  // 0 = absent
    Matrix entries;

    int total_dim() const { return cavity_dim * ancilla_dim * std::max(readout_dim, 1); }

    /// rho_cavity (x) |g><g| ((x) |0><0|).
    static HybridState embed_cavity(const Matrix& rho_cavity, int ancilla_dim = 2,
                                    int readout_dim = 0);
    /// Partial trace over the ancilla (and readout, when present).
    Matrix reduce_cavity() const;

    void validate(double trace_tol = FockDensityMatrix::kTraceTol) const;
};

struct CollapseOp {
    double rate;  // in units of gamma_a
    Matrix op;
};

/// Time-dependent extension of a static model: coeff(t) multiplies `op`
/// either as a Hamiltonian term or as a collapse rate.
struct TimeDepTerm {
    std::function<double(double)> coeff;
    Matrix op;
    bool hamiltonian = false;
};

struct LindbladModel {
    Matrix hamiltonian;  // static part; zero matrix allowed
    std::vector<CollapseOp> collapse;
    std::vector<TimeDepTerm> time_dep;
};

/// d rho/d tau = -i [H, rho] + sum_k (rate_k/2) D[X_k] rho.
Matrix lindblad_rhs(const LindbladModel& model, double t, const Matrix& rho);

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_floor = 1e-12;
    double dt_init = 1e-4;
    double dt_min = 1e-13;
    double dt_max = 0.0;  // 0 = unlimited; small fixed values give fixed-step runs
};

/// Adaptive Dormand-Prince RK45. Returns the state at each requested grid
/// time (grid must be nondecreasing, starting at t >= 0). Throws
/// NumericalError naming the time when the step size underflows.
std::vector<Matrix> integrate(const Matrix& rho0, const LindbladModel& model,
                              const std::vector<double>& t_grid,
                              const IntegratorOptions& opts = {});

/// Hybrid AQEC model: H = g (L_eng sigma_+ + L_eng^dag sigma_-), collapse
/// {sqrt(gamma_a) a, sqrt(gamma_a2) a^2, sqrt(gamma_b) sigma_-}.
LindbladModel aqec_hybrid_model(const ProjectorLadder& ladder, const SystemParams& params);

/// Mean fidelity F(tau) of the six cardinal states under the hybrid model.
std::vector<double> simulate_aqec_hybrid(const Codeword& code, const ProjectorLadder& ladder,
                                         const SystemParams& params,
                                         const std::vector<double>& tau_grid,
                                         const IntegratorOptions& opts = {});

/// Ohmic-bath dephasing parameters, in gamma_a = 1 units.
struct PhaseDampingParams {
    double omega_c = 1.0;  // cutoff frequency / gamma_a
    double s = 2.0;        // ohmicity
    bool s_multiplied_arctan = false;  // sin(s arctan(w t)) variant behind a flag

    void validate() const;
};

/// gamma(t) = omega_c Gamma[s] sin(arctan(omega_c t)) / (1+(omega_c t)^2)^{s/2}.
double phase_damping_rate(double t, const PhaseDampingParams& p);

std::vector<double> simulate_phase_damping(const Codeword& code, const ProjectorLadder& ladder,
                                           const SystemParams& params,
                                           const PhaseDampingParams& p,
                                           const std::vector<double>& tau_grid,
                                           const IntegratorOptions& opts = {});

/// Lorentzian-reservoir amplitude damping on the ancilla, gamma_a = 1 units.
struct AmplitudeDampingParams {
    double gamma0 = 0.0;   // reservoir-transmon coupling
    double width = 1.0;    // Lorentzian width lambda_L
    double detuning = 0.0; // Delta = omega_0 - omega_c

    void validate() const;
};

/// h(t) = -2 Im(Rdot/R), gamma(t) = -2 Re(Rdot/R) with R(t) from the
/// closed form; Rdot/R is evaluated analytically (no finite differences).
/// Throws NumericalError when |R(t)| <= 1e-12.
struct AmplitudeDampingFunctions {
    double h;
    double gamma;
};
AmplitudeDampingFunctions amplitude_damping_functions(double t, const AmplitudeDampingParams& p);

/// |R(t)| itself, exposed for the singularity check and tests.
Complex amplitude_damping_R(double t, const AmplitudeDampingParams& p);

std::vector<double> simulate_amplitude_damping(const Codeword& code,
                                               const ProjectorLadder& ladder,
                                               const SystemParams& params,
                                               const AmplitudeDampingParams& p,
                                               const std::vector<double>& tau_grid,
                                               const IntegratorOptions& opts = {});

/// Three-mode lab-configuration parameters, in gamma_a = 1 units.
struct RwaParams {
    double gamma_b_ratio = 10.0;
    double gamma_c_ratio = 1200.0;
    double g0_ratio = 600.0;
    double g1_ratio = 800.0;
    double eta2 = 0.01;
};

struct RwaResult {
    std::vector<double> taus;
    std::vector<double> mean_fidelity;
    std::vector<double> breakeven;
    std::vector<std::optional<double>> gain;  // absent where F >= 1
    bool regime_warning = false;  // gamma_c >> g1 >= |g0| >> gamma_a, gamma_b violated
};

/// Cavity (x) qubit (x) readout(2) evolution under
/// H = g0 (L_o sigma_+ + h.c.) + g1 sum_n |n><n| (c^dag sigma_- + c sigma_+),
/// with n running over the ladder's target levels. The ladder enters
/// unnormalized (the drive engineering fixes unit weights per projector).
RwaResult simulate_rwa_three_mode(const Codeword& code, const ProjectorLadder& ladder,
                                  const RwaParams& params, const std::vector<double>& tau_grid,
                                  const IntegratorOptions& opts = {});

}  // namespace aqec
