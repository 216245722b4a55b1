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
#include <optional>
#include <vector>

#include "aqec/analytic_solver.hpp"
#include "aqec/core.hpp"

// Fidelity metrics. Fidelity is Tr(rho_0 rho_t) throughout (the overlap
// definition, not the Uhlmann fidelity).
namespace aqec {

enum class CardinalLabel { PlusX, MinusX, PlusY, MinusY, PlusZ, MinusZ };

/// The six +-x, +-y, +-z logical Bloch states of a code.
struct CardinalSet {
    std::array<FockDensityMatrix, 6> states;
    static const std::array<CardinalLabel, 6> kLabels;
};

CardinalSet cardinal_states(const Codeword& code);

/// Raw-matrix variant used by the solvers' hot paths.
std::array<Matrix, 6> cardinal_matrices(const Codeword& code);

enum class SolverChoice { Analytic, Dense };

/// Six-state mean fidelity after evolving for tau. `lambda_eng` is the
/// literal D[L_eng]/2 multiplier; the dense route realizes it with the
/// hybrid model at gamma_b_ratio (g chosen so 4 g^2/(gamma_a gamma_b) =
/// lambda_eng).
double mean_fidelity(const Codeword& code, const LossChannelSet& channels,
                     const std::optional<ProjectorLadder>& ladder, double lambda_eng,
                     double tau, SolverChoice solver = SolverChoice::Analytic,
                     double dense_gamma_b_ratio = 1800.0);

/// Mean fidelity over a nondecreasing tau grid (one decomposition).
std::vector<double> mean_fidelity_series(const Codeword& code, const LossChannelSet& channels,
                                         const std::optional<ProjectorLadder>& ladder,
                                         double lambda_eng, const std::vector<double>& taus);

/// Fidelity map over the Bloch sphere: theta in {0, pi/10, ..., pi} (rows),
/// phi in {0, pi/20, ..., 2 pi - pi/20} (columns).
struct BlochScan {
    double theta_step;
    double phi_step;
    RealMatrix grid;

    double min() const { return grid.minCoeff(); }
    double max() const { return grid.maxCoeff(); }
};

BlochScan bloch_scan(const Codeword& code, const LossChannelSet& channels,
                     const std::optional<ProjectorLadder>& ladder, double lambda_eng,
                     double tau);

/// Exact free-decay six-state fidelity of the |0>,|1> code:
/// 1/2 + exp(-tau)/6 + exp(-tau/2)/3.
double breakeven_reference(double tau);

/// (1 - f_be) / (1 - f_code); absent when f_code >= 1 (0/0 at tau = 0).
std::optional<double> gain(double f_code, double f_be);

/// Wigner transform on a quadrature grid, parity convention:
/// W(0,0) = (1/pi) sum_n (-1)^n rho_nn and integral over dx dp = Tr rho.
struct WignerGrid {
    double x_min = -4.5, x_max = 4.5;
    double p_min = -4.5, p_max = 4.5;
    int nx = 91, np = 91;
};

RealMatrix wigner(const FockDensityMatrix& rho, const WignerGrid& grid);

/// Grid quadrature of a Wigner array (matches the grid used to emit it).
double wigner_integral(const RealMatrix& w, const WignerGrid& grid);

}  // namespace aqec
