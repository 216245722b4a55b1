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
#include <utility>
#include <vector>

#include "aqec/core.hpp"

// Construction and static analysis of AQEC codes.
namespace aqec {

struct NamedCode {
    Codeword code;
    std::optional<ProjectorLadder> ladder;
};

/// The benchmark codes. Recovery ladders use equal weights on each code's
/// first-order recovery transitions (grl: {3,4,6,7} per the cascaded design;
/// rl: {2,4}; binomial: {2,4}; t4c: {1,3,5,7}; breakeven: none).
NamedCode named_code(const std::string& name, int dim = kDefaultFockDim);

std::vector<std::string> named_code_list();

/// Sign-partition rule: |0_L> from the positive entries of c, |1_L> from the
/// negated negative entries, each normalized. All-one-sign input is the
/// environment's invalid-action signal.
Codeword codeword_from_action(const RealVector& c);

/// Ladder with the given coefficients (d_n multiplies |n><n-1|, n = 1..N-1).
ProjectorLadder ladder_from_action(const RealVector& d);

enum class ErrorOp { I, A, A2 };
std::string error_op_label(ErrorOp e);

struct KLViolation {
    ErrorOp left;
    ErrorOp right;
    Complex value;  // flip element, or the real dephasing difference in .real()
};

struct KLReport {
    std::vector<ErrorOp> error_set;
    std::vector<KLViolation> flip_violations;       // <0_L| L_i^dag L_j |1_L> != 0
    std::vector<KLViolation> dephasing_violations;  // <1_L|L_i^dag L_j|1_L> - <0_L|...|0_L>
    bool exact() const { return flip_violations.empty() && dephasing_violations.empty(); }
};

KLReport kl_check(const Codeword& code, const std::vector<ErrorOp>& error_set,
                  double tol = 1e-10);

struct CodeAnalysis {
    double mean_photon = 0.0;
    int jump_distance = 0;       // d: max Fock shift of the recovery ladder
    int gate_distance = 0;       // d_g: max Fock gap needed by the Pauli set
    std::vector<std::string> mod3_syndrome_spaces;
};

CodeAnalysis hamiltonian_distances(const Codeword& code,
                                   const std::optional<ProjectorLadder>& ladder);

/// Calibrated protecting factor: log-linear fit of |rho_47(tau)| decay on
/// the m=3 diagonal block of the GRL configuration.
struct ProtectingFactorFit {
    double u = 0.0;
    double residual = 0.0;  // max |log y - fit| over the window
};
ProtectingFactorFit calibrate_protecting_factor(double lambda_eng, double eta,
                                                double tau_lo = 1.0, double tau_hi = 3.0,
                                                int points = 9);

/// F(tau) = 2/3 + (1/3) exp(-u tau); u from the override or the calibrated
/// fit at (lambda = 1e4, eta).
double grl_closed_form(double tau, double eta, std::optional<double> u_override = {});

/// L_o with weights 1 on |4><3|, |7><6| and xi on |3><2|, |6><5|, normalized.
ProjectorLadder xi_family(double xi, int dim = kDefaultFockDim);

}  // namespace aqec
