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

#include <vector>

#include "aqec/core.hpp"

// Fock-space operator algebra. The dissipator convention throughout is
// D[X]rho = 2 X rho X^dag - X^dag X rho - rho X^dag X (rates carry the 1/2).
namespace aqec {

/// Falling factorial A^m_k = k!/(k-m)!, zero for k < m.
double falling_factorial(int k, int m);

/// a^n in the N-dimensional truncation.
Matrix annihilation_power(int dim, int n);

/// L_o = sum_k coeff(k) |k+1><k|.
Matrix ladder_matrix(const ProjectorLadder& ladder);

/// L_eng = L_o / sqrt(Lambda), the normalization under which D[L_eng]
/// carries the 1/Lambda prefactor.
Matrix engineered_jump(const ProjectorLadder& ladder);

/// D[X]rho evaluated by explicit matrix products.
Matrix dissipator(const Matrix& X, const Matrix& rho);

DiagonalVector extract_diagonal(const FockDensityMatrix& rho, int m);
std::vector<DiagonalVector> extract_all_diagonals(const FockDensityMatrix& rho);

/// Rebuilds a density matrix from one DiagonalVector per offset in
/// [-(N-1), N-1]. Conjugate diagonals are symmetrized; a mismatch beyond
/// 1e-8 is a structural error.
FockDensityMatrix assemble_from_diagonals(const std::vector<DiagonalVector>& diags,
                                          int dim, double trace_tol = FockDensityMatrix::kTraceTol);

/// D[a^n]rho element-wise:
///   D[a^n]_{ij} = 2 sqrt(A^n_{i+n} A^n_{j+n}) rho_{i+n,j+n}
///                 - (A^n_i + A^n_j) rho_{ij},
/// with indices beyond the truncation treated as zero.
Matrix apply_lindblad_an(const FockDensityMatrix& rho, int n);

/// D[L_eng]rho element-wise:
///   D[L_eng]_{ij} = (1/Lambda) [2 lam_{i-1} lam_{j-1} rho_{i-1,j-1}
///                               - (lam_i^2 + lam_j^2) rho_{ij}],
/// lam_k multiplying |k+1><k| and zero out of range.
Matrix apply_lindblad_eng(const FockDensityMatrix& rho, const ProjectorLadder& ladder);

}  // namespace aqec
