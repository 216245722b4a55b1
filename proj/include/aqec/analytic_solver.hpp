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

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "aqec/core.hpp"

// Structured Lindblad solver: the master equation
//   d rho / d tau = 1/2 D[a] + sum_{n>=2} (eta_n/2) D[a^n] + (lambda/2) D[L_eng]
// decouples over the 2N-1 diagonals of rho; each diagonal evolves under a
// small real generator solved once by spectral decomposition.
namespace aqec {

/// Photon-loss channels: order n -> eta_n = gamma_{a,n}/gamma_a (eta_1 = 1).
struct LossChannelSet {
    std::map<int, double> orders;

    static LossChannelSet single_photon();
    /// Single-photon loss plus a^2 at ratio eta2 (dropped when eta2 == 0).
    static LossChannelSet with_double_photon(double eta2);

    int max_order() const;
    void validate() const;
};

/// The generator M^(m) of one diagonal, with its cached spectral
/// decomposition. Nonzeros: main diagonal, superdiagonal at offset n per
/// loss order, and the first subdiagonal (engineered gain, flowing up the
/// Fock ladder).
class DiagonalGenerator {
  public:
    DiagonalGenerator(int offset, RealMatrix matrix);

    int offset() const { return offset_; }
    int size() const { return static_cast<int>(matrix_.rows()); }
    const RealMatrix& matrix() const { return matrix_; }

    /// v(tau) = V exp(w tau) V^-1 v0 through the cached eigendecomposition;
    /// falls back to scaling-and-squaring expm when the eigenvector matrix
    /// condition number exceeds 1e8.
    Vector propagate(const Vector& v0, double tau) const;

    bool used_expm_fallback() const { return use_expm_; }
    double max_real_eigenvalue() const;

  private:
    int offset_;
    RealMatrix matrix_;
    Eigen::VectorXcd eigenvalues_;
    Matrix eigenvectors_;
    Matrix eigenvectors_inv_;
    bool use_expm_ = false;
};

/// Builds M^(m) for the given channels and engineered pump. `lambda_eng` is
/// the literal multiplier of D[L_eng]/2 in the master equation above;
/// a ladder is required iff lambda_eng > 0.
DiagonalGenerator build_diagonal_generator(int m, const LossChannelSet& channels,
                                           const std::optional<ProjectorLadder>& ladder,
                                           double lambda_eng, int dim);

/// Evolves one diagonal for dimensionless time tau >= 0.
DiagonalVector solve_diagonal(const DiagonalGenerator& gen, const DiagonalVector& initial,
                              double tau);

/// Caches the generators for one (channels, ladder, lambda, N) configuration
/// so repeated states/times reuse the spectral work. Thread-safe for
/// concurrent evolve calls after construction.
class AnalyticPropagator {
  public:
    AnalyticPropagator(int dim, const LossChannelSet& channels,
                       std::optional<ProjectorLadder> ladder, double lambda_eng);

    int dim() const { return dim_; }

    /// Raw-matrix fast path; no state validation.
    Matrix evolve_matrix(const Matrix& rho0, double tau) const;

    FockDensityMatrix evolve(const FockDensityMatrix& rho0, double tau,
                             double trace_tol = 1e-6) const;

  private:
    int dim_;
    std::vector<DiagonalGenerator> generators_;  // offsets 0..N-1
};

/// One-shot evolution of rho0 for time tau.
FockDensityMatrix evolve(const FockDensityMatrix& rho0, const LossChannelSet& channels,
                         const std::optional<ProjectorLadder>& ladder, double lambda_eng,
                         double tau, double trace_tol = 1e-6);

/// Evolution over a nondecreasing time grid, amortizing one decomposition.
std::vector<FockDensityMatrix> evolve_series(const FockDensityMatrix& rho0,
                                             const LossChannelSet& channels,
                                             const std::optional<ProjectorLadder>& ladder,
                                             double lambda_eng,
                                             const std::vector<double>& taus,
                                             double trace_tol = 1e-6);

}  // namespace aqec
