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

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

// Domain types for bosonic AQEC simulation. All Fock indices are zero-based
// (|0> is vacuum) and all times are the dimensionless product gamma_a * t.
namespace aqec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

constexpr int kDefaultFockDim = 8;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfRangeError : Error {
    using Error::Error;
};
struct StructuralError : Error {
    using Error::Error;
};
struct InvariantViolation : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct DegenerateCodeError : Error {
    using Error::Error;
};
struct DegenerateLadderError : Error {
    using Error::Error;
};
// Numerical failures carry the dimensionless time at which they occurred.
struct NumericalError : Error {
    NumericalError(const std::string& what, double tau) : Error(what), tau(tau) {}
    double tau;
};

/// Density matrix over the truncated Fock basis. Amplitudes above level
/// dim()-1 are treated as exactly zero (hard cutoff).
class FockDensityMatrix {
  public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kTraceTol = 1e-8;
    static constexpr double kPsdTol = 1e-8;

    /// Validates Hermiticity, trace and positive semidefiniteness.
    /// `trace_tol` is widened by solvers that allow a small trace drift.
    explicit FockDensityMatrix(Matrix entries, double trace_tol = kTraceTol);

    static FockDensityMatrix pure(const Vector& psi);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    Complex operator()(int i, int j) const { return entries_(i, j); }

    double trace_real() const { return entries_.trace().real(); }
    /// Tr(this * other), real part (both Hermitian).
    double overlap(const FockDensityMatrix& other) const;

  private:
    Matrix entries_;
};

/// One diagonal of an N x N matrix. Entry i corresponds to the matrix
/// element (i + max(0,-m), i + max(0,-m) + m), i.e. values holds
/// rho_{alpha, alpha+m} walking down the m-th diagonal.
class DiagonalVector {
  public:
    DiagonalVector(int offset, Vector values, int dim);

    int offset() const { return offset_; }
    int dim() const { return dim_; }
    const Vector& values() const { return values_; }
    Vector& values() { return values_; }
    int size() const { return static_cast<int>(values_.size()); }

  private:
    int offset_;
    int dim_;
    Vector values_;
};

/// A pair of orthonormal logical vectors over Fock states.
class Codeword {
  public:
    static constexpr double kTol = 1e-10;

    Codeword(Vector zero_logical, Vector one_logical);

    int dim() const { return static_cast<int>(zero_.size()); }
    const Vector& zero_logical() const { return zero_; }
    const Vector& one_logical() const { return one_; }

    /// Fock indices with nonzero amplitude in either logical state.
    std::vector<int> support(double tol = 1e-12) const;

  private:
    Vector zero_;
    Vector one_;
};

/// Coefficients of the linear engineered jump operator
/// L_o = sum_n d_n |n><n-1|. coeff(k) multiplies |k+1><k| (k zero-based),
/// i.e. coeff(k) = d_{k+1} in the 1-based d_1..d_{N-1} convention.
class ProjectorLadder {
  public:
    ProjectorLadder(RealVector coeffs, int dim);

    int dim() const { return dim_; }
    const RealVector& coeffs() const { return coeffs_; }
    /// Zero outside [0, dim-2].
    double coeff(int k) const {
        return (k >= 0 && k < coeffs_.size()) ? coeffs_(k) : 0.0;
    }
    /// Lambda = sum d_n^2 (cached at construction).
    double big_lambda() const { return big_lambda_; }

    ProjectorLadder normalized() const;

  private:
    RealVector coeffs_;
    int dim_;
    double big_lambda_;
};

/// Dimensionless rate ratios of the hybrid AQEC system.
struct SystemParams {
    double gamma_b_ratio = 1800.0;  // gamma_b / gamma_a
    double eta2 = 0.0;              // gamma_a2 / gamma_a
    double g_ratio = 600.0;         // g / gamma_a
    double lambda_coop = 0.0;       // 8 g^2 / (gamma_a gamma_b), derived if 0

    /// Derives lambda_coop = 8 g^2/(gamma_a gamma_b) unless overridden,
    /// and validates the ratios.
    static SystemParams make(double gamma_b_ratio, double eta2, double g_ratio,
                             std::optional<double> lambda_override = {});

    /// Coefficient of D[L_eng]/2 in the reduced cavity equation, in units of
    /// gamma_a. Adiabatic elimination of the hybrid model gives
    /// 4 g^2/(gamma_a gamma_b) = lambda_coop / 2; see the cross-solver tests.
    double pump_ratio() const { return lambda_coop / 2.0; }

    void validate() const;
};

}  // namespace aqec
