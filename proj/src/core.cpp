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

#include "aqec/core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace aqec {

FockDensityMatrix::FockDensityMatrix(Matrix entries, double trace_tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw StructuralError("density matrix must be square and nonempty");
    }
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTol) {
        std::ostringstream os;
        os << "density matrix not Hermitian: max |rho_ij - conj(rho_ji)| = " << herm;
        throw InvariantViolation(os.str());
    }
    const double tr = entries_.trace().real();
    if (std::abs(tr - 1.0) > trace_tol) {
        std::ostringstream os;
        os << "density matrix trace " << tr << " outside 1 +- " << trace_tol;
        throw InvariantViolation(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -kPsdTol) {
        std::ostringstream os;
        os << "density matrix not PSD: min eigenvalue = " << min_ev;
        throw InvariantViolation(os.str());
    }
}

FockDensityMatrix FockDensityMatrix::pure(const Vector& psi) {
    const double n = psi.norm();
    if (n < 1e-300) throw StructuralError("cannot form pure state from zero vector");
    Vector v = psi / n;
    return FockDensityMatrix(v * v.adjoint());
}

double FockDensityMatrix::overlap(const FockDensityMatrix& other) const {
    if (other.dim() != dim()) throw StructuralError("overlap: dimension mismatch");
    // Tr(A^dag B) = sum conj(A_ij) B_ij; both Hermitian, so this is Tr(AB).
    return (entries_.conjugate().cwiseProduct(other.entries_)).sum().real();
}

DiagonalVector::DiagonalVector(int offset, Vector values, int dim)
    : offset_(offset), dim_(dim), values_(std::move(values)) {
    if (std::abs(offset_) >= dim_) {
        throw OutOfRangeError("diagonal offset |m| must be < dim");
    }
    if (static_cast<int>(values_.size()) != dim_ - std::abs(offset_)) {
        std::ostringstream os;
        os << "diagonal m=" << offset_ << " must have length " << dim_ - std::abs(offset_)
           << ", got " << values_.size();
        throw StructuralError(os.str());
    }
}

Codeword::Codeword(Vector zero_logical, Vector one_logical)
    : zero_(std::move(zero_logical)), one_(std::move(one_logical)) {
    if (zero_.size() != one_.size() || zero_.size() < 2) {
        throw StructuralError("codeword vectors must share a dimension >= 2");
    }
    if (std::abs(zero_.norm() - 1.0) > kTol || std::abs(one_.norm() - 1.0) > kTol) {
        throw InvariantViolation("logical states must be normalized");
    }
    if (std::abs(zero_.dot(one_)) > kTol) {
        throw InvariantViolation("logical states must be orthogonal");
    }
}

std::vector<int> Codeword::support(double tol) const {
    std::vector<int> out;
    for (int n = 0; n < dim(); ++n) {
        if (std::abs(zero_(n)) > tol || std::abs(one_(n)) > tol) out.push_back(n);
    }
    return out;
}

ProjectorLadder::ProjectorLadder(RealVector coeffs, int dim)
    : coeffs_(std::move(coeffs)), dim_(dim) {
    if (dim_ < 2) throw StructuralError("ladder needs dim >= 2");
    if (static_cast<int>(coeffs_.size()) != dim_ - 1) {
        std::ostringstream os;
        os << "ladder over dim " << dim_ << " needs " << dim_ - 1 << " coefficients, got "
           << coeffs_.size();
        throw StructuralError(os.str());
    }
    big_lambda_ = coeffs_.squaredNorm();
    if (big_lambda_ <= 1e-18) {
        throw DegenerateLadderError("ladder coefficients are numerically zero");
    }
}

ProjectorLadder ProjectorLadder::normalized() const {
    return ProjectorLadder(coeffs_ / std::sqrt(big_lambda_), dim_);
}

SystemParams SystemParams::make(double gamma_b_ratio, double eta2, double g_ratio,
                                std::optional<double> lambda_override) {
    SystemParams p;
    p.gamma_b_ratio = gamma_b_ratio;
    p.eta2 = eta2;
    p.g_ratio = g_ratio;
    p.lambda_coop = lambda_override
                        ? *lambda_override
                        : 8.0 * g_ratio * g_ratio / gamma_b_ratio;
    p.validate();
    return p;
}

void SystemParams::validate() const {
    if (gamma_b_ratio < 0 || eta2 < 0 || g_ratio < 0 || lambda_coop < 0) {
        throw ConfigError("system rate ratios must be nonnegative");
    }
}

}  // namespace aqec
