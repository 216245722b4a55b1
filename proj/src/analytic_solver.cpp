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

#include "aqec/analytic_solver.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <sstream>

#include "aqec/lindblad_ops.hpp"

namespace aqec {

LossChannelSet LossChannelSet::single_photon() {
    LossChannelSet s;
    s.orders[1] = 1.0;
    return s;
}

LossChannelSet LossChannelSet::with_double_photon(double eta2) {
    LossChannelSet s = single_photon();
    if (eta2 != 0.0) s.orders[2] = eta2;
    s.validate();
    return s;
}

int LossChannelSet::max_order() const {
    int m = 0;
    for (const auto& [n, eta] : orders) {
        if (eta > 0.0 && n > m) m = n;
    }
    return m;
}

void LossChannelSet::validate() const {
    for (const auto& [n, eta] : orders) {
        if (n < 1) throw ConfigError("loss order must be >= 1");
        if (eta < 0.0) throw ConfigError("loss ratio eta_n must be >= 0");
    }
    auto it = orders.find(1);
    if (it != orders.end() && it->second != 1.0) {
        throw ConfigError("eta_1 = 1 by definition when single-photon loss is active");
    }
}

DiagonalGenerator::DiagonalGenerator(int offset, RealMatrix matrix)
    : offset_(offset), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
        throw StructuralError("diagonal generator must be square");
    }
    Eigen::EigenSolver<RealMatrix> es(matrix_);
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    // Condition estimate via the extreme singular values of V.
    Eigen::JacobiSVD<Matrix> svd(eigenvectors_);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e8) {
        use_expm_ = true;
    } else {
        eigenvectors_inv_ = eigenvectors_.inverse();
    }
}

Vector DiagonalGenerator::propagate(const Vector& v0, double tau) const {
    if (tau < 0.0) throw ConfigError("tau must be >= 0");
    if (v0.size() != matrix_.rows()) throw StructuralError("diagonal length mismatch");
    if (use_expm_) {
        Matrix Mt = matrix_.cast<Complex>() * tau;
        return Mt.exp() * v0;
    }
    Vector coeffs = eigenvectors_inv_ * v0;
    for (int l = 0; l < coeffs.size(); ++l) {
        coeffs(l) *= std::exp(eigenvalues_(l) * tau);
    }
    return eigenvectors_ * coeffs;
}

double DiagonalGenerator::max_real_eigenvalue() const {
    return eigenvalues_.real().maxCoeff();
}

DiagonalGenerator build_diagonal_generator(int m, const LossChannelSet& channels,
                                           const std::optional<ProjectorLadder>& ladder,
                                           double lambda_eng, int dim) {
    if (std::abs(m) >= dim) throw OutOfRangeError("diagonal offset |m| must be < dim");
    if (lambda_eng < 0.0) throw ConfigError("lambda must be >= 0");
    if (lambda_eng > 0.0 && !ladder) {
        throw ConfigError("engineered pump requires a ladder");
    }
    channels.validate();
    const int mm = std::abs(m);
    const int sz = dim - mm;
    RealMatrix M = RealMatrix::Zero(sz, sz);
    for (int alpha = 0; alpha < sz; ++alpha) {
        for (const auto& [n, eta] : channels.orders) {
            if (eta == 0.0) continue;
            M(alpha, alpha) -=
                0.5 * eta * (falling_factorial(alpha, n) + falling_factorial(alpha + mm, n));
            if (alpha + n < sz) {
                M(alpha, alpha + n) += eta * std::sqrt(falling_factorial(alpha + n, n) *
                                                       falling_factorial(alpha + mm + n, n));
            }
        }
        if (lambda_eng > 0.0) {
            const double lam_sq = ladder->big_lambda();
            const double la = ladder->coeff(alpha);
            const double lam2 = ladder->coeff(alpha + mm);
            M(alpha, alpha) -= lambda_eng * (la * la + lam2 * lam2) / (2.0 * lam_sq);
            if (alpha >= 1) {
                // Gain flows up the Fock index: row alpha fed from alpha-1.
                M(alpha, alpha - 1) +=
                    lambda_eng * ladder->coeff(alpha - 1) * ladder->coeff(alpha + mm - 1) / lam_sq;
            }
        }
    }
    return DiagonalGenerator(m, std::move(M));
}

DiagonalVector solve_diagonal(const DiagonalGenerator& gen, const DiagonalVector& initial,
                              double tau) {
    if (gen.offset() != initial.offset()) {
        std::ostringstream os;
        os << "generator offset " << gen.offset() << " != diagonal offset " << initial.offset();
        throw StructuralError(os.str());
    }
    return DiagonalVector(initial.offset(), gen.propagate(initial.values(), tau), initial.dim());
}

AnalyticPropagator::AnalyticPropagator(int dim, const LossChannelSet& channels,
                                       std::optional<ProjectorLadder> ladder, double lambda_eng)
    : dim_(dim) {
    generators_.reserve(dim);
    for (int m = 0; m < dim; ++m) {
        generators_.push_back(build_diagonal_generator(m, channels, ladder, lambda_eng, dim));
    }
}

Matrix AnalyticPropagator::evolve_matrix(const Matrix& rho0, double tau) const {
    if (rho0.rows() != dim_ || rho0.cols() != dim_) {
        throw StructuralError("state dimension mismatch");
    }
    Matrix out = Matrix::Zero(dim_, dim_);
    Vector v0(dim_), vt(dim_);
    for (int m = 0; m < dim_; ++m) {
        const int len = dim_ - m;
        for (int i = 0; i < len; ++i) v0(i) = rho0(i, i + m);
        vt.head(len) = generators_[m].propagate(v0.head(len), tau);
        for (int i = 0; i < len; ++i) {
            out(i, i + m) = vt(i);
            if (m > 0) out(i + m, i) = std::conj(vt(i));
        }
    }
    // m = 0 is real up to roundoff; pin it so the result is exactly Hermitian.
    for (int i = 0; i < dim_; ++i) out(i, i) = Complex(out(i, i).real(), 0.0);
    return out;
}

FockDensityMatrix AnalyticPropagator::evolve(const FockDensityMatrix& rho0, double tau,
                                             double trace_tol) const {
    return FockDensityMatrix(evolve_matrix(rho0.entries(), tau), trace_tol);
}

FockDensityMatrix evolve(const FockDensityMatrix& rho0, const LossChannelSet& channels,
                         const std::optional<ProjectorLadder>& ladder, double lambda_eng,
                         double tau, double trace_tol) {
    AnalyticPropagator prop(rho0.dim(), channels, ladder, lambda_eng);
    return prop.evolve(rho0, tau, trace_tol);
}

std::vector<FockDensityMatrix> evolve_series(const FockDensityMatrix& rho0,
                                             const LossChannelSet& channels,
                                             const std::optional<ProjectorLadder>& ladder,
                                             double lambda_eng, const std::vector<double>& taus,
                                             double trace_tol) {
    for (size_t i = 1; i < taus.size(); ++i) {
        if (taus[i] < taus[i - 1]) throw ConfigError("tau grid must be nondecreasing");
    }
    AnalyticPropagator prop(rho0.dim(), channels, ladder, lambda_eng);
    std::vector<FockDensityMatrix> out;
    out.reserve(taus.size());
    for (double tau : taus) out.push_back(prop.evolve(rho0, tau, trace_tol));
    return out;
}

}  // namespace aqec
