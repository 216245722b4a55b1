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

#include "aqec/lindblad_ops.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace aqec {

double falling_factorial(int k, int m) {
    if (k < m || k < 0 || m < 0) return 0.0;
    double r = 1.0;
    for (int t = 0; t < m; ++t) r *= static_cast<double>(k - t);
    return r;
}

Matrix annihilation_power(int dim, int n) {
    if (n < 0) throw OutOfRangeError("a^n needs n >= 0");
    Matrix a = Matrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    Matrix out = Matrix::Identity(dim, dim);
    for (int t = 0; t < n; ++t) out = a * out;
    return out;
}

Matrix ladder_matrix(const ProjectorLadder& ladder) {
    const int dim = ladder.dim();
    Matrix L = Matrix::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) L(k + 1, k) = ladder.coeff(k);
    return L;
}

Matrix engineered_jump(const ProjectorLadder& ladder) {
    return ladder_matrix(ladder) / std::sqrt(ladder.big_lambda());
}

Matrix dissipator(const Matrix& X, const Matrix& rho) {
    Matrix Xd = X.adjoint();
    Matrix XdX = Xd * X;
    return 2.0 * X * rho * Xd - XdX * rho - rho * XdX;
}

DiagonalVector extract_diagonal(const FockDensityMatrix& rho, int m) {
    const int dim = rho.dim();
    if (std::abs(m) >= dim) {
        std::ostringstream os;
        os << "diagonal offset " << m << " out of range for dim " << dim;
        throw OutOfRangeError(os.str());
    }
    const int len = dim - std::abs(m);
    const int row0 = std::max(0, -m);
    Vector v(len);
    for (int i = 0; i < len; ++i) v(i) = rho(row0 + i, row0 + i + m);
    return DiagonalVector(m, std::move(v), dim);
}

std::vector<DiagonalVector> extract_all_diagonals(const FockDensityMatrix& rho) {
    std::vector<DiagonalVector> out;
    const int dim = rho.dim();
    out.reserve(2 * dim - 1);
    for (int m = -(dim - 1); m <= dim - 1; ++m) out.push_back(extract_diagonal(rho, m));
    return out;
}

FockDensityMatrix assemble_from_diagonals(const std::vector<DiagonalVector>& diags,
                                          int dim, double trace_tol) {
    std::map<int, const DiagonalVector*> by_offset;
    for (const auto& d : diags) {
        if (d.dim() != dim) throw StructuralError("diagonal dim mismatch");
        if (!by_offset.emplace(d.offset(), &d).second) {
            std::ostringstream os;
            os << "duplicate diagonal offset " << d.offset();
            throw StructuralError(os.str());
        }
    }
    if (static_cast<int>(by_offset.size()) != 2 * dim - 1) {
        throw StructuralError("need exactly one diagonal per offset in [-(N-1), N-1]");
    }
    constexpr double kConjTol = 1e-8;
    Matrix rho = Matrix::Zero(dim, dim);
    for (int m = 0; m <= dim - 1; ++m) {
        const Vector& up = by_offset.at(m)->values();
        const Vector& down = by_offset.at(-m)->values();
        const double mismatch = (up - down.conjugate()).cwiseAbs().maxCoeff();
        if (m > 0 && mismatch > kConjTol) {
            std::ostringstream os;
            os << "conjugate diagonals m=+-" << m << " mismatch by " << mismatch;
            throw StructuralError(os.str());
        }
        for (int i = 0; i < up.size(); ++i) {
            const Complex sym = 0.5 * (up(i) + std::conj(down(i)));
            rho(i, i + m) = (m == 0) ? Complex(up(i).real(), 0.0) : sym;
            if (m > 0) rho(i + m, i) = std::conj(sym);
        }
    }
    return FockDensityMatrix(std::move(rho), trace_tol);
}

Matrix apply_lindblad_an(const FockDensityMatrix& rho, int n) {
    const int dim = rho.dim();
    if (n < 1 || n >= dim) {
        std::ostringstream os;
        os << "loss order n=" << n << " outside [1, " << dim - 1 << "]";
        throw OutOfRangeError(os.str());
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            Complex gain = 0.0;
            if (i + n < dim && j + n < dim) {
                gain = 2.0 * std::sqrt(falling_factorial(i + n, n) * falling_factorial(j + n, n)) *
                       rho(i + n, j + n);
            }
            out(i, j) = gain - (falling_factorial(i, n) + falling_factorial(j, n)) * rho(i, j);
        }
    }
    return out;
}

Matrix apply_lindblad_eng(const FockDensityMatrix& rho, const ProjectorLadder& ladder) {
    const int dim = rho.dim();
    if (ladder.dim() != dim) throw StructuralError("ladder dim mismatch");
    const double lambda_sq = ladder.big_lambda();
    Matrix out = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            Complex gain = 0.0;
            if (i >= 1 && j >= 1) {
                gain = 2.0 * ladder.coeff(i - 1) * ladder.coeff(j - 1) * rho(i - 1, j - 1);
            }
            const double li = ladder.coeff(i);
            const double lj = ladder.coeff(j);
            out(i, j) = (gain - (li * li + lj * lj) * rho(i, j)) / lambda_sq;
        }
    }
    return out;
}

}  // namespace aqec
