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

#include "aqec/fidelity.hpp"

#include <cmath>

#include "aqec/dense_solver.hpp"
#include "aqec/lindblad_ops.hpp"

namespace aqec {

const std::array<CardinalLabel, 6> CardinalSet::kLabels = {
    CardinalLabel::PlusX, CardinalLabel::MinusX, CardinalLabel::PlusY,
    CardinalLabel::MinusY, CardinalLabel::PlusZ, CardinalLabel::MinusZ};

std::array<Matrix, 6> cardinal_matrices(const Codeword& code) {
    const Vector& z0 = code.zero_logical();
    const Vector& z1 = code.one_logical();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex I(0.0, 1.0);
    std::array<Vector, 6> kets = {
        (z0 + z1) * inv_sqrt2,     (z0 - z1) * inv_sqrt2, (z0 + I * z1) * inv_sqrt2,
        (z0 - I * z1) * inv_sqrt2, z0,                    z1};
    std::array<Matrix, 6> out;
    for (size_t i = 0; i < kets.size(); ++i) out[i] = kets[i] * kets[i].adjoint();
    return out;
}

CardinalSet cardinal_states(const Codeword& code) {
    auto mats = cardinal_matrices(code);
    return CardinalSet{{FockDensityMatrix(mats[0]), FockDensityMatrix(mats[1]),
                        FockDensityMatrix(mats[2]), FockDensityMatrix(mats[3]),
                        FockDensityMatrix(mats[4]), FockDensityMatrix(mats[5])}};
}

namespace {

double overlap(const Matrix& a, const Matrix& b) {
    // Tr(A^dag B) elementwise; equals Tr(AB) for Hermitian inputs.
    return a.conjugate().cwiseProduct(b).sum().real();
}

}  // namespace

double mean_fidelity(const Codeword& code, const LossChannelSet& channels,
                     const std::optional<ProjectorLadder>& ladder, double lambda_eng,
                     double tau, SolverChoice solver, double dense_gamma_b_ratio) {
    if (solver == SolverChoice::Analytic) {
        AnalyticPropagator prop(code.dim(), channels, ladder, lambda_eng);
        const auto cards = cardinal_matrices(code);
        double acc = 0.0;
        for (const auto& rho0 : cards) acc += overlap(rho0, prop.evolve_matrix(rho0, tau));
        return acc / 6.0;
    }
    // Dense route: realize lambda_eng with the hybrid model,
    // 4 g^2 / (gamma_a gamma_b) = lambda_eng.
    double eta2 = 0.0;
    if (auto it = channels.orders.find(2); it != channels.orders.end()) eta2 = it->second;
    const double g = 0.5 * std::sqrt(lambda_eng * dense_gamma_b_ratio);
    SystemParams params = SystemParams::make(dense_gamma_b_ratio, eta2, g);
    if (!ladder) {
        if (lambda_eng > 0.0) throw ConfigError("engineered pump requires a ladder");
        LindbladModel m;
        const int n = code.dim();
        m.collapse.push_back({1.0, annihilation_power(n, 1)});
        if (eta2 > 0.0) m.collapse.push_back({eta2, annihilation_power(n, 2)});
        const auto cards = cardinal_matrices(code);
        double acc = 0.0;
        for (const auto& rho0 : cards) {
            auto traj = integrate(rho0, m, {tau});
            acc += overlap(rho0, traj.back());
        }
        return acc / 6.0;
    }
    auto fbar = simulate_aqec_hybrid(code, *ladder, params, {tau});
    return fbar.back();
}

std::vector<double> mean_fidelity_series(const Codeword& code, const LossChannelSet& channels,
                                         const std::optional<ProjectorLadder>& ladder,
                                         double lambda_eng, const std::vector<double>& taus) {
    AnalyticPropagator prop(code.dim(), channels, ladder, lambda_eng);
    const auto cards = cardinal_matrices(code);
    std::vector<double> out(taus.size(), 0.0);
    for (const auto& rho0 : cards) {
        for (size_t i = 0; i < taus.size(); ++i) {
            out[i] += overlap(rho0, prop.evolve_matrix(rho0, taus[i]));
        }
    }
    for (auto& f : out) f /= 6.0;
    return out;
}

BlochScan bloch_scan(const Codeword& code, const LossChannelSet& channels,
                     const std::optional<ProjectorLadder>& ladder, double lambda_eng,
                     double tau) {
    const double theta_step = M_PI / 10.0;
    const double phi_step = M_PI / 20.0;
    const int n_theta = 11;  // poles included once via phi-constant rows
    const int n_phi = 40;
    AnalyticPropagator prop(code.dim(), channels, ladder, lambda_eng);
    BlochScan scan{theta_step, phi_step, RealMatrix(n_theta, n_phi)};
    const Complex I(0.0, 1.0);
    for (int it = 0; it < n_theta; ++it) {
        const double theta = it * theta_step;
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = ip * phi_step;
            Vector psi = std::cos(theta / 2.0) * code.zero_logical() +
                         std::exp(I * phi) * std::sin(theta / 2.0) * code.one_logical();
            Matrix rho0 = psi * psi.adjoint();
            scan.grid(it, ip) = overlap(rho0, prop.evolve_matrix(rho0, tau));
        }
    }
    return scan;
}

double breakeven_reference(double tau) {
    if (tau < 0.0) throw ConfigError("tau must be >= 0");
    return 0.5 + std::exp(-tau) / 6.0 + std::exp(-tau / 2.0) / 3.0;
}

std::optional<double> gain(double f_code, double f_be) {
    if (f_code >= 1.0) return std::nullopt;
    return (1.0 - f_be) / (1.0 - f_code);
}

namespace {

// Wigner kernel of |m><n| (n >= m) at beta = (x + i p)/sqrt(2):
//   (1/pi) (-1)^m sqrt(m!/n!) (2 conj(beta))^{n-m} e^{-2|beta|^2}
//       L_m^{n-m}(4 |beta|^2).
// Generalized Laguerre by upward recurrence in m.
double laguerre(int m, int k, double z) {
    if (m == 0) return 1.0;
    double lm2 = 1.0;
    double lm1 = 1.0 + k - z;
    for (int j = 2; j <= m; ++j) {
        const double lm = ((2.0 * j - 1.0 + k - z) * lm1 - (j - 1.0 + k) * lm2) / j;
        lm2 = lm1;
        lm1 = lm;
    }
    return lm1;
}

}  // namespace

RealMatrix wigner(const FockDensityMatrix& rho, const WignerGrid& grid) {
    if (grid.nx < 2 || grid.np < 2) throw ConfigError("wigner grid needs >= 2 points per axis");
    const int dim = rho.dim();
    // sqrt(m!/n!) factors.
    RealMatrix ratio = RealMatrix::Ones(dim, dim);
    for (int m = 0; m < dim; ++m) {
        for (int n = m + 1; n < dim; ++n) {
            double r = 1.0;
            for (int t = m + 1; t <= n; ++t) r /= static_cast<double>(t);
            ratio(m, n) = std::sqrt(r);
        }
    }
    RealMatrix w(grid.nx, grid.np);
    const double dx = (grid.x_max - grid.x_min) / (grid.nx - 1);
    const double dp = (grid.p_max - grid.p_min) / (grid.np - 1);
    for (int ix = 0; ix < grid.nx; ++ix) {
        const double x = grid.x_min + ix * dx;
        for (int ip = 0; ip < grid.np; ++ip) {
            const double p = grid.p_min + ip * dp;
            const Complex beta(x / std::sqrt(2.0), p / std::sqrt(2.0));
            const double b2 = std::norm(beta);
            const double envelope = std::exp(-2.0 * b2) / M_PI;
            // W = (1/pi) Tr[rho D(2 beta) P]: the |m><n| (m < n) kernel
            // carries (2 beta)^{n-m}.
            const Complex two_beta = 2.0 * beta;
            double acc = 0.0;
            for (int m = 0; m < dim; ++m) {
                const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                acc += sign * rho(m, m).real() * laguerre(m, 0, 4.0 * b2);
                Complex pow_term = two_beta;
                for (int n = m + 1; n < dim; ++n) {
                    const Complex kern =
                        sign * ratio(m, n) * pow_term * laguerre(m, n - m, 4.0 * b2);
                    acc += 2.0 * (rho(m, n) * kern).real();
                    pow_term *= two_beta;
                }
            }
            w(ix, ip) = envelope * acc;
        }
    }
    return w;
}

double wigner_integral(const RealMatrix& w, const WignerGrid& grid) {
    const double dx = (grid.x_max - grid.x_min) / (grid.nx - 1);
    const double dp = (grid.p_max - grid.p_min) / (grid.np - 1);
    return w.sum() * dx * dp;
}

}  // namespace aqec
