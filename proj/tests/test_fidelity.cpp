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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <random>

#include "aqec/codes.hpp"
#include "aqec/fidelity.hpp"
#include "aqec/lindblad_ops.hpp"

using namespace aqec;

TEST_CASE("cardinal states") {
    auto be = named_code("breakeven");
    auto set = cardinal_states(be.code);
    // +z is |0><0|.
    CHECK(set.states[4].entries()(0, 0).real() == doctest::Approx(1.0));
    for (const auto& st : set.states) {
        CHECK(st.trace_real() == doctest::Approx(1.0));
        // purity 1
        CHECK((st.entries() * st.entries()).trace().real() == doctest::Approx(1.0));
    }
    // The six states average to (P0 + P1)/2.
    Matrix avg = Matrix::Zero(8, 8);
    for (const auto& st : set.states) avg += st.entries();
    avg /= 6.0;
    Matrix proj = 0.5 * (be.code.zero_logical() * be.code.zero_logical().adjoint() +
                         be.code.one_logical() * be.code.one_logical().adjoint());
    CHECK((avg - proj).cwiseAbs().maxCoeff() < 1e-14);

    auto grl = named_code("grl");
    auto gset = cardinal_states(grl.code);
    // +x = (|4>+|7>)(<4|+<7|)/2
    CHECK(gset.states[0].entries()(4, 7).real() == doctest::Approx(0.5));
    CHECK(gset.states[0].entries()(4, 4).real() == doctest::Approx(0.5));
}

TEST_CASE("breakeven reference equals the solver and the closed form") {
    auto be = named_code("breakeven");
    for (double tau : {0.0, 0.3, 0.6, 1.7, 4.2}) {
        const double closed = 0.5 + std::exp(-tau) / 6.0 + std::exp(-tau / 2.0) / 3.0;
        CHECK(breakeven_reference(tau) == doctest::Approx(closed).epsilon(1e-15));
        const double solved =
            mean_fidelity(be.code, LossChannelSet::single_photon(), {}, 0.0, tau);
        CHECK(std::abs(solved - closed) < 1e-9);
    }
    CHECK(breakeven_reference(0.6) == doctest::Approx(0.8384).epsilon(1e-4));
    CHECK(breakeven_reference(4.2) == doctest::Approx(0.5433).epsilon(1e-4));
}

TEST_CASE("mean fidelity headline values") {
    auto grl = named_code("grl");
    auto ch = LossChannelSet::with_double_photon(0.012);
    CHECK(mean_fidelity(grl.code, ch, grl.ladder, 800.0, 0.0) == doctest::Approx(1.0));
    // Frozen from the verified superoperator oracle (pump = 4C at the paper's
    // g/gamma_a = 600, gamma_b/gamma_a = 1800).
    CHECK(mean_fidelity(grl.code, ch, grl.ladder, 800.0, 0.6) ==
          doctest::Approx(0.917466).epsilon(2e-6));
    CHECK(mean_fidelity(grl.code, ch, grl.ladder, 800.0, 4.2) ==
          doctest::Approx(0.724578).epsilon(2e-6));
}

TEST_CASE("bloch scan structure") {
    auto grl = named_code("grl");
    auto ch = LossChannelSet::with_double_photon(0.012);
    auto scan = bloch_scan(grl.code, ch, grl.ladder, 800.0, 0.6);
    CHECK(scan.grid.rows() == 11);
    CHECK(scan.grid.cols() == 40);
    CHECK(scan.grid.minCoeff() >= 0.0);
    CHECK(scan.grid.maxCoeff() <= 1.0 + 1e-12);
    // theta = 0 row is phi-independent.
    for (int c = 1; c < scan.grid.cols(); ++c) {
        CHECK(scan.grid(0, c) == doctest::Approx(scan.grid(0, 0)).epsilon(1e-12));
    }

    // Breakeven's scan peaks at the |0> pole (vacuum is decay-free).
    auto be = named_code("breakeven");
    auto bscan = bloch_scan(be.code, LossChannelSet::single_photon(), {}, 0.0, 0.8);
    CHECK(bscan.grid.row(0).maxCoeff() == doctest::Approx(bscan.max()));
    CHECK(bscan.grid(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("six-state identity: the scan average converges to the six-state mean") {
    auto grl = named_code("grl");
    auto ch = LossChannelSet::with_double_photon(0.012);
    const double six = mean_fidelity(grl.code, ch, grl.ladder, 800.0, 0.6);

    // sin(theta)-weighted sphere average of F(theta, phi) at two grid
    // refinements; the quadrature approaches the exact six-state value.
    AnalyticPropagator prop(8, ch, grl.ladder, 800.0);
    auto sphere_average = [&](int n_theta, int n_phi) {
        double acc = 0.0, norm = 0.0;
        const Complex I(0.0, 1.0);
        for (int it = 0; it <= n_theta; ++it) {
            const double theta = M_PI * it / n_theta;
            const double w = std::sin(theta) + 1e-300;
            for (int ip = 0; ip < n_phi; ++ip) {
                const double phi = 2.0 * M_PI * ip / n_phi;
                Vector psi = std::cos(theta / 2.0) * grl.code.zero_logical() +
                             std::exp(I * phi) * std::sin(theta / 2.0) * grl.code.one_logical();
                Matrix rho0 = psi * psi.adjoint();
                acc += w * rho0.conjugate().cwiseProduct(prop.evolve_matrix(rho0, 0.6)).sum().real();
                norm += w;
            }
        }
        return acc / norm;
    };
    const double coarse = sphere_average(10, 20);
    const double fine = sphere_average(20, 40);
    CHECK(std::abs(coarse - six) < 0.01);
    CHECK(std::abs(fine - six) < std::abs(coarse - six) + 1e-12);
    CHECK(std::abs(fine - six) < 2e-3);
}

TEST_CASE("analytic and dense mean fidelity agree in the adiabatic regime") {
    auto grl = named_code("grl");
    auto ch = LossChannelSet::with_double_photon(0.012);
    const double a = mean_fidelity(grl.code, ch, grl.ladder, 800.0, 0.6, SolverChoice::Analytic);
    const double d = mean_fidelity(grl.code, ch, grl.ladder, 800.0, 0.6, SolverChoice::Dense);
    CHECK(std::abs(a - d) <= 5e-3);
}

TEST_CASE("gain") {
    CHECK(*gain(0.75, 0.75) == doctest::Approx(1.0));
    CHECK(*gain(0.75, 0.5) == doctest::Approx(2.0));
    CHECK(!gain(1.0, 0.5).has_value());
}

TEST_CASE("wigner parity values and normalization") {
    WignerGrid grid;
    grid.x_min = grid.p_min = -5.0;
    grid.x_max = grid.p_max = 5.0;
    grid.nx = grid.np = 101;

    Vector vac = Vector::Zero(8);
    vac(0) = 1.0;
    auto rho_vac = FockDensityMatrix::pure(vac);
    auto w = wigner(rho_vac, grid);
    // W(0,0) = 1/pi (origin is a grid point for odd nx).
    CHECK(w(50, 50) == doctest::Approx(1.0 / M_PI).epsilon(1e-10));
    CHECK(wigner_integral(w, grid) == doctest::Approx(1.0).epsilon(1e-3));

    Vector one = Vector::Zero(8);
    one(1) = 1.0;
    auto rho1 = FockDensityMatrix::pure(one);
    auto w1 = wigner(rho1, grid);
    CHECK(w1(50, 50) == doctest::Approx(-1.0 / M_PI).epsilon(1e-10));
    CHECK(wigner_integral(w1, grid) == doctest::Approx(1.0).epsilon(1e-3));

    auto grl = named_code("grl");
    auto plus_z = cardinal_states(grl.code).states[4];
    auto wg = wigner(plus_z, grid);
    CHECK(wigner_integral(wg, grid) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(wg(50, 50) == doctest::Approx(1.0 / M_PI).epsilon(1e-9));  // |4> is even
}

TEST_CASE("wigner matches the displaced-parity oracle") {
    // Independent oracle: W(x,p) = (1/pi) Tr[rho D(beta) P D(beta)^dag]
    // evaluated with matrix exponentials in a 4x larger truncation.
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int dim = 6, big = 24;
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(nd(rng), nd(rng));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();

    Matrix a_big = Matrix::Zero(big, big);
    for (int k = 1; k < big; ++k) a_big(k - 1, k) = std::sqrt(static_cast<double>(k));
    Matrix parity = Matrix::Zero(big, big);
    for (int k = 0; k < big; ++k) parity(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    Matrix rho_big = Matrix::Zero(big, big);
    rho_big.topLeftCorner(dim, dim) = rho;

    WignerGrid grid;
    grid.nx = grid.np = 3;
    grid.x_min = -1.3;
    grid.x_max = 1.1;
    grid.p_min = -0.7;
    grid.p_max = 0.9;
    auto w = wigner(FockDensityMatrix(rho, 1e-6), grid);
    for (int ix = 0; ix < grid.nx; ++ix) {
        const double x = grid.x_min + ix * (grid.x_max - grid.x_min) / (grid.nx - 1);
        for (int ip = 0; ip < grid.np; ++ip) {
            const double p = grid.p_min + ip * (grid.p_max - grid.p_min) / (grid.np - 1);
            const Complex beta(x / std::sqrt(2.0), p / std::sqrt(2.0));
            Matrix gen = beta * a_big.adjoint() - std::conj(beta) * a_big;
            Matrix D = gen.exp();
            const Complex val = (rho_big * D * parity * D.adjoint()).trace() / M_PI;
            CHECK(w(ix, ip) == doctest::Approx(val.real()).epsilon(1e-6));
        }
    }
}
