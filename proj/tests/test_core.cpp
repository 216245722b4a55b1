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

#include <random>

#include "aqec/core.hpp"
#include "aqec/lindblad_ops.hpp"

using namespace aqec;

namespace {

Matrix random_hermitian_unit_trace(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(nd(rng), nd(rng));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

Matrix basis_matrix(int dim, int i, int j) {
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("FockDensityMatrix validates its invariants") {
    Matrix ok = Matrix::Zero(2, 2);
    ok(0, 0) = 0.5;
    ok(1, 1) = 0.5;
    CHECK_NOTHROW(FockDensityMatrix{ok});

    Matrix non_herm = ok;
    non_herm(0, 1) = 0.3;
    CHECK_THROWS_AS(FockDensityMatrix{non_herm}, InvariantViolation);

    Matrix bad_trace = ok * 1.5;
    CHECK_THROWS_AS(FockDensityMatrix{bad_trace}, InvariantViolation);

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(FockDensityMatrix{neg}, InvariantViolation);

    // Solver drift tolerance widens the trace check.
    Matrix drift = ok * (1.0 + 5e-7);
    CHECK_THROWS_AS(FockDensityMatrix{drift}, InvariantViolation);
    CHECK_NOTHROW(FockDensityMatrix{drift, 1e-6});
}

TEST_CASE("extract_diagonal matches the definition") {
    FockDensityMatrix half(Matrix::Identity(2, 2) * 0.5);
    auto d0 = extract_diagonal(half, 0);
    CHECK(d0.values()(0).real() == doctest::Approx(0.5));
    CHECK(d0.values()(1).real() == doctest::Approx(0.5));
    auto d1 = extract_diagonal(half, 1);
    CHECK(d1.size() == 1);
    CHECK(std::abs(d1.values()(0)) == doctest::Approx(0.0));

    // |+><+| on {|0>,|1>}: the m=-1 diagonal holds rho_10 = 0.5.
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    auto rho_plus = FockDensityMatrix::pure(plus);
    auto dm1 = extract_diagonal(rho_plus, -1);
    CHECK(dm1.values()(0).real() == doctest::Approx(0.5));

    CHECK_THROWS_AS(extract_diagonal(half, 2), OutOfRangeError);
    CHECK_THROWS_AS(extract_diagonal(half, -2), OutOfRangeError);
}

TEST_CASE("assemble_from_diagonals inverts extraction") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 7);
        FockDensityMatrix rho(random_hermitian_unit_trace(dim, rng));
        auto rebuilt = assemble_from_diagonals(extract_all_diagonals(rho), dim);
        CHECK((rebuilt.entries() - rho.entries()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("assemble_from_diagonals structural errors") {
    Matrix one = Matrix::Zero(2, 2);
    one(0, 0) = 1.0;
    FockDensityMatrix rho(one);
    auto diags = extract_all_diagonals(rho);

    // single nonzero m=0 diagonal [1,0] -> |0><0|
    auto rebuilt = assemble_from_diagonals(diags, 2);
    CHECK(rebuilt.entries()(0, 0).real() == doctest::Approx(1.0));

    // missing offset
    std::vector<DiagonalVector> missing(diags.begin(), diags.end() - 1);
    CHECK_THROWS_AS(assemble_from_diagonals(missing, 2), StructuralError);

    // duplicate offset
    auto dup = diags;
    dup.push_back(diags.front());
    CHECK_THROWS_AS(assemble_from_diagonals(dup, 2), StructuralError);

    // conjugate-mismatched +-1 diagonals differing by 1e-3
    Vector vp(1), vm(1);
    vp << Complex(0.1, 0.0);
    vm << Complex(0.1 + 1e-3, 0.0);
    Vector diag0(2);
    diag0 << 0.5, 0.5;
    std::vector<DiagonalVector> bad;
    bad.emplace_back(0, diag0, 2);
    bad.emplace_back(1, vp, 2);
    bad.emplace_back(-1, vm, 2);
    CHECK_THROWS_AS(assemble_from_diagonals(bad, 2), StructuralError);
}

TEST_CASE("apply_lindblad_an examples") {
    // |1><1| under D[a]: 2|0><0| - 2|1><1|.
    Vector one_ket = Vector::Zero(2);
    one_ket(1) = 1.0;
    auto rho1 = FockDensityMatrix::pure(one_ket);
    Matrix d = apply_lindblad_an(rho1, 1);
    CHECK(d(0, 0).real() == doctest::Approx(2.0));
    CHECK(d(1, 1).real() == doctest::Approx(-2.0));
    CHECK(std::abs(d(0, 1)) == doctest::Approx(0.0));

    // vacuum is dark for every order
    Vector vac = Vector::Zero(4);
    vac(0) = 1.0;
    auto rho0 = FockDensityMatrix::pure(vac);
    for (int n = 1; n <= 3; ++n) {
        CHECK(apply_lindblad_an(rho0, n).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }

    CHECK_THROWS_AS(apply_lindblad_an(rho1, 0), OutOfRangeError);
    CHECK_THROWS_AS(apply_lindblad_an(rho1, 2), OutOfRangeError);
}

TEST_CASE("apply_lindblad_an off-diagonal coefficients vs the matrix-product oracle") {
    // rho = symmetrized |4><7| embedded in a valid density matrix; D[a^2]
    // moves the (4,7) coherence to (2,5) with weight 2 sqrt(A2_4 A2_7)
    // and damps it by (A2_4 + A2_7) = 54.
    const int dim = 8;
    Matrix rho_m = Matrix::Identity(dim, dim) / dim;
    rho_m(4, 7) = Complex(0.05, 0.02);
    rho_m(7, 4) = std::conj(rho_m(4, 7));
    FockDensityMatrix rho(rho_m);
    Matrix d2 = apply_lindblad_an(rho, 2);
    const double w_gain = 2.0 * std::sqrt(falling_factorial(4, 2) * falling_factorial(7, 2));
    CHECK(w_gain == doctest::Approx(2.0 * std::sqrt(12.0 * 42.0)));
    CHECK(d2(2, 5).real() == doctest::Approx((w_gain * rho_m(4, 7)).real()));
    CHECK(d2(2, 5).imag() == doctest::Approx((w_gain * rho_m(4, 7)).imag()));
    // The (4,7) element receives -(A2_4 + A2_7) rho_47 plus feed-down from
    // (6,9), which is beyond truncation here, so the loss term is exact.
    CHECK(d2(4, 7).real() == doctest::Approx((-54.0 * rho_m(4, 7)).real()));

    Matrix oracle = dissipator(annihilation_power(dim, 2), rho_m);
    CHECK((d2 - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_lindblad_eng examples vs the matrix-product oracle") {
    // d_1 = 1 (N = 2): D on |0><0| gives 2|1><1| - 2|0><0|.
    RealVector d1(1);
    d1 << 1.0;
    ProjectorLadder ladder(d1, 2);
    Vector vac = Vector::Zero(2);
    vac(0) = 1.0;
    auto rho0 = FockDensityMatrix::pure(vac);
    Matrix out = apply_lindblad_eng(rho0, ladder);
    CHECK(out(1, 1).real() == doctest::Approx(2.0));
    CHECK(out(0, 0).real() == doctest::Approx(-2.0));
    Matrix oracle = dissipator(engineered_jump(ladder), rho0.entries());
    CHECK((out - oracle).cwiseAbs().maxCoeff() < 1e-14);

    // |1><1| is dark for the single-slot ladder.
    Vector one_ket = Vector::Zero(2);
    one_ket(1) = 1.0;
    auto rho1 = FockDensityMatrix::pure(one_ket);
    CHECK(apply_lindblad_eng(rho1, ladder).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    // GRL ladder on |3><3|: gain at (4,4) and loss at (3,3) with ratio 1:1.
    RealVector grl = RealVector::Zero(7);
    grl(2) = grl(3) = grl(5) = grl(6) = 0.5;
    ProjectorLadder gl(grl, 8);
    Vector three = Vector::Zero(8);
    three(3) = 1.0;
    auto rho3 = FockDensityMatrix::pure(three);
    Matrix g = apply_lindblad_eng(rho3, gl);
    CHECK(g(4, 4).real() == doctest::Approx(-g(3, 3).real()));
    CHECK(g(4, 4).real() > 0.0);
    Matrix goracle = dissipator(engineered_jump(gl), rho3.entries());
    CHECK((g - goracle).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("generators preserve Hermiticity and trace on safe support") {
    std::mt19937_64 rng(11);
    const int dim = 8;
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        // Support restricted to the bottom dim - n levels so truncation
        // clipping cannot leak trace.
        Matrix rho_small = random_hermitian_unit_trace(dim - n, rng);
        Matrix rho_m = Matrix::Zero(dim, dim);
        rho_m.topLeftCorner(dim - n, dim - n) = rho_small;
        FockDensityMatrix rho(rho_m);
        Matrix out = apply_lindblad_an(rho, n);
        CHECK(std::abs(out.trace()) < 1e-10);
        CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

        std::uniform_real_distribution<double> u(-1.0, 1.0);
        RealVector d(dim - 1);
        for (int k = 0; k < d.size(); ++k) d(k) = u(rng);
        d(dim - 2) = 0.0;  // no pumping out of the top level
        if (d.norm() < 1e-6) continue;
        ProjectorLadder ladder(d, dim);
        Matrix eng = apply_lindblad_eng(rho, ladder);
        CHECK(std::abs(eng.trace()) < 1e-10);
        CHECK((eng - eng.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("element-wise formulas equal the explicit superoperator") {
    std::mt19937_64 rng(2026);
    const int dim = 8;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        FockDensityMatrix rho(random_hermitian_unit_trace(dim, rng));
        for (int n = 1; n <= 3; ++n) {
            Matrix lhs = apply_lindblad_an(rho, n);
            Matrix rhs = dissipator(annihilation_power(dim, n), rho.entries());
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        RealVector d(dim - 1);
        for (int k = 0; k < d.size(); ++k) d(k) = u(rng);
        if (d.norm() < 1e-6) continue;
        ProjectorLadder ladder(d, dim);
        Matrix lhs = apply_lindblad_eng(rho, ladder);
        Matrix rhs = dissipator(engineered_jump(ladder), rho.entries());
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("Codeword and ProjectorLadder invariants") {
    Vector z0 = Vector::Zero(8), z1 = Vector::Zero(8);
    z0(4) = 1.0;
    z1(7) = 1.0;
    CHECK_NOTHROW(Codeword(z0, z1));
    CHECK_THROWS_AS(Codeword(z0, z0), InvariantViolation);
    Vector unnorm = z0 * 1.1;
    CHECK_THROWS_AS(Codeword(unnorm, z1), InvariantViolation);

    RealVector zero_d = RealVector::Zero(7);
    CHECK_THROWS_AS(ProjectorLadder(zero_d, 8), DegenerateLadderError);
    RealVector d(7);
    d << 1, 2, 0, 0, 0, 0, 0;
    ProjectorLadder lad(d, 8);
    CHECK(lad.big_lambda() == doctest::Approx(5.0));
    CHECK(lad.coeff(-1) == 0.0);
    CHECK(lad.coeff(7) == 0.0);
    CHECK(lad.normalized().big_lambda() == doctest::Approx(1.0));
}

TEST_CASE("SystemParams derives lambda_coop = 8C") {
    auto p = SystemParams::make(1800.0, 0.012, 600.0);
    CHECK(p.lambda_coop == doctest::Approx(1600.0).epsilon(1e-9));
    CHECK(p.pump_ratio() == doctest::Approx(800.0).epsilon(1e-9));
    auto q = SystemParams::make(1800.0, 0.0, 600.0, 1e4);
    CHECK(q.lambda_coop == doctest::Approx(1e4));
    CHECK_THROWS_AS(SystemParams::make(-1.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("basis_matrix helper sanity") {
    // keeps the helper exercised; used implicitly by other suites
    CHECK(basis_matrix(3, 1, 2)(1, 2) == Complex(1.0, 0.0));
}
