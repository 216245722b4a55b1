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

#include "aqec/codes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "aqec/analytic_solver.hpp"
#include "aqec/lindblad_ops.hpp"

namespace aqec {

namespace {

Vector fock_ket(int dim, std::initializer_list<std::pair<int, double>> amps) {
    Vector v = Vector::Zero(dim);
    for (const auto& [n, c] : amps) v(n) = c;
    return v;
}

ProjectorLadder equal_weight_ladder(int dim, std::initializer_list<int> slots) {
    RealVector d = RealVector::Zero(dim - 1);
    for (int n : slots) d(n - 1) = 1.0;  // d_n multiplies |n><n-1|
    d /= d.norm();
    return ProjectorLadder(d, dim);
}

}  // namespace

NamedCode named_code(const std::string& name, int dim) {
    if (dim < 8) throw ConfigError("named codes need dim >= 8");
    const double r35 = std::sqrt(0.35), r65 = std::sqrt(0.65);
    const double r90 = std::sqrt(0.9), r10 = std::sqrt(0.1), r50 = std::sqrt(0.5);
    if (name == "grl") {
        return {Codeword(fock_ket(dim, {{4, 1.0}}), fock_ket(dim, {{7, 1.0}})),
                equal_weight_ladder(dim, {3, 4, 6, 7})};
    }
    if (name == "rl") {
        return {Codeword(fock_ket(dim, {{2, 1.0}}), fock_ket(dim, {{4, 1.0}})),
                equal_weight_ladder(dim, {2, 4})};
    }
    if (name == "binomial") {
        return {Codeword(fock_ket(dim, {{0, r50}, {4, r50}}), fock_ket(dim, {{2, 1.0}})),
                equal_weight_ladder(dim, {2, 4})};
    }
    if (name == "t4c") {
        return {Codeword(fock_ket(dim, {{1, r35}, {5, r65}}), fock_ket(dim, {{3, r90}, {7, r10}})),
                equal_weight_ladder(dim, {1, 3, 5, 7})};
    }
    if (name == "breakeven") {
        return {Codeword(fock_ket(dim, {{0, 1.0}}), fock_ket(dim, {{1, 1.0}})), std::nullopt};
    }
    throw ConfigError("unknown code name: " + name);
}

std::vector<std::string> named_code_list() {
    return {"breakeven", "t4c", "binomial", "rl", "grl"};
}

Codeword codeword_from_action(const RealVector& c) {
    Vector zero = Vector::Zero(c.size());
    Vector one = Vector::Zero(c.size());
    bool has_pos = false, has_neg = false;
    for (int n = 0; n < c.size(); ++n) {
        if (c(n) > 0.0) {
            zero(n) = c(n);
            has_pos = true;
        } else if (c(n) < 0.0) {
            one(n) = -c(n);
            has_neg = true;
        }
    }
    if (!has_pos || !has_neg) {
        throw DegenerateCodeError("codeword action needs entries of both signs");
    }
    zero /= zero.norm();
    one /= one.norm();
    return Codeword(std::move(zero), std::move(one));
}

ProjectorLadder ladder_from_action(const RealVector& d) {
    if (d.norm() <= 1e-9) {
        throw DegenerateLadderError("ladder action is numerically zero");
    }
    return ProjectorLadder(d, static_cast<int>(d.size()) + 1);
}

std::string error_op_label(ErrorOp e) {
    switch (e) {
        case ErrorOp::I: return "I";
        case ErrorOp::A: return "a";
        case ErrorOp::A2: return "a^2";
    }
    return "?";
}

namespace {

Matrix error_matrix(ErrorOp e, int dim) {
    switch (e) {
        case ErrorOp::I: return Matrix::Identity(dim, dim);
        case ErrorOp::A: return annihilation_power(dim, 1);
        case ErrorOp::A2: return annihilation_power(dim, 2);
    }
    throw ConfigError("bad error op");
}

}  // namespace

KLReport kl_check(const Codeword& code, const std::vector<ErrorOp>& error_set, double tol) {
    KLReport report;
    report.error_set = error_set;
    const int dim = code.dim();
    for (ErrorOp li : error_set) {
        for (ErrorOp lj : error_set) {
            const Matrix M = error_matrix(li, dim).adjoint() * error_matrix(lj, dim);
            const Complex flip = code.zero_logical().dot(M * code.one_logical());
            if (std::abs(flip) > tol) report.flip_violations.push_back({li, lj, flip});
            const Complex d1 = code.one_logical().dot(M * code.one_logical());
            const Complex d0 = code.zero_logical().dot(M * code.zero_logical());
            if (std::abs(d1 - d0) > tol) report.dephasing_violations.push_back({li, lj, d1 - d0});
        }
    }
    return report;
}

CodeAnalysis hamiltonian_distances(const Codeword& code,
                                   const std::optional<ProjectorLadder>& ladder) {
    CodeAnalysis out;
    const int dim = code.dim();
    Matrix num = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) num(n, n) = n;
    const double n0 = code.zero_logical().dot(num * code.zero_logical()).real();
    const double n1 = code.one_logical().dot(num * code.one_logical()).real();
    out.mean_photon = 0.5 * (n0 + n1);

    // d: maximum Fock-index shift among nonzero ladder terms (1 for any
    // linear ladder).
    out.jump_distance = 0;
    if (ladder) {
        for (int k = 0; k + 1 < dim; ++k) {
            if (ladder->coeff(k) != 0.0) out.jump_distance = 1;
        }
    }

    // d_g: the largest Fock gap the Pauli set must bridge. sigma_x couples
    // across the two supports; sigma_z within each support.
    constexpr double kTol = 1e-12;
    std::vector<int> s0, s1;
    for (int n = 0; n < dim; ++n) {
        if (std::abs(code.zero_logical()(n)) > kTol) s0.push_back(n);
        if (std::abs(code.one_logical()(n)) > kTol) s1.push_back(n);
    }
    int dg = 0;
    for (int a : s0)
        for (int b : s1) dg = std::max(dg, std::abs(a - b));
    for (const auto& s : {s0, s1})
        for (int a : s)
            for (int b : s) dg = std::max(dg, std::abs(a - b));
    out.gate_distance = dg;

    // Error-space labels for the first and second photon-loss levels.
    std::set<int> support(s0.begin(), s0.end());
    support.insert(s1.begin(), s1.end());
    auto label_errors = [&](const std::vector<int>& s, const std::string& logical) {
        for (int order = 1; order <= 2; ++order) {
            for (int n : s) {
                const int err = n - order;
                if (err >= 0 && support.find(err) == support.end()) {
                    std::ostringstream os;
                    os << logical << "_e" << order << "=|" << err << ">";
                    out.mod3_syndrome_spaces.push_back(os.str());
                }
            }
        }
    };
    label_errors(s0, "0");
    label_errors(s1, "1");
    return out;
}

ProtectingFactorFit calibrate_protecting_factor(double lambda_eng, double eta, double tau_lo,
                                                double tau_hi, int points) {
    if (points < 2 || tau_hi <= tau_lo) throw ConfigError("bad fit window");
    const NamedCode grl = named_code("grl");
    const int dim = grl.code.dim();
    auto gen = build_diagonal_generator(3, LossChannelSet::with_double_photon(eta), grl.ladder,
                                        lambda_eng, dim);
    Vector v0 = Vector::Zero(dim - 3);
    v0(4) = 0.5;  // rho_47 of the |+x> cardinal state
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < points; ++i) {
        const double tau = tau_lo + (tau_hi - tau_lo) * i / (points - 1);
        const Vector vt = gen.propagate(v0, tau);
        const double y = std::log(std::abs(vt(4)) / std::abs(v0(4)));
        pts.emplace_back(tau, y);
        sx += tau;
        sy += y;
        sxx += tau * tau;
        sxy += tau * y;
    }
    const double n = points;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double resid = 0.0;
    for (const auto& [tau, y] : pts) resid = std::max(resid, std::abs(y - (slope * tau + icpt)));
    return {-slope, resid};
}

double grl_closed_form(double tau, double eta, std::optional<double> u_override) {
    if (tau < 0.0) throw ConfigError("tau must be >= 0");
    const double u = u_override ? *u_override : calibrate_protecting_factor(1e4, eta).u;
    return 2.0 / 3.0 + std::exp(-u * tau) / 3.0;
}

ProjectorLadder xi_family(double xi, int dim) {
    if (xi <= 0.0) throw ConfigError("xi must be > 0");
    RealVector d = RealVector::Zero(dim - 1);
    d(3) = 1.0;  // |4><3|
    d(6) = 1.0;  // |7><6|
    d(2) = xi;   // |3><2|
    d(5) = xi;   // |6><5|
    d /= d.norm();
    return ProjectorLadder(d, dim);
}

}  // namespace aqec
