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

#include "aqec/dense_solver.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "aqec/fidelity.hpp"
#include "aqec/lindblad_ops.hpp"

namespace aqec {

namespace {

Matrix sigma_minus() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace

HybridState HybridState::embed_cavity(const Matrix& rho_cavity, int ancilla_dim,
                                      int readout_dim) {
    HybridState s;
    s.cavity_dim = static_cast<int>(rho_cavity.rows());
    s.ancilla_dim = ancilla_dim;
    s.readout_dim = readout_dim;
    Matrix ground = Matrix::Zero(ancilla_dim, ancilla_dim);
    ground(0, 0) = 1.0;
    s.entries = kron(rho_cavity, ground);
    if (readout_dim > 0) {
        Matrix vac = Matrix::Zero(readout_dim, readout_dim);
        vac(0, 0) = 1.0;
        s.entries = kron(s.entries, vac);
    }
    return s;
}

Matrix HybridState::reduce_cavity() const {
    const int rest = ancilla_dim * std::max(readout_dim, 1);
    Matrix out = Matrix::Zero(cavity_dim, cavity_dim);
    for (int i = 0; i < cavity_dim; ++i) {
        for (int j = 0; j < cavity_dim; ++j) {
            Complex acc = 0.0;
            for (int k = 0; k < rest; ++k) acc += entries(i * rest + k, j * rest + k);
            out(i, j) = acc;
        }
    }
    return out;
}

void HybridState::validate(double trace_tol) const {
    if (entries.rows() != total_dim() || entries.cols() != total_dim()) {
        throw StructuralError("hybrid state entries do not match declared dimensions");
    }
    // Reuse the FockDensityMatrix checks on the full matrix.
    FockDensityMatrix probe(entries, trace_tol);
    (void)probe;
}

Matrix lindblad_rhs(const LindbladModel& model, double t, const Matrix& rho) {
    const int d = static_cast<int>(rho.rows());
    if (model.hamiltonian.size() != 0 && model.hamiltonian.rows() != d) {
        throw StructuralError("Hamiltonian dimension mismatch");
    }
    const Complex I(0.0, 1.0);
    Matrix drho = Matrix::Zero(d, d);
    Matrix H = model.hamiltonian.size() != 0 ? model.hamiltonian : Matrix::Zero(d, d);
    for (const auto& term : model.time_dep) {
        if (term.hamiltonian) H += term.coeff(t) * term.op;
    }
    drho.noalias() = -I * (H * rho - rho * H);
    auto add_channel = [&](double rate, const Matrix& X) {
        if (rate == 0.0) return;
        if (X.rows() != d) throw StructuralError("collapse operator dimension mismatch");
        Matrix Xd = X.adjoint();
        Matrix XdX = Xd * X;
        drho.noalias() += rate * (X * rho * Xd);
        drho.noalias() -= (rate / 2.0) * (XdX * rho + rho * XdX);
    };
    for (const auto& ch : model.collapse) add_channel(ch.rate, ch.op);
    for (const auto& term : model.time_dep) {
        if (!term.hamiltonian) add_channel(term.coeff(t), term.op);
    }
    return drho;
}

namespace {

// Precomputed form of the model for the integrator hot loop.
struct CompiledModel {
    Matrix H0;
    struct Channel {
        Matrix X, Xd, XdX;
        double rate;                          // static rate
        std::function<double(double)> coeff;  // null for static channels
    };
    std::vector<Channel> channels;
    struct HTerm {
        std::function<double(double)> coeff;
        Matrix op;
    };
    std::vector<HTerm> h_terms;
    bool time_dependent_h = false;

    explicit CompiledModel(const LindbladModel& m, int d) {
        H0 = m.hamiltonian.size() != 0 ? m.hamiltonian : Matrix::Zero(d, d);
        for (const auto& ch : m.collapse) {
            channels.push_back({ch.op, ch.op.adjoint(), ch.op.adjoint() * ch.op, ch.rate, nullptr});
        }
        for (const auto& term : m.time_dep) {
            if (term.hamiltonian) {
                h_terms.push_back({term.coeff, term.op});
                time_dependent_h = true;
            } else {
                channels.push_back(
                    {term.op, term.op.adjoint(), term.op.adjoint() * term.op, 0.0, term.coeff});
            }
        }
    }

    void rhs(double t, const Matrix& rho, Matrix& out, Matrix& scratch) const {
        const Complex I(0.0, 1.0);
        if (time_dependent_h) {
            Matrix H = H0;
            for (const auto& ht : h_terms) H += ht.coeff(t) * ht.op;
            out.noalias() = -I * (H * rho);
            out.noalias() += I * (rho * H);
        } else {
            out.noalias() = -I * (H0 * rho);
            out.noalias() += I * (rho * H0);
        }
        for (const auto& ch : channels) {
            const double rate = ch.coeff ? ch.coeff(t) : ch.rate;
            if (rate == 0.0) continue;
            scratch.noalias() = ch.X * rho;
            out.noalias() += rate * (scratch * ch.Xd);
            out.noalias() -= (rate / 2.0) * (ch.XdX * rho);
            out.noalias() -= (rate / 2.0) * (rho * ch.XdX);
        }
    }
};

}  // namespace

std::vector<Matrix> integrate(const Matrix& rho0, const LindbladModel& model,
                              const std::vector<double>& t_grid, const IntegratorOptions& opts) {
    const int d = static_cast<int>(rho0.rows());
    if (t_grid.empty()) return {};
    if (t_grid.front() < 0.0) throw ConfigError("grid times must be >= 0");
    for (size_t i = 1; i < t_grid.size(); ++i) {
        if (t_grid[i] < t_grid[i - 1]) throw ConfigError("grid times must be nondecreasing");
    }
    CompiledModel cm(model, d);

    // Dormand-Prince 5(4) tableau.
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    Matrix y = rho0;
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), k5(d, d), k6(d, d), k7(d, d);
    Matrix ytmp(d, d), err(d, d), scratch(d, d);
    const double trace0 = rho0.trace().real();

    double t = 0.0;
    double dt = opts.dt_init;
    if (opts.dt_max > 0.0) dt = std::min(dt, opts.dt_max);
    std::vector<Matrix> out;
    out.reserve(t_grid.size());
    size_t gi = 0;
    while (gi < t_grid.size() && t_grid[gi] <= t + 1e-15) {
        out.push_back(y);
        ++gi;
    }
    bool k1_fresh = false;
    while (gi < t_grid.size()) {
        const double t_target = t_grid[gi];
        double h = std::min(dt, t_target - t);
        if (opts.dt_max > 0.0) h = std::min(h, opts.dt_max);
        if (h < opts.dt_min) {
            std::ostringstream os;
            os << "integrator step size underflow at tau = " << t << " (stiffness)";
            throw NumericalError(os.str(), t);
        }
        if (!k1_fresh) cm.rhs(t, y, k1, scratch);
        ytmp = y + h * a21 * k1;
        cm.rhs(t + c2 * h, ytmp, k2, scratch);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        cm.rhs(t + c3 * h, ytmp, k3, scratch);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        cm.rhs(t + c4 * h, ytmp, k4, scratch);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        cm.rhs(t + c5 * h, ytmp, k5, scratch);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        cm.rhs(t + h, ytmp, k6, scratch);
        ytmp = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        cm.rhs(t + h, ytmp, k7, scratch);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = std::max(opts.abs_floor, ytmp.cwiseAbs().maxCoeff());
        const double err_norm = err.cwiseAbs().maxCoeff() / scale;
        if (err_norm <= opts.rel_tol || (opts.dt_max > 0.0 && h >= opts.dt_max)) {
            t += h;
            y.swap(ytmp);
            k1.swap(k7);  // FSAL
            k1_fresh = true;
            while (gi < t_grid.size() && t_grid[gi] <= t + 1e-12) {
                out.push_back(y);
                ++gi;
            }
        } else {
            k1_fresh = true;  // k1 still corresponds to (t, y)
        }
        const double grow = err_norm > 0.0
                                ? 0.9 * std::pow(opts.rel_tol / err_norm, 0.2)
                                : 5.0;
        dt = h * std::clamp(grow, 0.2, 5.0);
    }
    const double drift = std::abs(y.trace().real() - trace0);
    if (drift > 1e-7) {
        std::ostringstream os;
        os << "trace drift " << drift << " over the horizon exceeds 1e-7";
        throw NumericalError(os.str(), t);
    }
    return out;
}

LindbladModel aqec_hybrid_model(const ProjectorLadder& ladder, const SystemParams& params) {
    params.validate();
    const int n = ladder.dim();
    const Matrix id_c = Matrix::Identity(n, n);
    const Matrix id_q = Matrix::Identity(2, 2);
    const Matrix sm = sigma_minus();
    const Matrix sp = sm.adjoint();
    const Matrix Leng = engineered_jump(ladder);

    LindbladModel m;
    m.hamiltonian = params.g_ratio * (kron(Leng, sp) + kron(Leng.adjoint(), sm));
    m.collapse.push_back({1.0, kron(annihilation_power(n, 1), id_q)});
    if (params.eta2 > 0.0) m.collapse.push_back({params.eta2, kron(annihilation_power(n, 2), id_q)});
    m.collapse.push_back({params.gamma_b_ratio, kron(id_c, sm)});
    return m;
}

namespace {

std::vector<double> run_cardinal_fidelities(const Codeword& code, const LindbladModel& model,
                                            const std::vector<double>& tau_grid,
                                            const IntegratorOptions& opts) {
    const auto cards = cardinal_matrices(code);
    std::vector<double> fbar(tau_grid.size(), 0.0);
    for (const auto& rho_c : cards) {
        HybridState h = HybridState::embed_cavity(rho_c);
        auto traj = integrate(h.entries, model, tau_grid, opts);
        for (size_t i = 0; i < traj.size(); ++i) {
            HybridState ht = h;
            ht.entries = std::move(traj[i]);
            fbar[i] += (rho_c.conjugate().cwiseProduct(ht.reduce_cavity())).sum().real();
        }
    }
    for (auto& f : fbar) f /= 6.0;
    return fbar;
}

}  // namespace

std::vector<double> simulate_aqec_hybrid(const Codeword& code, const ProjectorLadder& ladder,
                                         const SystemParams& params,
                                         const std::vector<double>& tau_grid,
                                         const IntegratorOptions& opts) {
    return run_cardinal_fidelities(code, aqec_hybrid_model(ladder, params), tau_grid, opts);
}

void PhaseDampingParams::validate() const {
    if (omega_c <= 0.0) throw ConfigError("omega_c must be > 0");
    if (s <= 0.0) throw ConfigError("ohmicity s must be > 0");
}

double phase_damping_rate(double t, const PhaseDampingParams& p) {
    const double wt = p.omega_c * t;
    const double arg = p.s_multiplied_arctan ? p.s * std::atan(wt) : std::atan(wt);
    return p.omega_c * std::tgamma(p.s) * std::sin(arg) /
           std::pow(1.0 + wt * wt, p.s / 2.0);
}

std::vector<double> simulate_phase_damping(const Codeword& code, const ProjectorLadder& ladder,
                                           const SystemParams& params,
                                           const PhaseDampingParams& p,
                                           const std::vector<double>& tau_grid,
                                           const IntegratorOptions& opts) {
    p.validate();
    LindbladModel m = aqec_hybrid_model(ladder, params);
    const int n = ladder.dim();
    Matrix sz = Matrix::Zero(2, 2);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    m.time_dep.push_back(
        {[p](double t) { return phase_damping_rate(t, p); },
         kron(Matrix::Identity(n, n), sz), false});
    return run_cardinal_fidelities(code, m, tau_grid, opts);
}

void AmplitudeDampingParams::validate() const {
    if (gamma0 < 0.0) throw ConfigError("gamma0 must be >= 0");
    if (width <= 0.0) throw ConfigError("Lorentzian width must be > 0");
}

namespace {

// Rdot/R in closed form; Omega -> 0 handled by series for sinh(x)/x.
Complex r_log_derivative(double t, const AmplitudeDampingParams& p) {
    const Complex lam_d(p.width, -p.detuning);  // lambda_L - i Delta
    const Complex omega = std::sqrt(lam_d * lam_d - 2.0 * p.gamma0 * p.width);
    const Complex x = omega * t / 2.0;
    Complex sinh_over_omega, cosh_x;
    if (std::abs(x) < 1e-6) {
        sinh_over_omega = (t / 2.0) * (1.0 + x * x / 6.0);
        cosh_x = 1.0 + x * x / 2.0;
    } else {
        sinh_over_omega = std::sinh(x) / omega;
        cosh_x = std::cosh(x);
    }
    const Complex denom = cosh_x + lam_d * sinh_over_omega;
    return -p.gamma0 * p.width * sinh_over_omega / denom;
}

}  // namespace

Complex amplitude_damping_R(double t, const AmplitudeDampingParams& p) {
    const Complex lam_d(p.width, -p.detuning);
    const Complex omega = std::sqrt(lam_d * lam_d - 2.0 * p.gamma0 * p.width);
    const Complex x = omega * t / 2.0;
    Complex sinh_over_omega, cosh_x;
    if (std::abs(x) < 1e-6) {
        sinh_over_omega = (t / 2.0) * (1.0 + x * x / 6.0);
        cosh_x = 1.0 + x * x / 2.0;
    } else {
        sinh_over_omega = std::sinh(x) / omega;
        cosh_x = std::cosh(x);
    }
    return std::exp(-lam_d * t / 2.0) * (cosh_x + lam_d * sinh_over_omega);
}

AmplitudeDampingFunctions amplitude_damping_functions(double t,
                                                      const AmplitudeDampingParams& p) {
    if (t < 0.0) throw ConfigError("t must be >= 0");
    p.validate();
    if (std::abs(amplitude_damping_R(t, p)) <= 1e-12) {
        std::ostringstream os;
        os << "R(t) vanished at tau = " << t;
        throw NumericalError(os.str(), t);
    }
    const Complex ratio = r_log_derivative(t, p);
    return {-2.0 * ratio.imag(), -2.0 * ratio.real()};
}

std::vector<double> simulate_amplitude_damping(const Codeword& code,
                                               const ProjectorLadder& ladder,
                                               const SystemParams& params,
                                               const AmplitudeDampingParams& p,
                                               const std::vector<double>& tau_grid,
                                               const IntegratorOptions& opts) {
    p.validate();
    LindbladModel m = aqec_hybrid_model(ladder, params);
    const int n = ladder.dim();
    const Matrix sm = sigma_minus();
    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;  // sigma_+ sigma_-
    m.time_dep.push_back({[p](double t) { return 0.5 * amplitude_damping_functions(t, p).h; },
                          kron(Matrix::Identity(n, n), excited), true});
    m.time_dep.push_back({[p](double t) { return amplitude_damping_functions(t, p).gamma; },
                          kron(Matrix::Identity(n, n), sm), false});
    return run_cardinal_fidelities(code, m, tau_grid, opts);
}

RwaResult simulate_rwa_three_mode(const Codeword& code, const ProjectorLadder& ladder,
                                  const RwaParams& params, const std::vector<double>& tau_grid,
                                  const IntegratorOptions& opts) {
    const int n = ladder.dim();
    const Matrix id_c = Matrix::Identity(n, n);
    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix sm = sigma_minus();
    const Matrix sp = sm.adjoint();

    Matrix Lo = ladder_matrix(ladder);
    Matrix pump_proj = Matrix::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        if (ladder.coeff(k) != 0.0) pump_proj(k + 1, k + 1) = 1.0;
    }

    auto kron3 = [&](const Matrix& a, const Matrix& b, const Matrix& c) {
        return kron(kron(a, b), c);
    };
    const Matrix a_full = kron3(annihilation_power(n, 1), id2, id2);
    const Matrix a2_full = kron3(annihilation_power(n, 2), id2, id2);
    const Matrix sm_full = kron3(id_c, sm, id2);
    const Matrix c_full = kron3(id_c, id2, sm);
    const Matrix Lo_full = kron3(Lo, id2, id2);
    const Matrix proj_full = kron3(pump_proj, id2, id2);

    LindbladModel m;
    m.hamiltonian =
        params.g0_ratio * (Lo_full * kron3(id_c, sp, id2) + Lo_full.adjoint() * kron3(id_c, sm, id2)) +
        params.g1_ratio * (proj_full * (c_full.adjoint() * sm_full + c_full * sm_full.adjoint()));
    m.collapse.push_back({1.0, a_full});
    if (params.eta2 > 0.0) m.collapse.push_back({params.eta2, a2_full});
    m.collapse.push_back({params.gamma_b_ratio, sm_full});
    m.collapse.push_back({params.gamma_c_ratio, c_full});

    RwaResult res;
    res.taus = tau_grid;
    res.regime_warning = !(params.gamma_c_ratio >= 10.0 * params.g1_ratio &&
                           params.g1_ratio >= std::abs(params.g0_ratio) &&
                           std::abs(params.g0_ratio) >= 10.0 * std::max(1.0, params.gamma_b_ratio));

    const auto cards = cardinal_matrices(code);
    std::vector<double> fbar(tau_grid.size(), 0.0);
    for (const auto& rho_c : cards) {
        HybridState h = HybridState::embed_cavity(rho_c, 2, 2);
        auto traj = integrate(h.entries, m, tau_grid, opts);
        for (size_t i = 0; i < traj.size(); ++i) {
            HybridState ht = h;
            ht.entries = std::move(traj[i]);
            fbar[i] += (rho_c.conjugate().cwiseProduct(ht.reduce_cavity())).sum().real();
        }
    }
    for (auto& f : fbar) f /= 6.0;
    res.mean_fidelity = fbar;
    res.breakeven.reserve(tau_grid.size());
    res.gain.reserve(tau_grid.size());
    for (size_t i = 0; i < tau_grid.size(); ++i) {
        const double be = breakeven_reference(tau_grid[i]);
        res.breakeven.push_back(be);
        if (fbar[i] < 1.0 - 1e-12) {
            res.gain.push_back((1.0 - be) / (1.0 - fbar[i]));
        } else {
            res.gain.push_back(std::nullopt);
        }
    }
    return res;
}

}  // namespace aqec
