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

// Batch entry point: one subcommand per reproduced experiment.
//   evaluate    code-comparison fidelity curves (single vs double photon loss)
//   scan-bloch  fidelity over the logical Bloch sphere
//   benchmark   analytic solver vs dense integrator wall-clock
//   noise       phase- or amplitude-damping sweeps
//   wigner      cardinal-state Wigner grids before/after evolution
//   train       two-phase curriculum PPO training
//   xi-scan     ladder-coefficient robustness
//   kl          Knill-Laflamme report for a named code
//   rwa         three-mode lab-configuration gain
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 check miss.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "aqec/analytic_solver.hpp"
#include "aqec/codes.hpp"
#include "aqec/dense_solver.hpp"
#include "aqec/fidelity.hpp"
#include "aqec/io.hpp"
#include "aqec/lindblad_ops.hpp"
#include "aqec/rl/curriculum.hpp"

using nlohmann::json;
using namespace aqec;

namespace {

struct Context {
    std::string out_dir;
    std::uint64_t seed = 1;
    std::string solver = "analytic";
    bool check = false;
    json config;  // merged config (defaults overridden by --config)
    std::uint64_t hash = 0;
};

std::vector<double> default_tau_grid() {
    std::vector<double> taus;
    for (int k = 1; k <= 70; ++k) taus.push_back(0.06 * k);
    return taus;
}

void ensure_out(Context& ctx, const std::string& cmd) {
    if (ctx.out_dir.empty()) ctx.out_dir = "out/" + cmd;
    std::filesystem::create_directories(ctx.out_dir);
}

void write_summary(const Context& ctx, const json& summary) {
    std::ofstream out(ctx.out_dir + "/summary.json");
    out << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
}

bool check_near(json& report, const std::string& label, double value, double expect,
                double tol) {
    const bool ok = std::abs(value - expect) <= tol;
    report["checks"].push_back({{"label", label},
                                {"value", value},
                                {"expected", expect},
                                {"tolerance", tol},
                                {"pass", ok}});
    return ok;
}

json merged_config(const std::string& path, const json& defaults,
                   const std::vector<FieldSpec>& fields, const std::string& cmd) {
    json cfg = defaults;
    if (!path.empty()) {
        json user = load_json_file(path);
        validate_fields(user, fields, cmd);
        cfg.update(user);
    }
    return cfg;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(Context& ctx) {
    const json defaults = {
        {"codes", json::array({"breakeven", "t4c", "binomial", "rl", "grl"})},
        {"gamma_b_ratio", 1800.0},
        {"g_ratio", 600.0},
        {"eta_values", json::array({0.0, 0.012})},
        {"tau_max", 4.2},
        {"tau_step", 0.06},
        {"measurement_tau", 3.0},
    };
    const std::vector<FieldSpec> fields = {
        {"codes", FieldSpec::Type::Array},         {"gamma_b_ratio", FieldSpec::Type::Number},
        {"g_ratio", FieldSpec::Type::Number},      {"eta_values", FieldSpec::Type::Array},
        {"tau_max", FieldSpec::Type::Number},      {"tau_step", FieldSpec::Type::Number},
        {"measurement_tau", FieldSpec::Type::Number},
    };
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "evaluate");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "evaluate");

    const double gb = ctx.config["gamma_b_ratio"], g = ctx.config["g_ratio"];
    const double tau_step = ctx.config["tau_step"], tau_max = ctx.config["tau_max"];
    std::vector<double> taus;
    for (double t = tau_step; t <= tau_max + 1e-12; t += tau_step) taus.push_back(t);

    json summary{{"experiment", "evaluate"},
                 {"lambda_eng", SystemParams::make(gb, 0.0, g).pump_ratio()},
                 {"measurement_tau", ctx.config["measurement_tau"]},
                 {"checks", json::array()},
                 {"codes", json::object()}};
    const double mt = ctx.config["measurement_tau"];
    const double lambda = SystemParams::make(gb, 0.0, g).pump_ratio();

    for (const auto& name_json : ctx.config["codes"]) {
        const std::string name = name_json;
        auto nc = named_code(name);
        json code_block;
        std::map<double, std::vector<double>> curves;
        for (const auto& eta_json : ctx.config["eta_values"]) {
            const double eta = eta_json;
            auto channels = LossChannelSet::with_double_photon(eta);
            std::vector<double> fbar;
            if (ctx.solver == "dense" && nc.ladder) {
                fbar = simulate_aqec_hybrid(nc.code, *nc.ladder,
                                            SystemParams::make(gb, eta, g), taus);
            } else {
                fbar = mean_fidelity_series(nc.code, channels, nc.ladder,
                                            nc.ladder ? lambda : 0.0, taus);
            }
            curves[eta] = fbar;
            std::ostringstream fname;
            fname << ctx.out_dir << "/fidelity_" << name << "_eta" << eta << ".csv";
            CsvWriter csv(fname.str(), {"tau", "fidelity", "breakeven"}, ctx.hash);
            for (size_t i = 0; i < taus.size(); ++i) {
                csv.row({taus[i], fbar[i], breakeven_reference(taus[i])});
            }
        }
        auto at_tau = [&](const std::vector<double>& c, double t) {
            size_t best = 0;
            for (size_t i = 0; i < taus.size(); ++i) {
                if (std::abs(taus[i] - t) < std::abs(taus[best] - t)) best = i;
            }
            return c[best];
        };
        if (curves.count(0.0) && curves.size() >= 2) {
            const double eta1 = [&] {
                for (const auto& [e, c] : curves) {
                    if (e > 0.0) return e;
                }
                return 0.0;
            }();
            const double f0 = at_tau(curves[0.0], mt), f1 = at_tau(curves[eta1], mt);
            code_block["fidelity_eta0_at_mt"] = f0;
            code_block["fidelity_eta_at_mt"] = f1;
            code_block["drop_pct_relative"] = 100.0 * (f0 - f1) / f0;
            code_block["drop_pp_absolute"] = 100.0 * (f0 - f1);
            // breakeven margin on [0.5, tau_max] under double-photon loss
            double min_margin = 1e300;
            for (size_t i = 0; i < taus.size(); ++i) {
                if (taus[i] < 0.5) continue;
                min_margin = std::min(min_margin,
                                      curves[eta1][i] - breakeven_reference(taus[i]));
            }
            code_block["min_breakeven_margin"] = min_margin;
        }
        summary["codes"][name] = code_block;
    }

    bool ok = true;
    if (ctx.check) {
        auto be = named_code("breakeven");
        const double f_be =
            mean_fidelity(be.code, LossChannelSet::single_photon(), {}, 0.0, 0.6);
        ok &= check_near(summary, "breakeven(0.6)", f_be, 0.8384, 1e-3);
        auto grl = named_code("grl");
        const double f_grl = mean_fidelity(
            grl.code, LossChannelSet::with_double_photon(0.012), grl.ladder, lambda, 0.6);
        ok &= check_near(summary, "grl(0.6) at paper parameters", f_grl, 0.9175, 5e-3);
    }
    write_summary(ctx, summary);
    return ok ? 0 : 4;
}

// --------------------------------------------------------------- scan-bloch

int cmd_scan_bloch(Context& ctx) {
    const json defaults = {{"code", "grl"}, {"lambda_eng", 1e4}, {"eta", 0.012}, {"tau", 0.6}};
    const std::vector<FieldSpec> fields = {{"code", FieldSpec::Type::String},
                                           {"lambda_eng", FieldSpec::Type::Number},
                                           {"eta", FieldSpec::Type::Number},
                                           {"tau", FieldSpec::Type::Number}};
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "scan-bloch");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "scan-bloch");

    auto nc = named_code(ctx.config["code"]);
    auto channels = LossChannelSet::with_double_photon(ctx.config["eta"]);
    auto scan = bloch_scan(nc.code, channels, nc.ladder,
                           nc.ladder ? double(ctx.config["lambda_eng"]) : 0.0,
                           ctx.config["tau"]);
    CsvWriter csv(ctx.out_dir + "/bloch_scan.csv", {"theta", "phi", "fidelity"}, ctx.hash);
    for (int it = 0; it < scan.grid.rows(); ++it) {
        for (int ip = 0; ip < scan.grid.cols(); ++ip) {
            csv.row({it * scan.theta_step, ip * scan.phi_step, scan.grid(it, ip)});
        }
    }
    json summary{{"experiment", "scan-bloch"},
                 {"min", scan.min()},
                 {"max", scan.max()},
                 {"mean", scan.grid.mean()},
                 {"checks", json::array()}};
    bool ok = true;
    if (ctx.check) {
        const bool pass = scan.min() >= 0.90;
        summary["checks"].push_back(
            {{"label", "bloch min >= 0.90"}, {"value", scan.min()}, {"pass", pass}});
        ok &= pass;
    }
    write_summary(ctx, summary);
    return ok ? 0 : 4;
}

// ---------------------------------------------------------------- benchmark

int cmd_benchmark(Context& ctx) {
    const json defaults = {{"fock_dims", json::array({8, 16, 32})},
                           {"repetitions", 3},
                           {"gamma_b_ratio", 1800.0},
                           {"g_ratio", 600.0},
                           {"eta", 0.012},
                           {"tau_points", 70}};
    const std::vector<FieldSpec> fields = {
        {"fock_dims", FieldSpec::Type::Array}, {"repetitions", FieldSpec::Type::Integer},
        {"gamma_b_ratio", FieldSpec::Type::Number}, {"g_ratio", FieldSpec::Type::Number},
        {"eta", FieldSpec::Type::Number},      {"tau_points", FieldSpec::Type::Integer}};
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "benchmark");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "benchmark");

    const double gb = ctx.config["gamma_b_ratio"], g = ctx.config["g_ratio"];
    const double eta = ctx.config["eta"];
    const int reps = ctx.config["repetitions"];
    std::vector<double> taus;
    for (int k = 1; k <= int(ctx.config["tau_points"]); ++k) taus.push_back(0.06 * k);

    CsvWriter csv(ctx.out_dir + "/benchmark.csv",
                  {"N", "analytic_ms", "dense_ms", "speedup"}, ctx.hash);
    json summary{{"experiment", "benchmark"}, {"rows", json::array()}, {"checks", json::array()}};
    double speedup32 = 0.0, jitter_worst = 0.0;

    for (const auto& nj : ctx.config["fock_dims"]) {
        const int dim = nj;
        // The standard workload: one GRL-style code, six cardinal states,
        // mean fidelity over the grid. Embedded at the requested truncation.
        Vector z0 = Vector::Zero(dim), z1 = Vector::Zero(dim);
        z0(4) = 1.0;
        z1(7) = 1.0;
        Codeword code(z0, z1);
        RealVector dvec = RealVector::Zero(dim - 1);
        dvec(2) = dvec(3) = dvec(5) = dvec(6) = 0.5;
        ProjectorLadder ladder(dvec, dim);
        SystemParams params = SystemParams::make(gb, eta, g);
        auto channels = LossChannelSet::with_double_photon(eta);
        const auto cards = cardinal_matrices(code);

        double analytic_best = 1e300, dense_best = 1e300;
        std::vector<double> analytic_runs;
        for (int rep = 0; rep < reps; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            AnalyticPropagator prop(dim, channels, ladder, params.pump_ratio());
            double acc = 0.0;
            for (const auto& rho0 : cards) {
                for (double tau : taus) {
                    acc += rho0.conjugate().cwiseProduct(prop.evolve_matrix(rho0, tau))
                               .sum()
                               .real();
                }
            }
            auto t1 = std::chrono::steady_clock::now();
            const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            analytic_runs.push_back(ms);
            analytic_best = std::min(analytic_best, ms);
            (void)acc;
        }
        for (size_t i = 1; i < analytic_runs.size(); ++i) {
            jitter_worst = std::max(jitter_worst, std::abs(analytic_runs[i] - analytic_runs[0]) /
                                                      std::max(analytic_runs[0], 1e-9));
        }
        {
            auto model = aqec_hybrid_model(ladder, params);
            auto t0 = std::chrono::steady_clock::now();
            double acc = 0.0;
            for (const auto& rho0 : cards) {
                HybridState h = HybridState::embed_cavity(rho0);
                auto traj = integrate(h.entries, model, taus);
                HybridState ht = h;
                ht.entries = traj.back();
                acc += rho0.conjugate().cwiseProduct(ht.reduce_cavity()).sum().real();
            }
            auto t1 = std::chrono::steady_clock::now();
            dense_best = std::chrono::duration<double, std::milli>(t1 - t0).count();
            (void)acc;
        }
        const double speedup = dense_best / analytic_best;
        if (dim == 32) speedup32 = speedup;
        csv.row({double(dim), analytic_best, dense_best, speedup});
        summary["rows"].push_back({{"N", dim},
                                   {"analytic_ms", analytic_best},
                                   {"dense_ms", dense_best},
                                   {"speedup", speedup}});
        std::cout << "N=" << dim << ": analytic " << analytic_best << " ms, dense "
                  << dense_best << " ms, speedup " << speedup << "\n";
    }
    bool ok = true;
    if (ctx.check && speedup32 > 0.0) {
        const bool pass = speedup32 >= 5.0;
        summary["checks"].push_back(
            {{"label", "speedup(N=32) >= 5"}, {"value", speedup32}, {"pass", pass}});
        ok &= pass;
    }
    write_summary(ctx, summary);
    return ok ? 0 : 4;
}

// -------------------------------------------------------------------- noise

int cmd_noise(Context& ctx, const std::string& kind) {
    const json defaults = {
        {"gamma_a_hz", 200.0},
        {"gamma_b_ratio", 1800.0},
        {"g_ratio", 600.0},
        {"eta", 0.012},
        {"tau_max", 4.2},
        {"tau_step", 0.15},
        {"s_values", json::array({2.0, 3.7, 5.0})},
        {"omega_c_hz", json::array({64.0, 128.0, 256.0, 512.0, 1024.0})},
        {"s_multiplied_arctan", false},
        {"amplitude_cases", json::array({json{{"detuning_hz", 100e3}, {"width_hz", 140e3}},
                                         json{{"detuning_hz", 1e3}, {"width_hz", 40.0}}})},
        {"gamma0_ratios", json::array({0.0, 50.0, 500.0})},
    };
    const std::vector<FieldSpec> fields = {
        {"gamma_a_hz", FieldSpec::Type::Number},   {"gamma_b_ratio", FieldSpec::Type::Number},
        {"g_ratio", FieldSpec::Type::Number},      {"eta", FieldSpec::Type::Number},
        {"tau_max", FieldSpec::Type::Number},      {"tau_step", FieldSpec::Type::Number},
        {"s_values", FieldSpec::Type::Array},      {"omega_c_hz", FieldSpec::Type::Array},
        {"s_multiplied_arctan", FieldSpec::Type::Boolean},
        {"amplitude_cases", FieldSpec::Type::Array},
        {"gamma0_ratios", FieldSpec::Type::Array},
    };
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "noise");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "noise-" + kind);

    const double gamma_a_hz = ctx.config["gamma_a_hz"];
    const double gb = ctx.config["gamma_b_ratio"], g = ctx.config["g_ratio"];
    const double eta = ctx.config["eta"];
    auto nc = named_code("grl");
    SystemParams params = SystemParams::make(gb, eta, g);
    std::vector<double> taus;
    for (double t = ctx.config["tau_step"]; t <= double(ctx.config["tau_max"]) + 1e-12;
         t += double(ctx.config["tau_step"])) {
        taus.push_back(t);
    }
    auto base = simulate_aqec_hybrid(nc.code, *nc.ladder, params, taus);
    json summary{{"experiment", "noise-" + kind},
                 {"gamma_a_hz", gamma_a_hz},
                 {"points", json::array()},
                 {"checks", json::array()}};

    if (kind == "phase") {
        for (const auto& sj : ctx.config["s_values"]) {
            for (const auto& wj : ctx.config["omega_c_hz"]) {
                PhaseDampingParams p;
                p.s = sj;
                p.omega_c = double(wj) / gamma_a_hz;
                p.s_multiplied_arctan = ctx.config["s_multiplied_arctan"];
                auto fbar = simulate_phase_damping(nc.code, *nc.ladder, params, p, taus);
                std::ostringstream fname;
                fname << ctx.out_dir << "/phase_s" << double(sj) << "_wc" << double(wj)
                      << ".csv";
                CsvWriter csv(fname.str(), {"tau", "fidelity", "noise_free", "breakeven"},
                              ctx.hash);
                double worst_loss = 0.0;
                for (size_t i = 0; i < taus.size(); ++i) {
                    csv.row({taus[i], fbar[i], base[i], breakeven_reference(taus[i])});
                    if (taus[i] >= 2.0) worst_loss = std::max(worst_loss, base[i] - fbar[i]);
                }
                summary["points"].push_back({{"s", double(sj)},
                                             {"omega_c_hz", double(wj)},
                                             {"long_horizon_loss", worst_loss}});
            }
        }
        // The paper's claim: long-horizon loss below 1.2% even at worst case.
        double worst = 0.0;
        for (const auto& p : summary["points"]) {
            worst = std::max(worst, double(p["long_horizon_loss"]));
        }
        summary["worst_long_horizon_loss"] = worst;
        if (ctx.check) {
            const bool pass = worst <= 0.012;
            summary["checks"].push_back(
                {{"label", "long-horizon loss <= 1.2%"}, {"value", worst}, {"pass", pass}});
            if (!pass) {
                write_summary(ctx, summary);
                return 4;
            }
        }
    } else {  // amplitude
        for (const auto& case_j : ctx.config["amplitude_cases"]) {
            for (const auto& g0j : ctx.config["gamma0_ratios"]) {
                AmplitudeDampingParams p;
                p.detuning = double(case_j["detuning_hz"]) / gamma_a_hz;
                p.width = double(case_j["width_hz"]) / gamma_a_hz;
                p.gamma0 = g0j;
                std::ostringstream fname;
                fname << ctx.out_dir << "/amplitude_d" << double(case_j["detuning_hz"]) << "_g0_"
                      << double(g0j) << ".csv";
                json point{{"detuning_hz", case_j["detuning_hz"]},
                           {"width_hz", case_j["width_hz"]},
                           {"gamma0_ratio", double(g0j)}};
                try {
                    auto fbar =
                        simulate_amplitude_damping(nc.code, *nc.ladder, params, p, taus);
                    CsvWriter csv(fname.str(), {"tau", "fidelity", "noise_free", "breakeven"},
                                  ctx.hash);
                    for (size_t i = 0; i < taus.size(); ++i) {
                        csv.row({taus[i], fbar[i], base[i], breakeven_reference(taus[i])});
                    }
                    point["final_fidelity"] = fbar.back();
                } catch (const NumericalError& e) {
                    point["singular_at_tau"] = e.tau;  // R(t) zero: reported, not fatal
                }
                summary["points"].push_back(point);
            }
        }
    }
    write_summary(ctx, summary);
    return 0;
}

// ------------------------------------------------------------------- wigner

int cmd_wigner(Context& ctx) {
    const json defaults = {{"code", "grl"},    {"tau", 4.2},
                           {"gamma_b_ratio", 1800.0}, {"g_ratio", 600.0},
                           {"eta", 0.012},     {"grid_halfwidth", 4.5},
                           {"grid_points", 91}};
    const std::vector<FieldSpec> fields = {
        {"code", FieldSpec::Type::String},        {"tau", FieldSpec::Type::Number},
        {"gamma_b_ratio", FieldSpec::Type::Number}, {"g_ratio", FieldSpec::Type::Number},
        {"eta", FieldSpec::Type::Number},         {"grid_halfwidth", FieldSpec::Type::Number},
        {"grid_points", FieldSpec::Type::Integer}};
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "wigner");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "wigner");

    auto nc = named_code(ctx.config["code"]);
    const double tau = ctx.config["tau"];
    const double gb = ctx.config["gamma_b_ratio"], g = ctx.config["g_ratio"];
    const double eta = ctx.config["eta"];
    WignerGrid grid;
    grid.x_min = grid.p_min = -double(ctx.config["grid_halfwidth"]);
    grid.x_max = grid.p_max = double(ctx.config["grid_halfwidth"]);
    grid.nx = grid.np = ctx.config["grid_points"];

    auto channels = LossChannelSet::with_double_photon(eta);
    const double lambda = SystemParams::make(gb, eta, g).pump_ratio();
    auto cards = cardinal_states(nc.code);
    static const char* kLabels[6] = {"px", "mx", "py", "my", "pz", "mz"};

    AnalyticPropagator prop(nc.code.dim(), channels,
                            nc.ladder ? nc.ladder : std::optional<ProjectorLadder>{},
                            nc.ladder ? lambda : 0.0);
    json summary{{"experiment", "wigner"}, {"grids", json::array()}, {"checks", json::array()}};
    double overlap_sum = 0.0;
    bool integrals_ok = true;
    for (int s = 0; s < 6; ++s) {
        const Matrix rho0 = cards.states[s].entries();
        for (double t : {0.0, tau}) {
            Matrix rho_t = prop.evolve_matrix(rho0, t);
            auto w = wigner(FockDensityMatrix(rho_t, 1e-6), grid);
            std::ostringstream fname;
            fname << ctx.out_dir << "/wigner_" << kLabels[s] << "_tau" << t << ".csv";
            CsvWriter csv(fname.str(), {"x", "p", "W"}, ctx.hash);
            const double dx = (grid.x_max - grid.x_min) / (grid.nx - 1);
            const double dp = (grid.p_max - grid.p_min) / (grid.np - 1);
            for (int ix = 0; ix < grid.nx; ++ix) {
                for (int ip = 0; ip < grid.np; ++ip) {
                    csv.row({grid.x_min + ix * dx, grid.p_min + ip * dp, w(ix, ip)});
                }
            }
            const double integral = wigner_integral(w, grid);
            integrals_ok &= std::abs(integral - 1.0) <= 0.01;
            summary["grids"].push_back(
                {{"state", kLabels[s]}, {"tau", t}, {"integral", integral}});
        }
        overlap_sum += rho0.conjugate().cwiseProduct(prop.evolve_matrix(rho0, tau)).sum().real();
    }
    const double f_direct = overlap_sum / 6.0;
    summary["mean_overlap_fidelity"] = f_direct;
    summary["breakeven_reference"] = breakeven_reference(tau);
    bool ok = true;
    if (ctx.check) {
        summary["checks"].push_back(
            {{"label", "12 grids integrate to 1 +- 0.01"}, {"pass", integrals_ok}});
        ok &= integrals_ok;
    }
    write_summary(ctx, summary);
    return ok ? 0 : 4;
}

// -------------------------------------------------------------------- train

int cmd_train(Context& ctx) {
    const json defaults = {
        {"episodes_phase1", 2000}, {"episodes_phase2", 0},
        {"phase1_max_steps", 4},   {"phase2_max_steps", 70},
        {"step_tau", 0.06},        {"fixed_zeta", false},
        {"fixed_gamma_b", 1800.0}, {"fixed_eta", 0.012},
        {"fixed_g", 600.0},        {"hidden", json::array({64, 64})},
        {"learning_rate", 3e-4},   {"f1", 250.0},
        {"f2", 2.0},               {"penalty", -20.0},
        {"log_every", 10},
        {"epochs", 4},             {"minibatch", 64},
        {"episodes_per_update", 16},
        {"entropy_coef", 0.01},    {"init_log_std", -0.7},
    };
    const std::vector<FieldSpec> fields = {
        {"episodes_phase1", FieldSpec::Type::Integer},
        {"episodes_phase2", FieldSpec::Type::Integer},
        {"phase1_max_steps", FieldSpec::Type::Integer},
        {"phase2_max_steps", FieldSpec::Type::Integer},
        {"step_tau", FieldSpec::Type::Number},
        {"fixed_zeta", FieldSpec::Type::Boolean},
        {"fixed_gamma_b", FieldSpec::Type::Number},
        {"fixed_eta", FieldSpec::Type::Number},
        {"fixed_g", FieldSpec::Type::Number},
        {"hidden", FieldSpec::Type::Array},
        {"learning_rate", FieldSpec::Type::Number},
        {"f1", FieldSpec::Type::Number},
        {"f2", FieldSpec::Type::Number},
        {"penalty", FieldSpec::Type::Number},
        {"log_every", FieldSpec::Type::Integer},
        {"epochs", FieldSpec::Type::Integer},
        {"minibatch", FieldSpec::Type::Integer},
        {"episodes_per_update", FieldSpec::Type::Integer},
        {"entropy_coef", FieldSpec::Type::Number},
        {"init_log_std", FieldSpec::Type::Number},
    };
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "train");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "train");

    rl::TrainConfig tc;
    tc.schedule.episodes_phase1 = ctx.config["episodes_phase1"];
    tc.schedule.episodes_phase2 = ctx.config["episodes_phase2"];
    tc.schedule.phase1_max_steps = ctx.config["phase1_max_steps"];
    tc.schedule.phase2_max_steps = ctx.config["phase2_max_steps"];
    tc.schedule.step_tau = ctx.config["step_tau"];
    tc.schedule.fixed_zeta = ctx.config["fixed_zeta"];
    tc.schedule.fixed_gamma_b = ctx.config["fixed_gamma_b"];
    tc.schedule.fixed_eta = ctx.config["fixed_eta"];
    tc.schedule.fixed_g = ctx.config["fixed_g"];
    tc.reward.f1 = ctx.config["f1"];
    tc.reward.f2 = ctx.config["f2"];
    tc.reward.penalty = ctx.config["penalty"];
    tc.ppo.learning_rate = ctx.config["learning_rate"];
    tc.ppo.epochs = ctx.config["epochs"];
    tc.ppo.minibatch = ctx.config["minibatch"];
    tc.ppo.episodes_per_update = ctx.config["episodes_per_update"];
    tc.ppo.entropy_coef = ctx.config["entropy_coef"];
    tc.net.init_log_std = ctx.config["init_log_std"];
    tc.net.hidden.clear();
    for (const auto& h : ctx.config["hidden"]) tc.net.hidden.push_back(int(h));
    tc.seed = ctx.seed;
    tc.out_dir = ctx.out_dir;
    tc.log_every = ctx.config["log_every"];

    auto art = rl::run_curriculum(tc);
    json summary{{"experiment", "train"},
                 {"episodes", art.summaries.size()},
                 {"skipped_minibatches", art.skipped_minibatches},
                 {"final_log_std_mean", art.policy.log_std().mean()},
                 {"checks", json::array()}};
    {
        // Deterministic rollout of the converged policy (mean actions),
        // reporting the final-step eps it actually achieves.
        rl::AqecEnv probe_env(tc.schedule, tc.reward, tc.fock_dim);
        auto obs = probe_env.reset(rl::derive_seed(tc.seed, 1, 0));
        auto po = art.policy.forward(obs.v);
        RealVector mean_action = po.mean.array().tanh().matrix();
        summary["policy_mean_action"] =
            std::vector<double>(mean_action.data(), mean_action.data() + mean_action.size());
        double det_eps = -1.0;
        try {
            bool done = false;
            while (!done) {
                auto a = art.policy.forward(obs.v);
                RealVector act = a.mean.array().tanh().matrix();
                auto sr = probe_env.step(rl::ActionVector::split(act, tc.fock_dim));
                det_eps = sr.eps;
                obs = sr.observation;
                done = sr.done;
            }
        } catch (const Error&) {
            det_eps = -1.0;
        }
        summary["policy_eval_eps"] = det_eps;
    }
    if (art.best.found()) {
        summary["best"] = {
            {"episode", art.best.episode},
            {"phase", art.best.phase},
            {"eps", art.best.eps},
            {"codeword_action", std::vector<double>(art.best.codeword_action.data(),
                                                    art.best.codeword_action.data() +
                                                        art.best.codeword_action.size())},
            {"ladder_action", std::vector<double>(art.best.ladder_action.data(),
                                                  art.best.ladder_action.data() +
                                                      art.best.ladder_action.size())}};
    }
    // The best-code evaluation pipeline, applied also to the hand-coded GRL
    // action as a reference.
    RealVector grl_c = RealVector::Zero(8);
    grl_c(4) = 0.9;
    grl_c(7) = -0.9;
    RealVector grl_d = RealVector::Zero(7);
    grl_d(2) = grl_d(3) = grl_d(5) = grl_d(6) = 0.5;
    auto code = codeword_from_action(grl_c);
    auto ladder = ladder_from_action(grl_d);
    const double lambda = SystemParams::make(1800.0, 0.012, 600.0).pump_ratio();
    summary["grl_reference"] = {
        {"fidelity_0p6",
         mean_fidelity(code, LossChannelSet::with_double_photon(0.012), ladder, lambda, 0.6)},
        {"breakeven_0p6", breakeven_reference(0.6)}};
    write_summary(ctx, summary);
    return 0;
}

// ------------------------------------------------------------------ xi-scan

int cmd_xi_scan(Context& ctx) {
    const json defaults = {{"xi_values", json::array({0.5, 1.0, 1.3})},
                           {"gamma_b_ratio", 1800.0},
                           {"g_ratio", 600.0},
                           {"eta", 0.012},
                           {"tau_max", 4.2},
                           {"tau_step", 0.06}};
    const std::vector<FieldSpec> fields = {
        {"xi_values", FieldSpec::Type::Array}, {"gamma_b_ratio", FieldSpec::Type::Number},
        {"g_ratio", FieldSpec::Type::Number},  {"eta", FieldSpec::Type::Number},
        {"tau_max", FieldSpec::Type::Number},  {"tau_step", FieldSpec::Type::Number}};
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "xi-scan");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "xi-scan");

    auto grl = named_code("grl");
    const double lambda =
        SystemParams::make(ctx.config["gamma_b_ratio"], ctx.config["eta"], ctx.config["g_ratio"])
            .pump_ratio();
    auto channels = LossChannelSet::with_double_photon(ctx.config["eta"]);
    std::vector<double> taus;
    for (double t = 0.0; t <= double(ctx.config["tau_max"]) + 1e-12;
         t += double(ctx.config["tau_step"])) {
        taus.push_back(t);
    }
    std::map<double, std::vector<double>> curves;
    for (const auto& xj : ctx.config["xi_values"]) {
        const double xi = xj;
        auto ladder = xi_family(xi);
        curves[xi] = mean_fidelity_series(grl.code, channels, ladder, lambda, taus);
        std::ostringstream fname;
        fname << ctx.out_dir << "/xi_" << xi << ".csv";
        CsvWriter csv(fname.str(), {"tau", "fidelity"}, ctx.hash);
        for (size_t i = 0; i < taus.size(); ++i) csv.row({taus[i], curves[xi][i]});
    }
    json summary{{"experiment", "xi-scan"}, {"checks", json::array()}};
    double max_dev = 0.0;
    if (curves.count(1.0)) {
        for (const auto& [xi, curve] : curves) {
            double dev = 0.0;
            for (size_t i = 0; i < curve.size(); ++i) {
                dev = std::max(dev, std::abs(curve[i] - curves[1.0][i]));
            }
            summary["max_deviation_vs_xi1"][std::to_string(xi)] = dev;
            max_dev = std::max(max_dev, dev);
        }
    }
    bool ok = true;
    if (ctx.check) {
        const bool pass = max_dev < 0.01;
        summary["checks"].push_back(
            {{"label", "max deviation vs xi=1 < 1%"}, {"value", max_dev}, {"pass", pass}});
        ok &= pass;
    }
    write_summary(ctx, summary);
    return ok ? 0 : 4;
}

// ----------------------------------------------------------------------- kl

int cmd_kl(Context& ctx) {
    const json defaults = {{"code", "grl"}};
    const std::vector<FieldSpec> fields = {{"code", FieldSpec::Type::String}};
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "kl");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "kl");

    auto nc = named_code(ctx.config["code"]);
    auto report = kl_check(nc.code, {ErrorOp::I, ErrorOp::A, ErrorOp::A2});
    auto analysis = hamiltonian_distances(nc.code, nc.ladder);
    json jrep{{"experiment", "kl"},
              {"code", ctx.config["code"]},
              {"exact", report.exact()},
              {"flip_violations", json::array()},
              {"dephasing_violations", json::array()},
              {"mean_photon", analysis.mean_photon},
              {"jump_distance", analysis.jump_distance},
              {"gate_distance", analysis.gate_distance},
              {"error_spaces", analysis.mod3_syndrome_spaces},
              {"checks", json::array()}};
    for (const auto& v : report.flip_violations) {
        jrep["flip_violations"].push_back({{"pair", error_op_label(v.left) + "," +
                                                        error_op_label(v.right)},
                                           {"magnitude", std::abs(v.value)}});
    }
    for (const auto& v : report.dephasing_violations) {
        jrep["dephasing_violations"].push_back({{"pair", error_op_label(v.left) + "," +
                                                             error_op_label(v.right)},
                                                {"difference", v.value.real()}});
    }
    bool ok = true;
    if (ctx.check && ctx.config["code"] == "grl") {
        const bool pass = report.flip_violations.empty();
        jrep["checks"].push_back({{"label", "grl has no flip violations"}, {"pass", pass}});
        ok &= pass;
    }
    write_summary(ctx, jrep);
    return ok ? 0 : 4;
}

// ---------------------------------------------------------------------- rwa

int cmd_rwa(Context& ctx) {
    const json defaults = {{"gamma_a_hz", 200.0},   {"gamma_a2_hz", 2.0},
                           {"gamma_b_hz", 2000.0},  {"gamma_c_hz", 0.24e6},
                           {"g0_hz", 0.12e6},       {"g1_hz", 0.16e6},
                           {"t_max_ms", 3.0},       {"t_points", 13}};
    const std::vector<FieldSpec> fields = {
        {"gamma_a_hz", FieldSpec::Type::Number}, {"gamma_a2_hz", FieldSpec::Type::Number},
        {"gamma_b_hz", FieldSpec::Type::Number}, {"gamma_c_hz", FieldSpec::Type::Number},
        {"g0_hz", FieldSpec::Type::Number},      {"g1_hz", FieldSpec::Type::Number},
        {"t_max_ms", FieldSpec::Type::Number},   {"t_points", FieldSpec::Type::Integer}};
    ctx.config = merged_config(ctx.config.value("path", ""), defaults, fields, "rwa");
    ctx.hash = config_hash(ctx.config);
    ensure_out(ctx, "rwa");

    const double ga = ctx.config["gamma_a_hz"];
    RwaParams params;
    params.gamma_b_ratio = double(ctx.config["gamma_b_hz"]) / ga;
    params.gamma_c_ratio = double(ctx.config["gamma_c_hz"]) / ga;
    params.g0_ratio = double(ctx.config["g0_hz"]) / ga;
    params.g1_ratio = double(ctx.config["g1_hz"]) / ga;
    params.eta2 = double(ctx.config["gamma_a2_hz"]) / ga;

    const double t_max_ms = ctx.config["t_max_ms"];
    const int points = ctx.config["t_points"];
    std::vector<double> taus;
    for (int k = 0; k < points; ++k) {
        taus.push_back(ga * (t_max_ms * 1e-3) * k / (points - 1));
    }
    auto grl = named_code("grl");
    // Unit-weight ladder: the drive engineering fixes one unit per projector.
    RealVector d = RealVector::Zero(7);
    d(2) = d(3) = d(5) = d(6) = 1.0;
    auto res = simulate_rwa_three_mode(grl.code, ProjectorLadder(d, 8), params, taus);
    if (res.regime_warning) {
        std::cerr << "warning: gamma_c >> g1 >= |g0| >> gamma_a, gamma_b does not hold at "
                     "these parameters\n";
    }
    CsvWriter csv(ctx.out_dir + "/rwa_gain.csv", {"t_ms", "tau", "fidelity", "breakeven", "gain"},
                  ctx.hash);
    for (size_t i = 0; i < taus.size(); ++i) {
        csv.row({taus[i] / ga * 1e3, taus[i], res.mean_fidelity[i], res.breakeven[i],
                 res.gain[i] ? *res.gain[i] : std::nan("")});
    }
    json summary{{"experiment", "rwa"},
                 {"regime_warning", res.regime_warning},
                 {"final_gain", res.gain.back() ? json(*res.gain.back()) : json()},
                 {"final_fidelity", res.mean_fidelity.back()},
                 {"checks", json::array()}};
    bool ok = true;
    if (ctx.check) {
        const double gval = res.gain.back() ? *res.gain.back() : -1.0;
        ok &= check_near(summary, "G(3 ms)", gval, 2.64, 0.15);
    }
    write_summary(ctx, summary);
    return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aqecsim: bosonic AQEC simulation and discovery toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, solver = "analytic", noise_kind = "phase";
    std::uint64_t seed = 1;
    bool check = false;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--solver", solver, "solver choice")
        ->check(CLI::IsMember({"analytic", "dense"}));
    app.add_flag("--check", check, "compare against embedded expected values");

    auto* c_eval = app.add_subcommand("evaluate", "code-comparison fidelity curves");
    auto* c_bloch = app.add_subcommand("scan-bloch", "Bloch-sphere fidelity scan");
    auto* c_bench = app.add_subcommand("benchmark", "solver wall-clock comparison");
    auto* c_noise = app.add_subcommand("noise", "phase/amplitude damping sweeps");
    c_noise->add_option("--kind", noise_kind, "noise kind")
        ->check(CLI::IsMember({"phase", "amplitude"}));
    auto* c_wigner = app.add_subcommand("wigner", "cardinal-state Wigner grids");
    auto* c_train = app.add_subcommand("train", "two-phase curriculum training");
    auto* c_xi = app.add_subcommand("xi-scan", "ladder-coefficient robustness");
    auto* c_kl = app.add_subcommand("kl", "Knill-Laflamme report");
    auto* c_rwa = app.add_subcommand("rwa", "three-mode lab-configuration gain");

    CLI11_PARSE(app, argc, argv);

    Context ctx;
    ctx.out_dir = out_dir;
    ctx.seed = seed;
    ctx.solver = solver;
    ctx.check = check;
    ctx.config = json{{"path", config_path}};

    try {
        if (c_eval->parsed()) return cmd_evaluate(ctx);
        if (c_bloch->parsed()) return cmd_scan_bloch(ctx);
        if (c_bench->parsed()) return cmd_benchmark(ctx);
        if (c_noise->parsed()) return cmd_noise(ctx, noise_kind);
        if (c_wigner->parsed()) return cmd_wigner(ctx);
        if (c_train->parsed()) return cmd_train(ctx);
        if (c_xi->parsed()) return cmd_xi_scan(ctx);
        if (c_kl->parsed()) return cmd_kl(ctx);
        if (c_rwa->parsed()) return cmd_rwa(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
