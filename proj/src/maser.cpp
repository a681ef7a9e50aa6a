// maser.cpp

#include "rcqt/maser.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace rcqt {

MaserConfig MaserConfig::defaults() {
    MaserConfig c;
    c.epsilon = 1.0;
    c.omega0 = 0.17;
    c.d0 = 0.0104 * c.omega0 * c.omega0;
    c.gamma = 0.0176 * c.omega0;
    c.omegaR = 588.0 * c.omega0;
    c.Delta10 = 2.53 * c.omega0;
    c.Delta21 = 1.0 * c.omega0;
    c.beta_w = 0.0017 / c.omega0;
    c.beta_h = 0.17 / c.omega0;
    c.beta_c = 17.0 / c.omega0;
    c.Gamma_h = 0.001;
    c.Gamma_w = 20.0 * c.Gamma_h;
    c.n_cutoff = 12;
    return c;
}

CouplingOps maser_coupling_ops(double epsilon) {
    const double f = 1.0 / std::sqrt(2.0 * epsilon);
    CouplingOps ops;
    ops.s_h = Matrix::Zero(3, 3);
    ops.s_c = Matrix::Zero(3, 3);
    ops.s_w = Matrix::Zero(3, 3);
    ops.s_h(0, 2) = ops.s_h(2, 0) = f;
    ops.s_c(1, 2) = ops.s_c(2, 1) = f;
    ops.s_w(0, 1) = ops.s_w(1, 0) = f;
    return ops;
}

SpectralDensity maser_hot_sd(const MaserConfig& cfg) {
    return SpectralDensity(OhmicHardCutoff{cfg.Gamma_h / cfg.Delta20(), cfg.omegaR});
}

SpectralDensity maser_work_sd(const MaserConfig& cfg) {
    return SpectralDensity(FlatWork{cfg.Gamma_w, cfg.beta_w, cfg.Delta10});
}

SpectralDensity maser_cold_sd(const MaserConfig& cfg) {
    return SpectralDensity(
        LorentzianHardCutoff{cfg.d0, cfg.gamma, cfg.omega0, cfg.omegaR});
}

SpectralDensity maser_cold_residual_sd(const MaserConfig& cfg) {
    const bool analytic_ok = (cfg.omegaR / cfg.omega0 > 50.0) &&
                             (4.0 * cfg.omega0 * cfg.omega0 > cfg.gamma * cfg.gamma);
    if (analytic_ok)
        return SpectralDensity(OhmicHardCutoff{cfg.gamma, cfg.omegaR});
    MapOptions mo;
    mo.n_points = cfg.map_points;
    return map_sd(maser_cold_sd(cfg), mo);
}

GeneratorBundle build_bare_model(const MaserConfig& cfg) {
    OperatorMatrix H;
    H.space = HilbertSpace::discrete(3);
    H.mat = Matrix::Zero(3, 3);
    H.mat(1, 1) = cfg.Delta10;
    H.mat(2, 2) = cfg.Delta20();
    H.hermitian_hint = true;

    const auto ops = maser_coupling_ops(cfg.epsilon);
    std::vector<ReservoirSpec> rs(3);
    rs[0] = ReservoirSpec{"h", Statistics::Bose, cfg.beta_h, 0.0, maser_hot_sd(cfg),
                          LeadDensity{}, ops.s_h};
    rs[1] = ReservoirSpec{"c", Statistics::Bose, cfg.beta_c, 0.0, maser_cold_sd(cfg),
                          LeadDensity{}, ops.s_c};
    rs[2] = ReservoirSpec{"w", Statistics::Bose, cfg.beta_w, 0.0, maser_work_sd(cfg),
                          LeadDensity{}, ops.s_w};
    return build_secular(H, rs);
}

RCModelParts build_rc_parts(const MaserConfig& cfg,
                            const SpectralDensity* cold_residual_override) {
    RCModelParts parts;
    parts.rc = moments_basic(maser_cold_sd(cfg));
    const double lambda0 = parts.rc.lambda0();
    const double dO0_sq = parts.rc.dOmega0_sq;
    const double omega_rc = parts.rc.physical_rc_freq;
    parts.rc_freq = omega_rc;

    const int nc = cfg.n_cutoff;
    const HilbertSpace space =
        HilbertSpace::tensor(HilbertSpace::discrete(3), HilbertSpace::oscillator(nc));
    const auto osc = oscillator_ops(nc, omega_rc);
    const Matrix id3 = Matrix::Identity(3, 3);
    const Matrix id_osc = Matrix::Identity(nc, nc);

    const double shift = dO0_sq / (4.0 * cfg.epsilon);
    Matrix h3 = Matrix::Zero(3, 3);
    h3(1, 1) = cfg.Delta10 + shift;
    h3(2, 2) = cfg.Delta20() + shift;
    Matrix s12 = Matrix::Zero(3, 3);
    s12(1, 2) = s12(2, 1) = 1.0;

    Matrix h_osc = omega_rc * (osc.number + 0.5 * id_osc);
    OperatorMatrix H;
    H.space = space;
    H.mat = kron(h3, id_osc) + kron(id3, h_osc) -
            (lambda0 / std::sqrt(2.0 * cfg.epsilon)) * kron(s12, osc.X);
    H.hermitian_hint = true;
    parts.H = std::move(H);

    const auto ops = maser_coupling_ops(cfg.epsilon);
    const SpectralDensity cold_res = cold_residual_override != nullptr
                                         ? *cold_residual_override
                                         : maser_cold_residual_sd(cfg);
    parts.reservoirs.resize(3);
    parts.reservoirs[0] = ReservoirSpec{"h", Statistics::Bose, cfg.beta_h, 0.0,
                                        maser_hot_sd(cfg), LeadDensity{},
                                        kron(ops.s_h, id_osc)};
    parts.reservoirs[1] = ReservoirSpec{"c", Statistics::Bose, cfg.beta_c, 0.0,
                                        cold_res, LeadDensity{}, kron(id3, osc.X)};
    parts.reservoirs[2] = ReservoirSpec{"w", Statistics::Bose, cfg.beta_w, 0.0,
                                        maser_work_sd(cfg), LeadDensity{},
                                        kron(ops.s_w, id_osc)};
    return parts;
}

GeneratorBundle build_rc_model(const MaserConfig& cfg, GeneratorMode mode,
                               const SpectralDensity* cold_residual_override) {
    const RCModelParts parts = build_rc_parts(cfg, cold_residual_override);
    if (mode == GeneratorMode::Secular)
        return build_secular(parts.H, parts.reservoirs);
    return build_nonsecular(parts.H, parts.reservoirs);
}

namespace {

EngineSpec maser_engine_spec() {
    EngineSpec spec;
    spec.kind = EngineKind::MaserEngine;
    spec.hot_label = "h";
    spec.cold_label = "c";
    spec.work_label = "w";
    return spec;
}

SteadyStateReport solve_and_analyze(const GeneratorBundle& bundle) {
    const auto sol = steady_state(bundle);
    return analyze(bundle, sol, maser_engine_spec());
}

} // namespace

SteadyStateReport maser_point(const MaserConfig& cfg, MaserMode mode) {
    switch (mode) {
        case MaserMode::Bare:
            return solve_and_analyze(build_bare_model(cfg));
        case MaserMode::RCSecular:
            return solve_and_analyze(build_rc_model(cfg, GeneratorMode::Secular));
        case MaserMode::RCNonSecular:
        default:
            return solve_and_analyze(build_rc_model(cfg, GeneratorMode::NonSecular));
    }
}

double maser_convergence_gate(const MaserConfig& cfg, MaserMode mode, double rel_tol,
                              bool enforce) {
    if (mode == MaserMode::Bare) return 0.0;
    MaserConfig bigger = cfg;
    bigger.n_cutoff = cfg.n_cutoff + 4;
    const auto a = maser_point(cfg, mode);
    const auto b = maser_point(bigger, mode);
    double worst = 0.0;
    for (const auto& ra : a.reservoirs) {
        const auto* rb = b.find(ra.label);
        const double scale = std::max({std::abs(ra.heat), std::abs(rb->heat), 1e-300});
        worst = std::max(worst, std::abs(ra.heat - rb->heat) / scale);
    }
    if (enforce && worst > rel_tol)
        throw TruncationTooSmall("maser: currents changed by " + format_double(worst) +
                                 " under Nc -> Nc+4");
    return worst;
}

std::string maser_mode_name(MaserMode mode) {
    switch (mode) {
        case MaserMode::Bare: return "bare";
        case MaserMode::RCSecular: return "rc_secular";
        case MaserMode::RCNonSecular:
        default: return "rc_nonsecular";
    }
}

namespace {

const char* axis_column(MaserAxis axis) {
    switch (axis) {
        case MaserAxis::Delta21: return "Delta21_over_omega0";
        case MaserAxis::Gamma: return "gamma_over_omega0";
        case MaserAxis::D0:
        default: return "d0_over_omega0_sq";
    }
}

MaserConfig apply_axis(MaserConfig cfg, MaserAxis axis, double value) {
    switch (axis) {
        case MaserAxis::Delta21: cfg.Delta21 = value; break;
        case MaserAxis::Gamma: cfg.gamma = value; break;
        case MaserAxis::D0: cfg.d0 = value; break;
    }
    return cfg;
}

double axis_normalization(const MaserConfig& cfg, MaserAxis axis) {
    return axis == MaserAxis::D0 ? cfg.omega0 * cfg.omega0 : cfg.omega0;
}

} // namespace

SweepTable maser_sweep(const MaserConfig& cfg, MaserAxis axis,
                       const std::vector<double>& grid, const MaserSweepOptions& opts) {
    SweepTable table;
    table.columns.push_back(axis_column(axis));
    for (const auto mode : opts.modes) {
        const std::string m = maser_mode_name(mode);
        table.columns.push_back("eta_" + m);
        table.columns.push_back("W_" + m);       // Ẇ/(Γh ω0)
        table.columns.push_back("Qc_" + m);      // Q̇c/(Γh ω0)
        table.columns.push_back("Qh_" + m);      // Q̇h/(Γh ω0)
        table.columns.push_back("Si_" + m);      // Ṡi/Γh
        table.columns.push_back("firstlaw_" + m);
    }

    // The residual cold density does not depend on Δ21 or d0 (the mapping is
    // invariant under scaling of the input coupling), so compute it once
    // unless γ itself is the sweep axis.
    std::optional<SpectralDensity> shared_residual;
    const bool needs_rc = [&] {
        for (auto m : opts.modes)
            if (m != MaserMode::Bare) return true;
        return false;
    }();
    if (needs_rc && axis != MaserAxis::Gamma)
        shared_residual = maser_cold_residual_sd(cfg);

    struct RowData {
        std::vector<std::optional<double>> values;
        std::string status{"ok"};
    };
    std::vector<RowData> rows(grid.size());

    auto run_point = [&](std::size_t i) {
        RowData& row = rows[i];
        const MaserConfig point_cfg = apply_axis(cfg, axis, grid[i]);
        row.values.push_back(grid[i] / axis_normalization(cfg, axis));
        const double wnorm = cfg.Gamma_h * cfg.omega0;
        for (const auto mode : opts.modes) {
            try {
                SteadyStateReport rep;
                if (mode == MaserMode::Bare) {
                    rep = solve_and_analyze(build_bare_model(point_cfg));
                } else {
                    const SpectralDensity* res =
                        shared_residual ? &*shared_residual : nullptr;
                    const auto gmode = (mode == MaserMode::RCSecular)
                                           ? GeneratorMode::Secular
                                           : GeneratorMode::NonSecular;
                    rep = solve_and_analyze(build_rc_model(point_cfg, gmode, res));
                }
                row.values.push_back(rep.efficiency);
                row.values.push_back(rep.work_rate / wnorm);
                row.values.push_back(rep.find("c")->heat / wnorm);
                row.values.push_back(rep.find("h")->heat / wnorm);
                row.values.push_back(rep.entropy_production / cfg.Gamma_h);
                row.values.push_back(rep.first_law_residual);
            } catch (const Error& e) {
                for (int c = 0; c < 6; ++c) row.values.push_back(std::nullopt);
                row.status = maser_mode_name(mode) + ": " + e.what();
            }
        }
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || grid.size() <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
                run_point(i);
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<std::size_t>(jobs, grid.size());
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (auto& r : rows) table.add_row(std::move(r.values), std::move(r.status));
    return table;
}

} // namespace rcqt
