// set_vibrations.cpp

#include "rcqt/set_vibrations.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace rcqt {

SetConfig SetConfig::staircase_defaults() {
    SetConfig c;
    c.Omega1 = 1.0;
    c.eps_tilde = 0.0;
    c.lambda0 = std::sqrt(5.0);
    c.n_cutoff = 10;
    c.left = SetLead{0.01, 10.0, 0.0, 50.0, 0.0};
    c.right = SetLead{0.01, 10.0, 0.0, 50.0, 0.0};
    c.J_ph = 0.01;
    c.omegaR = 10.0;
    c.beta_ph = 1.0;
    return c;
}

SetConfig SetConfig::thermoelectric_defaults() {
    SetConfig c;
    c.Omega1 = 1.0;
    c.eps_tilde = 0.0;
    c.lambda0 = 1.0;
    c.n_cutoff = 10;
    c.left = SetLead{0.01, 1.0, +5.0, 100.0, 0.0};
    c.right = SetLead{0.01, 1.0, -5.0, 100.0, 0.0};
    c.J_ph = 0.02; // Γ = J_ph/2
    c.omegaR = 10.0;
    c.beta_ph = 0.01;
    return c;
}

RealMatrix franck_condon(double alpha, int n_cutoff) {
    if (n_cutoff < 2) throw DimensionMismatch("franck_condon: truncation must be >= 2");
    const double a2 = alpha * alpha;
    RealMatrix fc = RealMatrix::Zero(n_cutoff, n_cutoff);
    for (int q = 0; q < n_cutoff; ++q) {
        for (int p = 0; p <= q; ++p) {
            double v;
            if (a2 == 0.0) {
                v = (p == q) ? 1.0 : 0.0;
            } else {
                const int k = q - p;
                // e^{−α²} α^{2k} (p!/q!) [L_p^{(k)}(α²)]²
                const double lag = std::assoc_laguerre(p, k, a2);
                const double log_pref =
                    -a2 + k * std::log(a2) + std::lgamma(p + 1) - std::lgamma(q + 1);
                v = std::exp(log_pref) * lag * lag;
            }
            fc(q, p) = v;
            fc(p, q) = v;
        }
    }
    return fc;
}

OperatorMatrix set_hamiltonian_bare_frame(const SetConfig& cfg, int n_cutoff) {
    const HilbertSpace space =
        HilbertSpace::tensor(HilbertSpace::discrete(2), HilbertSpace::oscillator(n_cutoff));
    const auto osc = oscillator_ops(n_cutoff, cfg.Omega1);
    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix id_osc = Matrix::Identity(n_cutoff, n_cutoff);
    Matrix nd = Matrix::Zero(2, 2);
    nd(1, 1) = 1.0;

    OperatorMatrix H;
    H.space = space;
    H.mat = cfg.eps_tilde * kron(nd, id_osc) +
            kron(id2, cfg.Omega1 * (osc.number + 0.5 * id_osc)) -
            cfg.lambda0 * kron(nd, osc.X);
    H.hermitian_hint = true;
    return H;
}

GeneratorBundle build_set_generator(const SetConfig& cfg) {
    const int nc = cfg.n_cutoff;
    if (nc < 2) throw DimensionMismatch("build_set_generator: truncation must be >= 2");
    const double eb = cfg.eps_bar();
    const double W1 = cfg.Omega1;

    // ε̄ close to an integer multiple of Ω1 makes E_{0,m} and E_{1,m'} collide
    const double frac = std::abs(eb / W1 - std::round(eb / W1));
    if (frac * W1 < 1e-9 * (std::abs(eb) + W1))
        throw DegenerateSpectrum(
            "build_set_generator: eps_bar coincides with a multiple of Omega1");

    const int dim = 2 * nc;
    GeneratorBundle g;
    g.mode = GeneratorMode::Secular;
    g.space = HilbertSpace::tensor(HilbertSpace::discrete(2), HilbertSpace::oscillator(nc));

    // polaron product basis |n,m⟩: H is diagonal with E = ε̄ n + Ω1(m+1/2)
    g.eig.energies.resize(dim);
    g.eig.vectors = Matrix::Identity(dim, dim);
    g.number_diag.resize(dim);
    auto idx = [nc](int n, int m) { return n * nc + m; };
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < nc; ++m) {
            g.eig.energies(idx(n, m)) = eb * n + W1 * (m + 0.5);
            g.number_diag(idx(n, m)) = n;
        }
    {
        // degeneracy diagnostic over the sorted spectrum
        RealVector sorted = g.eig.energies;
        std::sort(sorted.data(), sorted.data() + sorted.size());
        const double scale = std::max(std::abs(sorted(0)), std::abs(sorted(dim - 1)));
        g.eig.degeneracy_tol = 1e-9 * scale;
        g.eig.gap_degenerate.assign(dim - 1, false);
        for (int k = 0; k + 1 < dim; ++k)
            g.eig.gap_degenerate[k] = sorted(k + 1) - sorted(k) < g.eig.degeneracy_tol;
        if (g.eig.any_degenerate())
            throw DegenerateSpectrum("build_set_generator: supersystem spectrum degenerate");
    }

    const RealMatrix fc =
        cfg.naive_bms ? RealMatrix(RealMatrix::Identity(nc, nc)) : franck_condon(cfg.alpha(), nc);

    const SpectralDensity j1(OhmicExpCutoff{cfg.J_ph, cfg.omegaR});

    auto electronic_block = [&](const SetLead& lead, const std::string& label) {
        RateMatrix rm;
        rm.W = RealMatrix::Zero(dim, dim);
        const LeadDensity ld{lead.Gamma, lead.delta, lead.center};
        for (int m = 0; m < nc; ++m)
            for (int mp = 0; mp < nc; ++mp) {
                // electron in: (0,m) → (1,m'), energy E_l − E_k
                const double w_in = g.eig.energies(idx(0, m)) - g.eig.energies(idx(1, mp));
                rm.W(idx(1, mp), idx(0, m)) =
                    fermi_rate_kernels(ld, lead.beta, lead.mu, w_in).in_rate * fc(mp, m);
                // electron out: (1,m) → (0,m')
                const double w_out = g.eig.energies(idx(1, m)) - g.eig.energies(idx(0, mp));
                rm.W(idx(0, mp), idx(1, m)) =
                    fermi_rate_kernels(ld, lead.beta, lead.mu, w_out).out_rate * fc(mp, m);
            }
        for (int l = 0; l < dim; ++l) {
            double col = 0.0;
            for (int k = 0; k < dim; ++k)
                if (k != l) col += rm.W(k, l);
            rm.W(l, l) = -col;
        }
        g.blocks.push_back(GeneratorBlock{label, Statistics::Fermi, lead.beta, lead.mu,
                                          std::move(rm), std::nullopt});
    };
    electronic_block(cfg.left, "L");
    electronic_block(cfg.right, "R");

    RateMatrix ph;
    ph.W = RealMatrix::Zero(dim, dim);
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < nc; ++m) {
            if (m + 1 < nc) { // m → m+1, |⟨m+1|(a+a†)|m⟩|² = m+1
                const double w = -W1;
                ph.W(idx(n, m + 1), idx(n, m)) =
                    bose_rate_kernel(j1, cfg.beta_ph, w) * (m + 1) / (2.0 * W1);
            }
            if (m > 0) { // m → m−1, |⟨m−1|(a+a†)|m⟩|² = m
                const double w = W1;
                ph.W(idx(n, m - 1), idx(n, m)) =
                    bose_rate_kernel(j1, cfg.beta_ph, w) * m / (2.0 * W1);
            }
        }
    for (int l = 0; l < dim; ++l) {
        double col = 0.0;
        for (int k = 0; k < dim; ++k)
            if (k != l) col += ph.W(k, l);
        ph.W(l, l) = -col;
    }
    g.blocks.push_back(GeneratorBlock{"ph", Statistics::Bose, cfg.beta_ph, 0.0,
                                      std::move(ph), std::nullopt});
    return g;
}

namespace {

EngineSpec set_engine_spec() {
    EngineSpec spec;
    spec.kind = EngineKind::Thermoelectric;
    spec.left_label = "L";
    spec.right_label = "R";
    spec.phonon_label = "ph";
    return spec;
}

SetConfig with_bias(SetConfig cfg, double bias) {
    cfg.left.mu = 0.5 * bias;
    cfg.right.mu = -0.5 * bias;
    return cfg;
}

} // namespace

SteadyStateReport set_point(const SetConfig& cfg, double bias) {
    const auto bundle = build_set_generator(with_bias(cfg, bias));
    const auto sol = steady_state(bundle);
    return analyze(bundle, sol, set_engine_spec());
}

SweepTable iv_sweep(const SetConfig& cfg, const std::vector<double>& bias_grid,
                    const SetSweepOptions& opts) {
    SweepTable table;
    table.columns = {"V_over_Omega1", "IM_over_Gamma", "IE_over_GammaOmega1",
                     "P_over_GammaOmega1", "eta", "eta_over_carnot", "Si_over_Gamma"};
    const double gam = cfg.left.Gamma;
    const double W1 = cfg.Omega1;

    struct RowData {
        std::vector<std::optional<double>> values;
        std::string status{"ok"};
    };
    std::vector<RowData> rows(bias_grid.size());

    auto run_point = [&](std::size_t i) {
        RowData& row = rows[i];
        const double v = bias_grid[i];
        row.values.push_back(v / W1);
        try {
            const auto rep = set_point(cfg, v);
            const auto* left = rep.find("L");
            const auto* ph = rep.find("ph");
            const double im = left->matter;
            const double p_gen = -(v)*im; // −(μL−μR) I_M
            row.values.push_back(im / gam);
            row.values.push_back(ph->energy / (gam * W1));
            row.values.push_back(p_gen / (gam * W1));
            row.values.push_back(rep.efficiency);
            if (rep.efficiency)
                row.values.push_back(*rep.efficiency / rep.efficiency_carnot);
            else
                row.values.push_back(std::nullopt);
            row.values.push_back(rep.entropy_production / gam);
        } catch (const Error& e) {
            while (row.values.size() < table.columns.size())
                row.values.push_back(std::nullopt);
            row.status = e.what();
        }
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || bias_grid.size() <= 1) {
        for (std::size_t i = 0; i < bias_grid.size(); ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < bias_grid.size();
                 i = next.fetch_add(1))
                run_point(i);
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<std::size_t>(jobs, bias_grid.size());
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (auto& r : rows) table.add_row(std::move(r.values), std::move(r.status));
    return table;
}

double set_convergence_gate(const SetConfig& cfg, double bias, double rel_tol,
                            bool enforce) {
    SetConfig bigger = cfg;
    bigger.n_cutoff = cfg.n_cutoff + 4;
    const auto a = set_point(cfg, bias);
    const auto b = set_point(bigger, bias);
    double worst = 0.0;
    for (const auto& ra : a.reservoirs) {
        const auto* rb = b.find(ra.label);
        const double scale =
            std::max({std::abs(ra.energy), std::abs(rb->energy), 1e-300});
        worst = std::max(worst, std::abs(ra.energy - rb->energy) / scale);
        const double mscale =
            std::max({std::abs(ra.matter), std::abs(rb->matter), 1e-300});
        worst = std::max(worst, std::abs(ra.matter - rb->matter) / mscale);
    }
    if (enforce && worst > rel_tol)
        throw TruncationTooSmall("set: currents changed by " + format_double(worst) +
                                 " under Nc -> Nc+4");
    return worst;
}

} // namespace rcqt
