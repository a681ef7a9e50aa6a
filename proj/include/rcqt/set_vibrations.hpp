// set_vibrations.hpp — single-electron transistor coupled to a vibrational RC:
// polaron-diagonalized supersystem, Pauli rate equation with Franck–Condon
// weights, I–V staircases and thermoelectric performance.

#pragma once

#include <string>
#include <vector>

#include "rcqt/generators.hpp"
#include "rcqt/io.hpp"
#include "rcqt/thermo.hpp"

namespace rcqt {

struct SetLead {
    double Gamma{0.0};
    double delta{1.0};
    double center{0.0};
    double beta{1.0};
    double mu{0.0};
};

struct SetConfig {
    double Omega1{1.0};
    double eps_tilde{0.0}; // dot energy including the bath renormalization
    double lambda0{0.0};   // dot–RC coupling (units Ω1^{3/2})
    int n_cutoff{10};
    SetLead left;
    SetLead right;
    double J_ph{0.0};
    double omegaR{10.0};
    double beta_ph{1.0};
    // diagnostic mode: identity Franck–Condon table (no phonon sidebands on
    // electronic jumps)
    bool naive_bms{false};

    double lambda() const { return lambda0 / std::sqrt(2.0 * Omega1); }
    double alpha() const { return lambda() / Omega1; }
    double eps_bar() const { return eps_tilde - lambda() * lambda() / Omega1; }

    // Fig.-8-style staircase setup (λ0 = √5 Ω1^{3/2}, broad symmetric leads);
    // the electronic/phonon temperatures are resolution choices, see README.
    static SetConfig staircase_defaults();
    // Fig.-9-style thermoelectric setup (λ0 = Ω1^{3/2}, offset narrow leads)
    static SetConfig thermoelectric_defaults();
};

// |⟨m'|D(α)|m⟩|² for the displacement D(α) = exp(α(a†−a)), Nc×Nc, from the
// associated-Laguerre closed form (exact per element, no truncation error)
RealMatrix franck_condon(double alpha, int n_cutoff);

// Supersystem Hamiltonian ε̃ d†d − λ0 d†d X1 + Ω1(a†a+1/2) in the bare
// (undisplaced) frame; used to cross-check the polaron spectrum
OperatorMatrix set_hamiltonian_bare_frame(const SetConfig& cfg, int n_cutoff);

// Secular generator over |n,m⟩ (n ∈ {0,1} slow index): W = W^L + W^R + W^ph.
// The bundle's basis is the polaron product order, not energy-sorted.
GeneratorBundle build_set_generator(const SetConfig& cfg);

SteadyStateReport set_point(const SetConfig& cfg, double bias);

struct SetSweepOptions {
    int jobs{1};
};

// Columns: V/Ω1, I_M/Γ, I_E/(ΓΩ1), P/(ΓΩ1), eta, eta_over_carnot, Si/Γ
// with Γ the left-lead coupling and symmetric bias split μL = −μR = V/2.
SweepTable iv_sweep(const SetConfig& cfg, const std::vector<double>& bias_grid,
                    const SetSweepOptions& opts = {});

// Nc → Nc+4 stability of the currents at one bias point
double set_convergence_gate(const SetConfig& cfg, double bias, double rel_tol = 0.005,
                            bool enforce = true);

} // namespace rcqt
