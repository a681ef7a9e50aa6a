// maser.hpp — three-level maser heat engine: the bare Born–Markov-secular
// three-level model and the RC-extended supersystem (3LS ⊗ oscillator), with
// sweeps over the level splitting, the cold-bath width and the coupling.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcqt/generators.hpp"
#include "rcqt/io.hpp"
#include "rcqt/spectral.hpp"
#include "rcqt/thermo.hpp"

namespace rcqt {

enum class MaserMode { Bare, RCSecular, RCNonSecular };

struct MaserConfig {
    double epsilon{1.0}; // coupling-operator normalization scale ε
    double omega0{0.17};
    double d0{0.0};      // cold SD amplitude (defaults set from ω0²)
    double gamma{0.0};   // cold SD width
    double omegaR{0.0};  // shared hard cutoff
    double Delta10{0.0};
    double Delta21{0.0};
    double beta_h{0.0};
    double beta_c{0.0};
    double beta_w{0.0};
    double Gamma_h{0.001};
    double Gamma_w{0.02};
    int n_cutoff{12};
    // mapped-table resolution when the analytic residual form does not apply
    int map_points{1600};

    double Delta20() const { return Delta10 + Delta21; }

    // Fig. 5 caption parameters; Delta21 left at ω0
    static MaserConfig defaults();
};

struct CouplingOps {
    Matrix s_h; // (|0><2| + |2><0|)/sqrt(2ε)
    Matrix s_c; // (|1><2| + |2><1|)/sqrt(2ε)
    Matrix s_w; // (|0><1| + |1><0|)/sqrt(2ε)
};
CouplingOps maser_coupling_ops(double epsilon);

// Bath densities: hot Γh ω/Δ20 Θ(ωR−ω), work flat βw Δ10 Γw, cold Eq.-(32)
// Lorentzian
SpectralDensity maser_hot_sd(const MaserConfig& cfg);
SpectralDensity maser_work_sd(const MaserConfig& cfg);
SpectralDensity maser_cold_sd(const MaserConfig& cfg);

// Residual cold density after one RC step: the analytic γω Θ(ωR−ω) form when
// ωR/ω0 > 50 and 4ω0² > γ², otherwise the numerically mapped table.
SpectralDensity maser_cold_residual_sd(const MaserConfig& cfg);

// Bare three-level model with its explicit hot/cold/work dissipators
GeneratorBundle build_bare_model(const MaserConfig& cfg);

// RC supersystem pieces (shared by both RC builders)
struct RCModelParts {
    OperatorMatrix H;
    std::vector<ReservoirSpec> reservoirs;
    RCParameters rc;
    double rc_freq{0.0};
};
RCModelParts build_rc_parts(const MaserConfig& cfg,
                            const SpectralDensity* cold_residual_override = nullptr);

GeneratorBundle build_rc_model(const MaserConfig& cfg, GeneratorMode mode,
                               const SpectralDensity* cold_residual_override = nullptr);

// Solve one parameter point in the given mode and report the thermodynamics
SteadyStateReport maser_point(const MaserConfig& cfg, MaserMode mode);

// Nc → Nc+4 stability of all reported currents (returns the worst relative
// change); throws TruncationTooSmall above rel_tol when `enforce` is set.
double maser_convergence_gate(const MaserConfig& cfg, MaserMode mode,
                              double rel_tol = 0.005, bool enforce = true);

enum class MaserAxis { Delta21, Gamma, D0 };

struct MaserSweepOptions {
    std::vector<MaserMode> modes{MaserMode::Bare, MaserMode::RCSecular,
                                 MaserMode::RCNonSecular};
    int jobs{1};
};

// One row per grid value; dimensionless columns per mode (work and heat flows
// normalized by Γh ω0, entropy production by Γh).
SweepTable maser_sweep(const MaserConfig& cfg, MaserAxis axis,
                       const std::vector<double>& grid,
                       const MaserSweepOptions& opts = {});

std::string maser_mode_name(MaserMode mode);

} // namespace rcqt
