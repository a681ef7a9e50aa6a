// thermo.hpp — steady-state thermodynamic bookkeeping: per-reservoir heat,
// energy and matter currents, power, entropy production, Spohn values,
// efficiencies and law-closure diagnostics.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcqt/generators.hpp"

namespace rcqt {

enum class EngineKind { MaserEngine, Thermoelectric };

struct ReservoirCurrents {
    std::string label;
    double beta{0.0};
    double mu{0.0};
    double energy{0.0}; // I_E = tr{H' L^ν ρ}
    double matter{0.0}; // I_M = tr{N' L^ν ρ}
    double heat{0.0};   // Q̇ = I_E − μ I_M, positive into the supersystem
    double spohn{0.0};  // −tr{(L^ν ρ)(ln ρ − ln ρ_eq^ν)}
};

struct SteadyStateReport {
    std::vector<ReservoirCurrents> reservoirs;
    double work_rate{0.0};           // Ẇ done on the supersystem (< 0: extraction)
    double entropy_production{0.0};  // Ṡᵢ = −Σν βν Q̇ν
    std::optional<double> efficiency; // absent outside the engine window
    double efficiency_carnot{0.0};
    double second_law_bound{0.0};    // engine-specific upper bound on η
    double first_law_residual{0.0};  // |Ẇchem + ΣQ̇| / max|Q̇| (relative)
    double solver_residual{0.0};
    double min_state_eigenvalue{0.0};

    const ReservoirCurrents* find(const std::string& label) const;
};

// Which generator blocks play which role when forming the efficiency
struct EngineSpec {
    EngineKind kind{EngineKind::MaserEngine};
    std::string hot_label{"h"};
    std::string cold_label{"c"};
    std::string work_label{"w"};
    std::string left_label{"L"};
    std::string right_label{"R"};
    std::string phonon_label{"ph"};
};

// Per-block energy/matter/heat currents at the given state
ReservoirCurrents block_currents(const GeneratorBundle& bundle, std::size_t b,
                                 const Matrix& rho_eig);

// Ṡᵢ = −Σν βν Q̇ν
double entropy_production(const std::vector<ReservoirCurrents>& currents);

// Spohn value −tr{(L^ν ρ)(ln ρ − ln ρ_eq^ν)} with ρ_eq^ν the (grand-)canonical
// Gibbs state of the supersystem at the block's (β, μ)
double spohn_check(const GeneratorBundle& bundle, std::size_t b, const Matrix& rho_eig);

// Full report for a solved steady state
SteadyStateReport analyze(const GeneratorBundle& bundle, const SteadyStateSolution& sol,
                          const EngineSpec& spec);

std::string report_to_json(const SteadyStateReport& report);

} // namespace rcqt
