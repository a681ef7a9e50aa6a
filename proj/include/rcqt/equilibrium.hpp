// equilibrium.hpp — non-canonical reduced equilibrium states: the RC-traced
// Gibbs state of the supersystem versus the canonical state of the system
// alone and the solver steady state.

#pragma once

#include "rcqt/maser.hpp"
#include "rcqt/operators.hpp"

namespace rcqt {

struct ReducedStateComparison {
    Matrix rho_reduced;   // tr_RC{exp(−βH'_S)} normalized
    Matrix rho_canonical; // exp(−βH_S)/Z
    Matrix rho_steady;    // RC-traced solver steady state
    double dist_reduced_canonical{0.0};
    double dist_reduced_steady{0.0};
    double dist_steady_canonical{0.0};
};

// Normalized tr over factor `traced_factor` of the Gibbs state of H_super
Matrix reduced_gibbs(const OperatorMatrix& H_super, double beta,
                     int traced_factor = 1);

// Single-reservoir RC-maser check: couple only the cold residual bath, solve
// for the steady state, and compare the three reduced states at β = β_c.
ReducedStateComparison compare_equilibrium(const MaserConfig& cfg);

std::string comparison_to_json(const ReducedStateComparison& cmp);

} // namespace rcqt
