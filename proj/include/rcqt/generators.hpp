// generators.hpp — per-reservoir dissipative generators for the supersystem:
// secular Pauli rate matrices in the energy eigenbasis, non-secular
// Born–Markov superoperators, and the dense steady-state solver.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcqt/operators.hpp"
#include "rcqt/spectral.hpp"

namespace rcqt {

// ------------------------------- Reservoirs ---------------------------------

enum class Statistics { Bose, Fermi };

// Lorentzian tunneling density Γν(ω) = Γ δ² / ((ω − ε)² + δ²) of a fermionic
// lead (defined for all real ω; no antisymmetric extension).
struct LeadDensity {
    double Gamma{0.0};
    double delta{1.0};
    double center{0.0};
    double operator()(double w) const {
        const double d = w - center;
        return Gamma * delta * delta / (d * d + delta * delta);
    }
};

struct ReservoirSpec {
    std::string label;
    Statistics statistics{Statistics::Bose};
    double beta{1.0};
    double mu{0.0};      // Fermi only
    SpectralDensity sd;  // Bose coupling density J(ω)
    LeadDensity lead;    // Fermi tunneling density Γ(ω)
    // Bose: the Hermitian coupling operator s_ν. Fermi: the annihilation
    // operator d (d† is implied).
    Matrix coupling;
};

// -------------------------------- Rate kernels ------------------------------

// Symmetric part J(ω)·coth(βω/2) with the analytic ω→0 limit 2 J'(0)/β.
// |ω| ≤ zero_tol is treated as zero; the flat work density (no finite slope)
// is clamped at the tolerance radius.
double bose_coth_kernel(const SpectralDensity& sd, double beta, double omega,
                        double zero_tol = 0.0);

// One-sided golden-rule kernel γ(ω) = J(ω)[coth(βω/2) + 1] = 2 J(ω)[1 + n_B(ω)]
// (emission for ω > 0, absorption for ω < 0 via the antisymmetric extension).
double bose_rate_kernel(const SpectralDensity& sd, double beta, double omega,
                        double zero_tol = 0.0);

struct FermiKernels {
    double in_rate{0.0};  // electron enters: Γ(−ω) f(−ω)
    double out_rate{0.0}; // electron leaves: Γ(+ω) [1 − f(+ω)]
};
FermiKernels fermi_rate_kernels(const LeadDensity& lead, double beta, double mu,
                                double omega);

// Fermi function 1/(e^{β(ω−μ)} + 1), overflow-safe
double fermi_occupation(double beta, double mu, double omega);

// ------------------------------ Generator data ------------------------------

// Pauli rates in the eigenbasis: W(k,l) ≥ 0 for k ≠ l is the l→k transition
// rate, diagonal holds minus the column sums.
struct RateMatrix {
    RealMatrix W;
};

// Non-secular Born–Markov block −[s,[χ,ρ]] + [s,{Θ,ρ}] with operators stored
// in the eigenbasis (χ Hermitian, Θ anti-Hermitian).
struct NonSecularBlock {
    Matrix s;
    Matrix chi;
    Matrix theta;

    Matrix apply(const Matrix& rho) const;
    // dim² × dim² superoperator in the column-stacking convention
    Matrix superop() const;
};

struct GeneratorBlock {
    std::string label;
    Statistics statistics{Statistics::Bose};
    double beta{1.0};
    double mu{0.0};
    std::optional<RateMatrix> rate;
    std::optional<NonSecularBlock> nonsecular;
};

enum class GeneratorMode { Secular, NonSecular };

struct GeneratorBundle {
    GeneratorMode mode{GeneratorMode::Secular};
    HilbertSpace space;
    EigenSystem eig;           // of the supersystem Hamiltonian
    RealVector number_diag;    // ⟨k|N|k⟩ in the eigenbasis (size 0 if absent)
    std::vector<GeneratorBlock> blocks;

    int dim() const { return eig.dim(); }
    bool has_number() const { return number_diag.size() > 0; }

    // Secular: total rate matrix Σ_ν W^(ν)
    RealMatrix total_rate_matrix() const;
    // Non-secular: full Liouvillian −i[H,·] + Σ_ν blocks, dim²×dim²
    Matrix total_superop() const;
    // Action of the dissipative part of block b on ρ (eigenbasis, both modes)
    Matrix block_action(std::size_t b, const Matrix& rho_eig) const;
};

// ------------------------------- Builders -----------------------------------

struct BuilderOptions {
    double degeneracy_tol_scale{1e-9};
    // matrix elements below this (relative to the largest) are dropped
    double element_tol{1e-14};
};

// Secular Born–Markov generator: refuses flagged-degenerate spectra.
// number_op (optional) enables particle bookkeeping; it must commute with H.
GeneratorBundle build_secular(const OperatorMatrix& H,
                              const std::vector<ReservoirSpec>& reservoirs,
                              const Matrix* number_op = nullptr,
                              const BuilderOptions& opts = {});

// Non-secular Born–Markov generator (position couplings only; Lamb-shift
// principal values dropped).
GeneratorBundle build_nonsecular(const OperatorMatrix& H,
                                 const std::vector<ReservoirSpec>& reservoirs,
                                 const Matrix* number_op = nullptr,
                                 const BuilderOptions& opts = {});

// ------------------------------ Steady state --------------------------------

struct SteadyStateOptions {
    double residual_tol{1e-10};
};

struct SteadyStateSolution {
    Matrix rho_eig;          // density matrix in the eigenbasis
    RealVector populations;  // its diagonal
    double residual{0.0};    // ||L ρ|| / ||L|| (relative)
    double min_eigenvalue{0.0};
};

// Kernel of the generator via rank-revealing factorization with trace
// normalization; least-squares on the bordered system as fall-back.
SteadyStateSolution steady_state(const GeneratorBundle& bundle,
                                 const SteadyStateOptions& opts = {});

// Density matrix back in the lab basis
Matrix to_lab_basis(const GeneratorBundle& bundle, const Matrix& rho_eig);

} // namespace rcqt
