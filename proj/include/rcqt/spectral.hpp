// spectral.hpp — bath spectral densities, their moments, the Cauchy-transform
// boundary value W0⁺(ω), and the mapped residual spectral density
// J1(ω) = λ0² J0(ω) / |W0⁺(ω)|² produced by one reaction-coordinate step.
//
// All evaluators apply the antisymmetric extension J(−ω) = −J(ω).

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rcqt/errors.hpp"

namespace rcqt {

// ------------------------------- SD families --------------------------------

// d0² γ ω / [(ω² − ω0²)² + γ² ω²] · Θ(ωR − ω)
struct LorentzianHardCutoff {
    double d0{0.0};
    double gamma{0.0};
    double omega0{0.0};
    double omegaR{0.0};
};

// slope · ω · Θ(ωR − ω)
struct OhmicHardCutoff {
    double slope{0.0};
    double omegaR{0.0};
};

// J_ph · ω · exp(−|ω|/ωR)
struct OhmicExpCutoff {
    double J_ph{0.0};
    double omegaR{0.0};
};

// Constant βw Δ10 Γw for ω > 0: the flat work-reservoir density whose
// βw→0 limit keeps the work rates finite.
struct FlatWork {
    double Gamma_w{0.0};
    double beta_w{0.0};
    double Delta10{0.0};
    double level() const { return Gamma_w * beta_w * Delta10; }
};

// Piecewise-linear table on an ascending positive grid; zero above the last
// point, linear through the origin below the first.
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> J;
};

using SpectralFamily =
    std::variant<LorentzianHardCutoff, OhmicHardCutoff, OhmicExpCutoff, FlatWork, Tabulated>;

class SpectralDensity {
public:
    SpectralDensity() = default;
    explicit SpectralDensity(SpectralFamily fam) : family_(std::move(fam)) {}

    // J(ω) with antisymmetric extension
    double value(double omega) const;
    // raw J(ω) for ω >= 0
    double positive_value(double omega) const;

    // Upper edge of the support (+inf for families without a hard cutoff)
    double support_max() const;
    // Finite integration bound covering the support to machine accuracy
    double integration_upper() const;
    // dJ/dω at ω → 0⁺ (+inf for the flat work density)
    double slope_at_zero() const;
    // (center, width) of a narrow feature, when the family has one
    std::optional<std::pair<double, double>> peak() const;
    // true when moments/cauchy/map operations are meaningful for this family
    bool mappable() const;

    const SpectralFamily& family() const { return family_; }
    std::string family_name() const;

private:
    SpectralFamily family_;
};

// --------------------------------- Results ----------------------------------

struct RCParameters {
    double dOmega0_sq{0.0};       // (2/π)∫ J/ω
    double lambda0_sq{0.0};       // (2/π)∫ ωJ
    double Omega1_sq{0.0};        // (2/πλ0²)∫ ω³J
    double dOmega1_sq{0.0};       // (2/π)∫ J1/ω from the mapped table
    double physical_rc_freq{0.0}; // sqrt(λ0²/δΩ0²)

    double lambda0() const;
    double dOmega0() const;
    // relative residual of λ0²/δΩ0² = Ω1² − δΩ1²
    double consistency_residual() const;
};

struct CauchyBoundaryValue {
    double omega{0.0};
    double re{0.0}; // principal-value part
    double im{0.0}; // equals J(ω)
    double abs_sq() const { return re * re + im * im; }
};

// --------------------------------- Options ----------------------------------

struct QuadratureOptions {
    double rel_tol{1e-9};
    int max_depth{17};
};

struct MapOptions {
    int n_points{4000};
    QuadratureOptions quad{};
    // lowest tabulated frequency as a fraction of the support scale (0 = auto)
    double grid_lo{0.0};
};

// -------------------------------- Operations --------------------------------

// Direct moments δΩ0², λ0², Ω1² of the SD (no mapping step).
// Throws NonPositiveMoment / QuadratureFail.
RCParameters moments_basic(const SpectralDensity& sd,
                           const QuadratureOptions& opts = {});

// Full RC parameter set: direct moments plus δΩ1² from the mapped table.
RCParameters moments(const SpectralDensity& sd, const MapOptions& opts = {});

// Boundary value W0⁺(ω) = Re + i J(ω) for ω inside the support; the real part
// is the principal value (2/π) P∫ ω′J(ω′)/(ω′²−ω²) dω′ evaluated by symmetric
// excision around the pole with Richardson extrapolation of the radius to 0.
CauchyBoundaryValue cauchy_boundary(const SpectralDensity& sd, double omega,
                                    const QuadratureOptions& opts = {});

// One reaction-coordinate mapping step: tabulate J1 = λ0² J0 / |W0⁺|² on a
// log-linear hybrid grid over the support of J0.
SpectralDensity map_sd(const SpectralDensity& sd, const MapOptions& opts = {});

// δΩ1² = (2/π)∫ J1/ω for a tabulated mapped density (trapezoid on the grid)
double tabulated_dOmega_sq(const SpectralDensity& tabulated);

// ------------------------- Lorentzian reference forms ------------------------
// Contour-integral closed forms for the Lorentzian family without the hard
// cutoff; accurate to O(1/ωR) and used as cross-checks only.

CauchyBoundaryValue lorentzian_cauchy_closed_form(const LorentzianHardCutoff& p,
                                                  double omega);
// γ ω Θ(ωR − ω)
double lorentzian_mapped_closed_form(const LorentzianHardCutoff& p, double omega);

// ------------------------------ CSV interchange ------------------------------

// Two-column (ω, J) CSV with a header line
SpectralDensity read_tabulated_csv(const std::string& path);
void write_tabulated_csv(const std::string& path, const SpectralDensity& sd);

} // namespace rcqt
