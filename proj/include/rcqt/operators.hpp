// operators.hpp — finite-dimensional operator algebra: composite Hilbert spaces,
// truncated oscillator ladder operators, Hermitian eigendecomposition and
// column-stacking (super)operator vectorization.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rcqt/errors.hpp"

namespace rcqt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// ----------------------------- Hilbert spaces -------------------------------

struct SubspaceDesc {
    enum class Kind { Discrete, Oscillator };
    Kind kind{Kind::Discrete};
    int levels{1};
};

// Ordered tensor product of factors; factor 0 is the slowest-varying index,
// i.e. the composite basis index is i = (((i0)*d1 + i1)*d2 + i2)...
struct HilbertSpace {
    std::vector<SubspaceDesc> factors;

    int dim() const {
        int d = 1;
        for (const auto& f : factors) d *= f.levels;
        return d;
    }

    static HilbertSpace discrete(int n_levels) {
        return HilbertSpace{{SubspaceDesc{SubspaceDesc::Kind::Discrete, n_levels}}};
    }
    static HilbertSpace oscillator(int n_cutoff) {
        return HilbertSpace{{SubspaceDesc{SubspaceDesc::Kind::Oscillator, n_cutoff}}};
    }
    // Tensor product: factors of `a` followed by factors of `b`
    static HilbertSpace tensor(const HilbertSpace& a, const HilbertSpace& b) {
        HilbertSpace s = a;
        s.factors.insert(s.factors.end(), b.factors.begin(), b.factors.end());
        return s;
    }

    // Decompose a composite basis index into per-factor indices
    std::vector<int> unravel(int index) const;
    // Human-readable basis label, e.g. "|1,3>"
    std::string basis_label(int index) const;
};

// A dense operator together with the space it acts on
struct OperatorMatrix {
    HilbertSpace space;
    Matrix mat;
    bool hermitian_hint{false};

    int dim() const { return static_cast<int>(mat.rows()); }
};

// ------------------------------- Constructors -------------------------------

Matrix kron(const Matrix& a, const Matrix& b);

// Embed `op` acting on factor `factor_index` of `space`, identity elsewhere
Matrix kron_embed(const Matrix& op, const HilbertSpace& space, int factor_index);

struct OscillatorOps {
    Matrix a;       // annihilation
    Matrix adag;    // creation
    Matrix number;  // a†a
    Matrix X;       // (a + a†)/sqrt(2Ω)
    Matrix P;       // i sqrt(Ω/2) (a† − a)
};

// Truncated ladder operators at cutoff Nc for an oscillator of frequency Ω.
// [a,a†] = 1 holds exactly on the lowest Nc−1 levels.
OscillatorOps oscillator_ops(int n_cutoff, double omega);

// --------------------------- Eigendecomposition -----------------------------

struct EigenSystem {
    RealVector energies;               // ascending
    Matrix vectors;                    // eigenkets as columns
    std::vector<bool> gap_degenerate;  // flag for gap (k,k+1) below tolerance
    double degeneracy_tol{0.0};

    bool any_degenerate() const {
        for (bool f : gap_degenerate)
            if (f) return true;
        return false;
    }
    int dim() const { return static_cast<int>(energies.size()); }
};

// Diagonalize a Hermitian matrix; gaps below tol_scale*max|E| are flagged as
// degenerate. Throws NotHermitian when ||H - H†||_max exceeds hermiticity_tol.
EigenSystem eig_hermitian(const Matrix& H, double tol_scale = 1e-9,
                          double hermiticity_tol = 1e-12);

// ------------------------- Vectorization (col-major) ------------------------
//
// Column-stacking convention: vec(ρ)[i + n*j] = ρ(i,j), so that
// vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).

Vector vectorize(const Matrix& rho);
Matrix devectorize(const Vector& v);

// Superoperator for ρ → A ρ B
Matrix sprepost(const Matrix& A, const Matrix& B);
// Superoperator for ρ → A ρ
Matrix spre(const Matrix& A);
// Superoperator for ρ → ρ B
Matrix spost(const Matrix& B);
// Superoperator for ρ → −i[H, ρ]
Matrix commutator_superop(const Matrix& H);

// ------------------------------ State helpers -------------------------------

// Partial trace over factor `traced_factor` of `space`
Matrix partial_trace(const Matrix& M, const HilbertSpace& space, int traced_factor);

// Normalized Gibbs state exp(−β(H − μN))/Z. When mu != 0, N must commute
// with H. Overflow-safe (spectrum is shifted before exponentiation).
Matrix gibbs_state(const Matrix& H, double beta, double mu = 0.0,
                   const Matrix* number_op = nullptr);

// ln ρ for a positive-semidefinite ρ, with eigenvalues clipped at `floor`
Matrix log_psd(const Matrix& rho, double floor = 1e-30);

// Trace distance (1/2)||A − B||_1 for Hermitian A, B
double trace_distance(const Matrix& A, const Matrix& B);

inline double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

} // namespace rcqt
