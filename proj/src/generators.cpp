// generators.cpp

#include "rcqt/generators.hpp"

#include <cmath>

namespace rcqt {

namespace {

// coth(x), overflow-safe and accurate for small |x|
double coth(double x) {
    if (x > 355.0) return 1.0;
    if (x < -355.0) return -1.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

} // namespace

double bose_coth_kernel(const SpectralDensity& sd, double beta, double omega,
                        double zero_tol) {
    if (std::abs(omega) <= zero_tol || omega == 0.0) {
        const double slope = sd.slope_at_zero();
        if (std::isinf(slope)) {
            // flat density: J(0⁺) > 0, the coth limit diverges; clamp at the
            // tolerance radius (only reachable for vanishing matrix elements)
            const double eps = std::max(zero_tol, 1e-300);
            return sd.positive_value(eps) * coth(0.5 * beta * eps);
        }
        return 2.0 * slope / beta;
    }
    return sd.value(omega) * coth(0.5 * beta * omega);
}

double bose_rate_kernel(const SpectralDensity& sd, double beta, double omega,
                        double zero_tol) {
    return bose_coth_kernel(sd, beta, omega, zero_tol) + sd.value(omega);
}

double fermi_occupation(double beta, double mu, double omega) {
    const double a = beta * (omega - mu);
    if (a > 0) {
        const double e = std::exp(-a);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(a));
}

FermiKernels fermi_rate_kernels(const LeadDensity& lead, double beta, double mu,
                                double omega) {
    FermiKernels k;
    k.in_rate = lead(-omega) * fermi_occupation(beta, mu, -omega);
    k.out_rate = lead(omega) * (1.0 - fermi_occupation(beta, mu, omega));
    return k;
}

// ---------------------------- NonSecularBlock --------------------------------

Matrix NonSecularBlock::apply(const Matrix& rho) const {
    const Matrix m1 = chi * rho - rho * chi;   // [χ,ρ]
    const Matrix m2 = theta * rho + rho * theta; // {Θ,ρ}
    const Matrix inner = m2 - m1;
    return s * inner - inner * s; // [s, {Θ,ρ} − [χ,ρ]]
}

namespace {

// L += c · (Bᵀ ⊗ A), i.e. the superoperator of ρ → c A ρ B
void add_sprepost(Matrix& L, Complex c, const Matrix& A, const Matrix& B) {
    const Eigen::Index d = A.rows();
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) {
            const Complex w = c * B(j, i); // (Bᵀ)(i,j)
            if (w != 0.0) L.block(i * d, j * d, d, d) += w * A;
        }
}

} // namespace

Matrix NonSecularBlock::superop() const {
    const Eigen::Index d = s.rows();
    const Matrix id = Matrix::Identity(d, d);
    Matrix L = Matrix::Zero(d * d, d * d);
    // −[s,[χ,ρ]] = −sχρ + sρχ + χρs − ρχs
    add_sprepost(L, -1.0, s * chi, id);
    add_sprepost(L, 1.0, s, chi);
    add_sprepost(L, 1.0, chi, s);
    add_sprepost(L, -1.0, id, chi * s);
    // +[s,{Θ,ρ}] = sΘρ + sρΘ − Θρs − ρΘs
    add_sprepost(L, 1.0, s * theta, id);
    add_sprepost(L, 1.0, s, theta);
    add_sprepost(L, -1.0, theta, s);
    add_sprepost(L, -1.0, id, theta * s);
    return L;
}

// ----------------------------- GeneratorBundle -------------------------------

RealMatrix GeneratorBundle::total_rate_matrix() const {
    RealMatrix W = RealMatrix::Zero(dim(), dim());
    for (const auto& b : blocks) {
        if (!b.rate) throw UnsupportedCoupling("total_rate_matrix: block has no rate matrix");
        W += b.rate->W;
    }
    return W;
}

Matrix GeneratorBundle::total_superop() const {
    const Eigen::Index d = dim();
    Matrix H = eig.energies.cast<Complex>().asDiagonal();
    Matrix L = Matrix::Zero(d * d, d * d);
    add_sprepost(L, Complex(0, -1), H, Matrix::Identity(d, d));
    add_sprepost(L, Complex(0, 1), Matrix::Identity(d, d), H);
    for (const auto& b : blocks) {
        if (!b.nonsecular)
            throw UnsupportedCoupling("total_superop: block has no superoperator form");
        L += b.nonsecular->superop();
    }
    return L;
}

Matrix GeneratorBundle::block_action(std::size_t b, const Matrix& rho_eig) const {
    const auto& blk = blocks.at(b);
    if (blk.nonsecular) return blk.nonsecular->apply(rho_eig);
    if (blk.rate) {
        // rate action on the populations; coherence decay does not contribute
        // to diagonal observables
        const RealVector p = rho_eig.diagonal().real();
        const RealVector dp = blk.rate->W * p;
        Matrix out = Matrix::Zero(dim(), dim());
        out.diagonal() = dp.cast<Complex>();
        return out;
    }
    throw UnsupportedCoupling("block_action: empty generator block");
}

// -------------------------------- Builders ----------------------------------

namespace {

void check_coupling_dims(const OperatorMatrix& H, const ReservoirSpec& r) {
    if (r.coupling.rows() != H.mat.rows() || r.coupling.cols() != H.mat.cols())
        throw DimensionMismatch("builder: coupling operator dimension mismatch for '" +
                                r.label + "'");
}

RealVector number_diag_in_eigenbasis(const EigenSystem& es, const Matrix* number_op) {
    if (number_op == nullptr) return RealVector();
    const Matrix Ne = es.vectors.adjoint() * (*number_op) * es.vectors;
    if (max_abs(Ne - Matrix(Ne.diagonal().asDiagonal())) >
        1e-8 * std::max(1.0, max_abs(Ne)))
        throw DimensionMismatch("builder: number operator does not commute with H");
    return Ne.diagonal().real();
}

} // namespace

GeneratorBundle build_secular(const OperatorMatrix& H,
                              const std::vector<ReservoirSpec>& reservoirs,
                              const Matrix* number_op, const BuilderOptions& opts) {
    GeneratorBundle g;
    g.mode = GeneratorMode::Secular;
    g.space = H.space;
    g.eig = eig_hermitian(H.mat, opts.degeneracy_tol_scale);
    if (g.eig.any_degenerate())
        throw DegenerateSpectrum(
            "build_secular: spectrum has near-degenerate gaps; use the non-secular builder");
    g.number_diag = number_diag_in_eigenbasis(g.eig, number_op);

    const int d = g.dim();
    const double zero_tol = g.eig.degeneracy_tol;

    for (const auto& r : reservoirs) {
        check_coupling_dims(H, r);
        RateMatrix rm;
        rm.W = RealMatrix::Zero(d, d);
        if (r.statistics == Statistics::Bose) {
            if (max_abs(r.coupling - r.coupling.adjoint()) >
                1e-10 * std::max(1.0, max_abs(r.coupling)))
                throw NotHermitian("build_secular: Bose coupling operator must be Hermitian");
            const Matrix S = g.eig.vectors.adjoint() * r.coupling * g.eig.vectors;
            const double smax = max_abs(S);
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    if (k == l) continue;
                    const double el2 = std::norm(S(k, l));
                    if (el2 < opts.element_tol * opts.element_tol * smax * smax) continue;
                    rm.W(k, l) = bose_rate_kernel(r.sd, r.beta,
                                                  g.eig.energies(l) - g.eig.energies(k),
                                                  zero_tol) *
                                 el2;
                }
        } else {
            const Matrix D = g.eig.vectors.adjoint() * r.coupling * g.eig.vectors;
            const Matrix Dd = D.adjoint();
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    if (k == l) continue;
                    const double w = g.eig.energies(l) - g.eig.energies(k);
                    const auto kern = fermi_rate_kernels(r.lead, r.beta, r.mu, w);
                    rm.W(k, l) =
                        kern.in_rate * std::norm(Dd(k, l)) + kern.out_rate * std::norm(D(k, l));
                }
        }
        for (int l = 0; l < d; ++l) {
            double col = 0.0;
            for (int k = 0; k < d; ++k)
                if (k != l) col += rm.W(k, l);
            rm.W(l, l) = -col;
        }
        g.blocks.push_back(GeneratorBlock{r.label, r.statistics, r.beta, r.mu,
                                          std::move(rm), std::nullopt});
    }
    return g;
}

GeneratorBundle build_nonsecular(const OperatorMatrix& H,
                                 const std::vector<ReservoirSpec>& reservoirs,
                                 const Matrix* number_op, const BuilderOptions& opts) {
    GeneratorBundle g;
    g.mode = GeneratorMode::NonSecular;
    g.space = H.space;
    g.eig = eig_hermitian(H.mat, opts.degeneracy_tol_scale);
    g.number_diag = number_diag_in_eigenbasis(g.eig, number_op);

    const int d = g.dim();
    const double zero_tol = g.eig.degeneracy_tol;

    for (const auto& r : reservoirs) {
        check_coupling_dims(H, r);
        if (r.statistics != Statistics::Bose)
            throw UnsupportedCoupling(
                "build_nonsecular: only position-type Bose couplings are supported");
        if (max_abs(r.coupling - r.coupling.adjoint()) >
            1e-10 * std::max(1.0, max_abs(r.coupling)))
            throw NotHermitian("build_nonsecular: coupling operator must be Hermitian");

        NonSecularBlock blk;
        blk.s = g.eig.vectors.adjoint() * r.coupling * g.eig.vectors;
        blk.chi = Matrix::Zero(d, d);
        blk.theta = Matrix::Zero(d, d);
        const double smax = max_abs(blk.s);
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                const Complex skl = blk.s(k, l);
                if (std::abs(skl) < opts.element_tol * smax) continue;
                const double w = g.eig.energies(k) - g.eig.energies(l);
                blk.chi(k, l) = 0.5 * bose_coth_kernel(r.sd, r.beta, w, zero_tol) * skl;
                blk.theta(k, l) = 0.5 * r.sd.value(w) * skl;
            }
        g.blocks.push_back(GeneratorBlock{r.label, r.statistics, r.beta, r.mu,
                                          std::nullopt, std::move(blk)});
    }
    return g;
}

// ------------------------------ Steady state ---------------------------------

namespace {

// Kernel vector of a square matrix via column-pivoted QR (rank-revealing):
// solve R(0:m-2,0:m-2) y = −R(0:m-2,m-1) and undo the column permutation.
// Returns the kernel vector and the ratio |R(m-2,m-2)|/|R(0,0)| as a
// degeneracy diagnostic.
template <typename Mat>
std::pair<Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>, double>
qr_kernel_vector(const Mat& L) {
    using Scalar = typename Mat::Scalar;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index m = L.rows();
    Eigen::ColPivHouseholderQR<Mat> qr(L);
    const Mat R = qr.matrixR().template triangularView<Eigen::Upper>();
    const double r00 = std::abs(R(0, 0));
    const double next_pivot = (m >= 2) ? std::abs(R(m - 2, m - 2)) : r00;
    Vec z(m);
    z.setZero();
    z(m - 1) = Scalar(1);
    if (m >= 2) {
        const auto Rtop = R.topLeftCorner(m - 1, m - 1);
        const Vec rhs = -R.topRightCorner(m - 1, 1);
        z.head(m - 1) = Rtop.template triangularView<Eigen::Upper>().solve(rhs);
    }
    Vec x = qr.colsPermutation() * z;
    return {x, (r00 > 0) ? next_pivot / r00 : 0.0};
}

} // namespace

SteadyStateSolution steady_state(const GeneratorBundle& bundle,
                                 const SteadyStateOptions& opts) {
    SteadyStateSolution sol;
    const int d = bundle.dim();

    if (bundle.mode == GeneratorMode::Secular) {
        const RealMatrix W = bundle.total_rate_matrix();
        auto [v, pivot_ratio] = qr_kernel_vector<RealMatrix>(W);
        if (pivot_ratio < 1e-12)
            throw DegenerateKernel("steady_state: rate matrix kernel is not one-dimensional");
        double s = v.sum();
        if (std::abs(s) < 1e-12 * v.cwiseAbs().sum())
            throw DegenerateKernel("steady_state: kernel vector has vanishing trace");
        RealVector p = v / s;
        const double wnorm = W.cwiseAbs().maxCoeff();
        double res = (W * p).cwiseAbs().maxCoeff() / std::max(wnorm, 1e-300);
        if (res > opts.residual_tol) {
            // bordered least squares [W; 1ᵀ] p = [0; 1]
            RealMatrix A(d + 1, d);
            A.topRows(d) = W / wnorm;
            A.bottomRows(1).setOnes();
            RealVector rhs = RealVector::Zero(d + 1);
            rhs(d) = 1.0;
            p = A.colPivHouseholderQr().solve(rhs);
            res = (W * p).cwiseAbs().maxCoeff() / std::max(wnorm, 1e-300);
            if (res > opts.residual_tol)
                throw NoConvergence("steady_state: residual above tolerance");
        }
        sol.populations = p;
        sol.rho_eig = Matrix::Zero(d, d);
        sol.rho_eig.diagonal() = p.cast<Complex>();
        sol.residual = res;
        sol.min_eigenvalue = p.minCoeff();
        return sol;
    }

    const Matrix L = bundle.total_superop();
    const double lnorm = max_abs(L);
    auto finalize = [&](Matrix rho) -> bool {
        rho = 0.5 * (rho + rho.adjoint().eval());
        const Complex tr = rho.trace();
        if (std::abs(tr) < 1e-12 * rho.cwiseAbs().sum()) return false;
        rho /= tr;
        const double res =
            (L * vectorize(rho)).cwiseAbs().maxCoeff() / std::max(lnorm, 1e-300);
        if (res > opts.residual_tol) return false;
        sol.rho_eig = rho;
        sol.residual = res;
        return true;
    };

    auto [x, pivot_ratio] = qr_kernel_vector<Matrix>(L);
    if (pivot_ratio < 1e-12)
        throw DegenerateKernel("steady_state: Liouvillian kernel is not one-dimensional");
    if (!finalize(devectorize(x))) {
        // bordered least squares [L; trace-row] vec(ρ) = [0; 1]
        const Eigen::Index m = L.rows();
        Matrix A(m + 1, m);
        A.topRows(m) = L / lnorm;
        A.bottomRows(1).setZero();
        for (int i = 0; i < d; ++i) A(m, i * d + i) = 1.0;
        Vector rhs = Vector::Zero(m + 1);
        rhs(m) = 1.0;
        Vector y = A.colPivHouseholderQr().solve(rhs);
        if (!finalize(devectorize(y)))
            throw NoConvergence("steady_state: residual above tolerance");
    }

    sol.populations = sol.rho_eig.diagonal().real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(sol.rho_eig);
    sol.min_eigenvalue = es.eigenvalues().minCoeff();
    return sol;
}

Matrix to_lab_basis(const GeneratorBundle& bundle, const Matrix& rho_eig) {
    return bundle.eig.vectors * rho_eig * bundle.eig.vectors.adjoint();
}

} // namespace rcqt
