// operators.cpp

#include "rcqt/operators.hpp"

#include <cmath>
#include <sstream>

namespace rcqt {

std::vector<int> HilbertSpace::unravel(int index) const {
    std::vector<int> out(factors.size(), 0);
    for (int f = static_cast<int>(factors.size()) - 1; f >= 0; --f) {
        out[f] = index % factors[f].levels;
        index /= factors[f].levels;
    }
    return out;
}

std::string HilbertSpace::basis_label(int index) const {
    const auto idx = unravel(index);
    std::ostringstream os;
    os << "|";
    for (std::size_t f = 0; f < idx.size(); ++f) {
        if (f) os << ",";
        os << idx[f];
    }
    os << ">";
    return os.str();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix kron_embed(const Matrix& op, const HilbertSpace& space, int factor_index) {
    if (factor_index < 0 || factor_index >= static_cast<int>(space.factors.size()))
        throw DimensionMismatch("kron_embed: factor index out of range");
    if (op.rows() != op.cols() ||
        op.rows() != space.factors[factor_index].levels)
        throw DimensionMismatch("kron_embed: operator does not match factor dimension");
    Matrix out = Matrix::Identity(1, 1);
    for (int f = 0; f < static_cast<int>(space.factors.size()); ++f) {
        if (f == factor_index)
            out = kron(out, op);
        else
            out = kron(out, Matrix::Identity(space.factors[f].levels,
                                             space.factors[f].levels));
    }
    return out;
}

OscillatorOps oscillator_ops(int n_cutoff, double omega) {
    if (n_cutoff < 2)
        throw DimensionMismatch("oscillator_ops: truncation must be >= 2");
    if (!(omega > 0))
        throw DimensionMismatch("oscillator_ops: frequency must be positive");
    OscillatorOps ops;
    ops.a = Matrix::Zero(n_cutoff, n_cutoff);
    for (int m = 1; m < n_cutoff; ++m) ops.a(m - 1, m) = std::sqrt(double(m));
    ops.adag = ops.a.adjoint();
    ops.number = ops.adag * ops.a;
    ops.X = (ops.a + ops.adag) / std::sqrt(2.0 * omega);
    ops.P = Complex(0.0, 1.0) * std::sqrt(omega / 2.0) * (ops.adag - ops.a);
    return ops;
}

EigenSystem eig_hermitian(const Matrix& H, double tol_scale, double hermiticity_tol) {
    if (H.rows() != H.cols())
        throw DimensionMismatch("eig_hermitian: matrix must be square");
    const double scale = std::max(1.0, max_abs(H));
    if (max_abs(H - H.adjoint()) > hermiticity_tol * scale)
        throw NotHermitian("eig_hermitian: matrix is not Hermitian to tolerance");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(H);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("eig_hermitian: eigensolver failed");

    EigenSystem es;
    es.energies = solver.eigenvalues();
    es.vectors = solver.eigenvectors();
    const double norm = std::max(std::abs(es.energies(0)),
                                 std::abs(es.energies(es.energies.size() - 1)));
    es.degeneracy_tol = tol_scale * std::max(norm, 1e-300);
    es.gap_degenerate.assign(es.dim() > 0 ? es.dim() - 1 : 0, false);
    for (int k = 0; k + 1 < es.dim(); ++k)
        es.gap_degenerate[k] = (es.energies(k + 1) - es.energies(k)) < es.degeneracy_tol;
    return es;
}

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix devectorize(const Vector& v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    if (n * n != v.size())
        throw DimensionMismatch("devectorize: length is not a perfect square");
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix sprepost(const Matrix& A, const Matrix& B) {
    return kron(B.transpose(), A);
}

Matrix spre(const Matrix& A) {
    return kron(Matrix::Identity(A.rows(), A.cols()), A);
}

Matrix spost(const Matrix& B) {
    return kron(B.transpose(), Matrix::Identity(B.rows(), B.cols()));
}

Matrix commutator_superop(const Matrix& H) {
    return Complex(0.0, -1.0) * (spre(H) - spost(H));
}

Matrix partial_trace(const Matrix& M, const HilbertSpace& space, int traced_factor) {
    const int nf = static_cast<int>(space.factors.size());
    if (traced_factor < 0 || traced_factor >= nf)
        throw DimensionMismatch("partial_trace: factor index out of range");
    if (M.rows() != space.dim() || M.cols() != space.dim())
        throw DimensionMismatch("partial_trace: matrix does not match space");

    // Split composite index into (left, traced, right) blocks
    int d_left = 1, d_right = 1;
    for (int f = 0; f < traced_factor; ++f) d_left *= space.factors[f].levels;
    for (int f = traced_factor + 1; f < nf; ++f) d_right *= space.factors[f].levels;
    const int d_tr = space.factors[traced_factor].levels;
    const int d_out = d_left * d_right;

    Matrix out = Matrix::Zero(d_out, d_out);
    auto full_index = [&](int l, int t, int r) { return (l * d_tr + t) * d_right + r; };
    for (int l = 0; l < d_left; ++l)
        for (int r = 0; r < d_right; ++r)
            for (int lp = 0; lp < d_left; ++lp)
                for (int rp = 0; rp < d_right; ++rp) {
                    Complex s = 0.0;
                    for (int t = 0; t < d_tr; ++t)
                        s += M(full_index(l, t, r), full_index(lp, t, rp));
                    out(l * d_right + r, lp * d_right + rp) = s;
                }
    return out;
}

Matrix gibbs_state(const Matrix& H, double beta, double mu, const Matrix* number_op) {
    Matrix K = H;
    if (mu != 0.0) {
        if (number_op == nullptr)
            throw DimensionMismatch("gibbs_state: mu != 0 requires a number operator");
        K -= mu * (*number_op);
    }
    const EigenSystem es = eig_hermitian(K);
    const double e_min = es.energies.minCoeff();
    RealVector w(es.dim());
    for (int k = 0; k < es.dim(); ++k)
        w(k) = std::exp(-beta * (es.energies(k) - e_min));
    w /= w.sum();
    return es.vectors * w.asDiagonal() * es.vectors.adjoint();
}

Matrix log_psd(const Matrix& rho, double floor) {
    const EigenSystem es = eig_hermitian(rho, 1e-9, 1e-10);
    RealVector lw(es.dim());
    for (int k = 0; k < es.dim(); ++k)
        lw(k) = std::log(std::max(es.energies(k), floor));
    return es.vectors * lw.asDiagonal() * es.vectors.adjoint();
}

double trace_distance(const Matrix& A, const Matrix& B) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(A - B);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

} // namespace rcqt
