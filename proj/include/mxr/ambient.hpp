#pragma once

// Linear algebra of E^{n+2} = R^{n+2} or L^{n+2} with the bilinear form
// G = diag(kappa, 1, ..., 1), together with the groups SO+(E^{n+2}) and
// so(E^{n+2}). Coordinate n+1 is the vertical (R-factor) direction.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mxr {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IntegrabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Ambient signature: kappa = +1 for S^n x R, -1 for H^n x R.
struct Signature {
    int kappa = 1;
    int n = 2;

    Signature() = default;
    Signature(int kappa_, int n_) : kappa(kappa_), n(n_) {
        if (kappa != 1 && kappa != -1)
            throw ValidationError("Signature: kappa must be +1 or -1");
        if (n < 2) throw ValidationError("Signature: n must be >= 2");
    }

    int dim() const { return n + 2; }

    Vec g_diagonal() const {
        Vec d = Vec::Ones(dim());
        d(0) = static_cast<double>(kappa);
        return d;
    }

    Mat g_matrix() const { return g_diagonal().asDiagonal(); }
};

inline double g_inner(const Vec& u, const Vec& v, const Signature& sig) {
    if (u.size() != sig.dim() || v.size() != sig.dim())
        throw ValidationError("g_inner: dimension mismatch");
    double s = sig.kappa * u(0) * v(0);
    for (int i = 1; i < sig.dim(); ++i) s += u(i) * v(i);
    return s;
}

/// G-quadratic form of the horizontal part (first n+1 coordinates).
inline double horizontal_quadratic(const Vec& p, const Signature& sig) {
    double s = sig.kappa * p(0) * p(0);
    for (int i = 1; i <= sig.n; ++i) s += p(i) * p(i);
    return s;
}

/// Rescale the horizontal part onto M^n (quadratic form = kappa), leaving the
/// vertical coordinate unchanged. For kappa = -1 the output has x^0 > 0.
inline Vec project_to_model(const Vec& p, const Signature& sig) {
    if (p.size() != sig.dim())
        throw ValidationError("project_to_model: dimension mismatch");
    const double q = horizontal_quadratic(p, sig);
    if (sig.kappa * q <= 0.0)
        throw DomainError("project_to_model: horizontal part has wrong causal type");
    const double s = 1.0 / std::sqrt(sig.kappa * q);
    Vec out = p;
    out.head(sig.n + 1) *= s;
    if (sig.kappa == -1 && out(0) <= 0.0)
        throw DomainError("project_to_model: x^0 > 0 branch unreachable");
    return out;
}

/// Max-norm of tA G A - G; zero iff A is G-orthogonal.
inline double frame_defect(const Mat& A, const Signature& sig) {
    const Mat G = sig.g_matrix();
    return (A.transpose() * G * A - G).cwiseAbs().maxCoeff();
}

/// Max-norm of tH G + GH; zero iff H is in so(E^{n+2}).
inline double so_defect(const Mat& H, const Signature& sig) {
    const Mat G = sig.g_matrix();
    return (H.transpose() * G + G * H).cwiseAbs().maxCoeff();
}

/// Kill roundoff asymmetry: return the so(E^{n+2}) part of H.
inline Mat so_project(const Mat& H, const Signature& sig) {
    const Mat G = sig.g_matrix();
    return 0.5 * (H - G * H.transpose() * G);
}

/// Inverse of a G-orthogonal matrix: A^{-1} = G tA G.
inline Mat frame_inverse(const Mat& A, const Signature& sig) {
    const Mat G = sig.g_matrix();
    return G * A.transpose() * G;
}

/// G-Gram-Schmidt over columns in order 0..n+1. Column 0 carries causal type
/// kappa (the N-bar slot), all others are spacelike. Preserves det = 1 and the
/// A^0_0 > 0 branch; idempotent on the group.
inline Mat reorthonormalize(const Mat& A, const Signature& sig) {
    const int d = sig.dim();
    if (A.rows() != d || A.cols() != d)
        throw ValidationError("reorthonormalize: dimension mismatch");
    Mat B = A;
    Vec eps(d);  // causal type of each column
    eps(0) = static_cast<double>(sig.kappa);
    for (int i = 1; i < d; ++i) eps(i) = 1.0;
    for (int j = 0; j < d; ++j) {
        Vec c = B.col(j);
        for (int k = 0; k < j; ++k)
            c -= eps(k) * g_inner(c, B.col(k), sig) * B.col(k);
        const double q = eps(j) * g_inner(c, c, sig);
        if (q < 1e-8)
            throw NumericalError("reorthonormalize: degenerate Gram step at column " +
                                 std::to_string(j));
        B.col(j) = c / std::sqrt(q);
    }
    return B;
}

/// Complete a prescribed last row (the Z(y) condition) to a matrix in
/// SO+(E^{n+2}). Rows of such a matrix are G-orthonormal with row 0 of causal
/// type kappa; the canonical completion G-Gram-Schmidts the E-axes against
/// the given row.
inline Mat complete_frame_with_last_row(const Vec& row, const Signature& sig) {
    const int d = sig.dim();
    if (row.size() != d)
        throw ValidationError("complete_frame_with_last_row: dimension mismatch");
    const Vec Gd = sig.g_diagonal();
    auto row_inner = [&](const Vec& a, const Vec& b) {
        double s = 0;
        for (int i = 0; i < d; ++i) s += a(i) * Gd(i) * b(i);
        return s;
    };
    if (std::abs(row_inner(row, row) - 1.0) > 1e-6)
        throw PreconditionError("complete_frame_with_last_row: row not G-unit");

    std::vector<Vec> rows;       // accepted rows, in output order 0..n
    std::vector<double> types;   // causal type of each accepted row
    rows.reserve(d);
    // Row 0 must have type kappa, the rest +1; the prescribed row is spacelike.
    for (int slot = 0; slot < d - 1; ++slot) {
        const double want = (slot == 0) ? static_cast<double>(sig.kappa) : 1.0;
        bool placed = false;
        for (int cand = 0; cand < d && !placed; ++cand) {
            Vec w = Vec::Unit(d, cand);
            w -= row_inner(w, row) * row;  // prescribed row is spacelike
            for (std::size_t k = 0; k < rows.size(); ++k)
                w -= types[k] * row_inner(w, rows[k]) * rows[k];
            const double q = want * row_inner(w, w);
            if (q > 1e-8) {
                rows.push_back(w / std::sqrt(q));
                types.push_back(want);
                placed = true;
            }
        }
        if (!placed)
            throw NumericalError("complete_frame_with_last_row: degenerate completion");
    }
    Mat A(d, d);
    for (int i = 0; i < d - 1; ++i) A.row(i) = rows[static_cast<std::size_t>(i)];
    A.row(d - 1) = row;
    if (sig.kappa == -1 && A(0, 0) < 0.0) A.row(0) *= -1.0;
    if (A.determinant() < 0.0) A.row(1) *= -1.0;
    return A;
}

}  // namespace mxr
