#pragma once

// Connection form Omega assembled from fundamental data, discrete flatness
// test, frame transport dA = A Omega, and reconstruction of the immersion.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mxr/ambient.hpp"
#include "mxr/fundamental.hpp"
#include "mxr/grid.hpp"

namespace mxr {

namespace detail {

/// Orthonormal frame of a 2D metric: columns of P are the coordinate
/// components of (e1, e2), built by Gram-Schmidt on (du, dv). dP holds the
/// derivative of P given the metric derivative dg in one direction.
inline Mat orthonormal_frame(const Mat& g) {
    const double a = g(0, 0), b = g(0, 1);
    const double D = g.determinant() / a;  // = g(e2 direction) after projection
    Mat P = Mat::Zero(2, 2);
    P(0, 0) = 1.0 / std::sqrt(a);
    P(0, 1) = -b / (a * std::sqrt(D));
    P(1, 1) = 1.0 / std::sqrt(D);
    return P;
}

inline Mat orthonormal_frame_derivative(const Mat& g, const Mat& dg) {
    const double a = g(0, 0), b = g(0, 1), d = g(1, 1);
    const double da = dg(0, 0), db = dg(0, 1), dd = dg(1, 1);
    const double det = a * d - b * b;
    const double ddet = da * d + a * dd - 2.0 * b * db;
    const double D = det / a;
    const double dD = (ddet * a - det * da) / (a * a);
    Mat dP = Mat::Zero(2, 2);
    dP(0, 0) = -0.5 * da * std::pow(a, -1.5);
    // P01 = -b * a^{-1} * D^{-1/2}
    dP(0, 1) = -(db / (a * std::sqrt(D))) + b * da / (a * a * std::sqrt(D)) +
               0.5 * b * dD / (a * std::pow(D, 1.5));
    dP(1, 1) = -0.5 * dD * std::pow(D, -1.5);
    return dP;
}

}  // namespace detail

/// Omega evaluated on (du, dv) at one point, plus the orthonormal coframe
/// coefficients omega^i(du), omega^i(dv) (rows of P^{-1}).
struct ConnectionSample {
    Mat omega_u, omega_v;     // (n+2)x(n+2), G-antisymmetric
    Mat coframe;              // 2x2, coframe(i,a) = omega^{i+1}(d_a)
};

/// Assemble Omega(du), Omega(dv) from pointwise data; n = 2.
inline ConnectionSample connection_at(const DataSample& s, const Signature& sig) {
    const int d = sig.dim();
    const Mat P = detail::orthonormal_frame(s.g);
    const Mat dP_u = detail::orthonormal_frame_derivative(s.g, s.dg_u);
    const Mat dP_v = detail::orthonormal_frame_derivative(s.g, s.dg_v);
    const Christoffels Gamma = christoffels_from(s.g, s.dg_u, s.dg_v);
    const Mat Pinv = P.inverse();
    const Vec eta = s.g * s.T;                       // eta(d_a)
    Vec Tf(2);                                       // frame components of T
    for (int j = 0; j < 2; ++j) Tf(j) = P.col(j).dot(eta);

    ConnectionSample out;
    out.coframe = Pinv;
    const Mat* dP[2] = {&dP_u, &dP_v};
    Mat* omega[2] = {&out.omega_u, &out.omega_v};
    for (int a = 0; a < 2; ++a) {
        Mat O = Mat::Zero(d, d);
        // covariant derivative of the frame columns along d_a
        Mat M = *dP[a];
        for (int b = 0; b < 2; ++b)
            for (int j = 0; j < 2; ++j)
                for (int c = 0; c < 2; ++c) M(b, j) += Gamma[b](a, c) * P(c, j);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                O(i + 1, j + 1) = P.col(i).dot(s.g * M.col(j));  // omega^i_j(d_a)
        for (int j = 0; j < 2; ++j) {
            const double sn1j = s.S.col(a).dot(s.g * P.col(j));  // <S d_a, e_j>
            O(d - 1, j + 1) = sn1j;
            O(j + 1, d - 1) = -sn1j;
            // omega^0_j = kappa (T^j eta - omega^j) as 1-forms
            const double o0j = sig.kappa * (Tf(j) * eta(a) - Pinv(j, a));
            O(0, j + 1) = o0j;
            O(j + 1, 0) = -sig.kappa * o0j;
        }
        const double o0n1 = sig.kappa * s.nu * eta(a);
        O(0, d - 1) = o0n1;
        O(d - 1, 0) = -sig.kappa * o0n1;
        *omega[a] = so_project(O, sig);
    }
    return out;
}

struct ConnectionField {
    Signature sig;
    ParameterGrid grid;
    std::vector<Mat> omega_u, omega_v;
    std::vector<Mat> coframe;
    /// Off-grid evaluator, present when the data had one.
    std::function<ConnectionSample(double, double)> analytic;
};

inline DataSample data_sample_at(const FundamentalData& d, int i, int j) {
    const int idx = d.grid.index(i, j);
    DataSample s;
    s.g = d.g[idx];
    s.S = d.S[idx];
    s.T = d.T[idx];
    s.nu = d.nu[idx];
    auto [dgu, dgv] = metric_derivatives_at(d, i, j);
    s.dg_u = dgu;
    s.dg_v = dgv;
    return s;
}

inline ConnectionField connection_from_data(const FundamentalData& d) {
    d.require_n2("connection_from_data");
    ConnectionField c;
    c.sig = d.sig;
    c.grid = d.grid;
    const std::size_t m = static_cast<std::size_t>(d.grid.size());
    c.omega_u.resize(m);
    c.omega_v.resize(m);
    c.coframe.resize(m);
    for (int i = 0; i < d.grid.nu; ++i)
        for (int j = 0; j < d.grid.nv; ++j) {
            detail::check_metric(d.g[d.grid.index(i, j)], i, j);
            ConnectionSample s = connection_at(data_sample_at(d, i, j), d.sig);
            const std::size_t idx = static_cast<std::size_t>(d.grid.index(i, j));
            c.omega_u[idx] = s.omega_u;
            c.omega_v[idx] = s.omega_v;
            c.coframe[idx] = s.coframe;
        }
    if (d.analytic) {
        auto f = d.analytic;
        Signature sig = d.sig;
        c.analytic = [f, sig](double uu, double vv) {
            return connection_at(f(uu, vv), sig);
        };
    }
    return c;
}

/// Max-norm of d Omega + Omega ^ Omega evaluated on (du, dv) per node.
/// Uses grid finite differences, or high-order small-step differences of the
/// analytic evaluator when one is attached.
inline std::vector<double> flatness_residual(const ConnectionField& c) {
    const ParameterGrid& g = c.grid;
    std::vector<double> out(static_cast<std::size_t>(g.size()), 0.0);
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const std::size_t idx = static_cast<std::size_t>(g.index(i, j));
            Mat dOv_du, dOu_dv;
            if (c.analytic) {
                // 4th-order central differences with a fixed small step,
                // independent of the grid spacing.
                const double delta = 1e-3;
                const double uu = g.u(i), vv = g.v(j);
                auto ov = [&](double x) { return c.analytic(x, vv).omega_v; };
                auto ou = [&](double x) { return c.analytic(uu, x).omega_u; };
                dOv_du = (8.0 * (ov(uu + delta) - ov(uu - delta)) -
                          (ov(uu + 2 * delta) - ov(uu - 2 * delta))) /
                         (12.0 * delta);
                dOu_dv = (8.0 * (ou(vv + delta) - ou(vv - delta)) -
                          (ou(vv + 2 * delta) - ou(vv - 2 * delta))) /
                         (12.0 * delta);
            } else {
                auto row = [&](int k) { return c.omega_v[static_cast<std::size_t>(g.index(k, j))]; };
                auto col = [&](int k) { return c.omega_u[static_cast<std::size_t>(g.index(i, k))]; };
                // Omega is a derived field (built from FD metric derivatives
                // when no analytic supply exists); avoid differencing across
                // the endpoint truncation jump.
                dOv_du = fd_first_derived(row, i, g.nu, g.hu());
                dOu_dv = fd_first_derived(col, j, g.nv, g.hv());
            }
            const Mat& Ou = c.omega_u[idx];
            const Mat& Ov = c.omega_v[idx];
            out[idx] = (dOv_du - dOu_dv + Ou * Ov - Ov * Ou).cwiseAbs().maxCoeff();
        }
    return out;
}

struct FrameField {
    Signature sig;
    ParameterGrid grid;
    std::vector<Mat> A;
    int base_i = 0, base_j = 0;
    Mat A0;
};

namespace detail {

/// One RK4 edge step of dA = A*Omega along a grid edge. `om` evaluates Omega
/// contracted with the edge direction at edge parameter t in [0,1]; h is the
/// signed edge length already folded into om's values? No: om returns the
/// directional Omega per unit parameter; h = 1 here.
template <typename F>
inline Mat rk4_edge(const Mat& A, F&& om, const Signature& sig, int substeps) {
    Mat X = A;
    const double dt = 1.0 / substeps;
    for (int s = 0; s < substeps; ++s) {
        const double t0 = s * dt;
        const Mat O0 = om(t0);
        const Mat Om = om(t0 + 0.5 * dt);
        const Mat O1 = om(t0 + dt);
        const Mat k1 = X * O0;
        const Mat k2 = (X + 0.5 * dt * k1) * Om;
        const Mat k3 = (X + 0.5 * dt * k2) * Om;
        const Mat k4 = (X + dt * k3) * O1;
        X += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        X = reorthonormalize(X, sig);
    }
    return X;
}

/// Directional Omega along the edge from node (i,j) to its neighbor in
/// direction (du,dv) in {(+-1,0),(0,+-1)}, at edge parameter t in [0,1].
/// Signed and scaled so that rk4_edge integrates over t in [0,1].
inline Mat edge_omega(const ConnectionField& c, int i, int j, int du, int dv, double t) {
    const ParameterGrid& g = c.grid;
    if (c.analytic) {
        const double uu = g.u(i) + t * du * g.hu();
        const double vv = g.v(j) + t * dv * g.hv();
        const ConnectionSample s = c.analytic(uu, vv);
        if (du != 0) return (du * g.hu()) * s.omega_u;
        return (dv * g.hv()) * s.omega_v;
    }
    // Cubic interpolation through four nodes along the line when possible,
    // linear near the boundary. Positions are in units of the node spacing,
    // relative to node (i,j); the target is at position t*step.
    const std::vector<Mat>& field = (du != 0) ? c.omega_u : c.omega_v;
    const int step = (du != 0) ? du : dv;
    const int m = (du != 0) ? g.nu : g.nv;
    const int pos = (du != 0) ? i : j;
    auto at = [&](int k) -> const Mat& {
        return field[static_cast<std::size_t>((du != 0) ? g.index(k, j) : g.index(i, k))];
    };
    const double scale = (du != 0) ? du * g.hu() : dv * g.hv();
    const double x = t * step;  // target offset from pos, in node units
    if (m < 4)  // too short for a cubic stencil: linear between the endpoints
        return scale * ((1.0 - t) * at(pos) + t * at(pos + step));
    // choose stencil k0..k0+3 containing pos and pos+step
    int k0 = pos + std::min(0, step) - 1;
    if (k0 < 0) k0 = 0;
    if (k0 > m - 4) k0 = m - 4;
    Mat out = Mat::Zero(field[0].rows(), field[0].cols());
    for (int q = 0; q < 4; ++q) {
        double w = 1.0;
        const double xq = k0 + q - pos;
        for (int r = 0; r < 4; ++r) {
            if (r == q) continue;
            const double xr = k0 + r - pos;
            w *= (x - xr) / (xq - xr);
        }
        out += w * at(k0 + q);
    }
    return scale * out;
}

inline Mat transport_edge(const ConnectionField& c, const Mat& A, int i, int j, int du,
                          int dv, const Signature& sig) {
    const int substeps = c.analytic ? 4 : 1;
    auto om = [&](double t) { return edge_omega(c, i, j, du, dv, t); };
    return rk4_edge(A, om, sig, substeps);
}

}  // namespace detail

/// Transport A over the lattice solving dA = A Omega: along the base row in
/// u (both directions), then along each column in v. The base frame must
/// satisfy the Z-row condition: last row equal to (0, T^1, ..., T^n, nu).
inline FrameField integrate_frame(const ConnectionField& c, const FundamentalData& d,
                                  int base_i, int base_j, const Mat& A0,
                                  double flatness_gate = -1.0) {
    d.require_n2("integrate_frame");
    const Signature& sig = d.sig;
    const ParameterGrid& g = d.grid;
    const int dd = sig.dim();
    if (frame_defect(A0, sig) > 1e-8)
        throw PreconditionError("integrate_frame: A0 not in SO+(E^{n+2})");
    {
        const int idx = g.index(base_i, base_j);
        const Mat P = detail::orthonormal_frame(d.g[idx]);
        const Vec eta = d.g[idx] * d.T[idx];
        Vec zrow(dd);
        zrow(0) = 0.0;
        for (int k = 0; k < 2; ++k) zrow(k + 1) = P.col(k).dot(eta);
        zrow(dd - 1) = d.nu[idx];
        if ((A0.row(dd - 1).transpose() - zrow).cwiseAbs().maxCoeff() > 1e-8)
            throw PreconditionError("integrate_frame: A0 violates the Z-row condition at base");
    }
    if (flatness_gate < 0.0) flatness_gate = 10.0 * g.hu() * g.hu();
    {
        const std::vector<double> flat = flatness_residual(c);
        double worst = 0.0;
        int wi = 0, wj = 0;
        for (int i = 1; i < g.nu - 1; ++i)
            for (int j = 1; j < g.nv - 1; ++j) {
                const double v = flat[static_cast<std::size_t>(g.index(i, j))];
                if (v > worst) {
                    worst = v;
                    wi = i;
                    wj = j;
                }
            }
        if (worst > flatness_gate)
            throw IntegrabilityError("integrate_frame: flatness residual " +
                                     std::to_string(worst) + " exceeds gate at node (" +
                                     std::to_string(wi) + "," + std::to_string(wj) + ")");
    }

    FrameField f;
    f.sig = sig;
    f.grid = g;
    f.base_i = base_i;
    f.base_j = base_j;
    f.A0 = A0;
    f.A.resize(static_cast<std::size_t>(g.size()));
    auto set = [&](int i, int j, const Mat& A) { f.A[static_cast<std::size_t>(g.index(i, j))] = A; };
    auto get = [&](int i, int j) -> const Mat& {
        return f.A[static_cast<std::size_t>(g.index(i, j))];
    };
    set(base_i, base_j, A0);
    for (int i = base_i + 1; i < g.nu; ++i)
        set(i, base_j, detail::transport_edge(c, get(i - 1, base_j), i - 1, base_j, +1, 0, sig));
    for (int i = base_i - 1; i >= 0; --i)
        set(i, base_j, detail::transport_edge(c, get(i + 1, base_j), i + 1, base_j, -1, 0, sig));
    for (int i = 0; i < g.nu; ++i) {
        for (int j = base_j + 1; j < g.nv; ++j)
            set(i, j, detail::transport_edge(c, get(i, j - 1), i, j - 1, 0, +1, sig));
        for (int j = base_j - 1; j >= 0; --j)
            set(i, j, detail::transport_edge(c, get(i, j + 1), i, j + 1, 0, -1, sig));
    }
    return f;
}

/// Max deviation of each frame's last row from (0, T^1, T^2, nu) per node.
inline std::vector<double> z_row_residual(const FrameField& f, const FundamentalData& d) {
    const ParameterGrid& g = d.grid;
    const int dd = d.sig.dim();
    std::vector<double> out(static_cast<std::size_t>(g.size()), 0.0);
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const int idx = g.index(i, j);
            const Mat P = detail::orthonormal_frame(d.g[idx]);
            const Vec eta = d.g[idx] * d.T[idx];
            Vec zrow(dd);
            zrow(0) = 0.0;
            for (int k = 0; k < 2; ++k) zrow(k + 1) = P.col(k).dot(eta);
            zrow(dd - 1) = d.nu[idx];
            out[static_cast<std::size_t>(idx)] =
                (f.A[static_cast<std::size_t>(idx)].row(dd - 1).transpose() - zrow)
                    .cwiseAbs()
                    .maxCoeff();
        }
    return out;
}

/// Transport the identity-based frame around the rectangle with corners
/// (i0,j0)-(i1,j1); returns the max-norm of A_loop - A_start.
inline double rectangle_holonomy(const ConnectionField& c, const Mat& A_start, int i0, int j0,
                                 int i1, int j1) {
    const Signature& sig = c.sig;
    Mat A = A_start;
    for (int i = i0; i < i1; ++i) A = detail::transport_edge(c, A, i, j0, +1, 0, sig);
    for (int j = j0; j < j1; ++j) A = detail::transport_edge(c, A, i1, j, 0, +1, sig);
    for (int i = i1; i > i0; --i) A = detail::transport_edge(c, A, i, j1, -1, 0, sig);
    for (int j = j1; j > j0; --j) A = detail::transport_edge(c, A, i0, j, 0, -1, sig);
    return (A - A_start).cwiseAbs().maxCoeff();
}

struct ReconstructedChart {
    Signature sig;
    ParameterGrid grid;
    std::vector<Vec> nodes;
    double t0 = 0.0;
    double max_projection_displacement = 0.0;
};

/// f^alpha = A^alpha_0, f^{n+1} by trapezoidal integration of eta along the
/// transport paths, anchored at t0; nodes projected back onto the model.
inline ReconstructedChart reconstruct_immersion(const FrameField& frames,
                                                const FundamentalData& d, double t0) {
    const ParameterGrid& g = d.grid;
    const int dd = d.sig.dim();
    ReconstructedChart out;
    out.sig = d.sig;
    out.grid = g;
    out.t0 = t0;
    out.nodes.resize(static_cast<std::size_t>(g.size()));

    // heights first: eta(d_a) = (g T)_a per node
    std::vector<double> eta_u(static_cast<std::size_t>(g.size()));
    std::vector<double> eta_v(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const int idx = g.index(i, j);
            const Vec e = d.g[idx] * d.T[idx];
            eta_u[static_cast<std::size_t>(idx)] = e(0);
            eta_v[static_cast<std::size_t>(idx)] = e(1);
        }
    std::vector<double> h(static_cast<std::size_t>(g.size()), 0.0);
    auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(g.index(i, j))]; };
    auto EU = [&](int i, int j) { return eta_u[static_cast<std::size_t>(g.index(i, j))]; };
    auto EV = [&](int i, int j) { return eta_v[static_cast<std::size_t>(g.index(i, j))]; };
    const int bi = frames.base_i, bj = frames.base_j;
    H(bi, bj) = t0;
    for (int i = bi + 1; i < g.nu; ++i)
        H(i, bj) = H(i - 1, bj) + 0.5 * g.hu() * (EU(i - 1, bj) + EU(i, bj));
    for (int i = bi - 1; i >= 0; --i)
        H(i, bj) = H(i + 1, bj) - 0.5 * g.hu() * (EU(i + 1, bj) + EU(i, bj));
    for (int i = 0; i < g.nu; ++i) {
        for (int j = bj + 1; j < g.nv; ++j)
            H(i, j) = H(i, j - 1) + 0.5 * g.hv() * (EV(i, j - 1) + EV(i, j));
        for (int j = bj - 1; j >= 0; --j)
            H(i, j) = H(i, j + 1) - 0.5 * g.hv() * (EV(i, j + 1) + EV(i, j));
    }

    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const std::size_t idx = static_cast<std::size_t>(g.index(i, j));
            Vec p(dd);
            for (int a = 0; a < dd - 1; ++a) p(a) = frames.A[idx](a, 0);
            p(dd - 1) = h[idx];
            const Vec q = project_to_model(p, d.sig);
            const double disp = (q - p).cwiseAbs().maxCoeff();
            out.max_projection_displacement = std::max(out.max_projection_displacement, disp);
            out.nodes[idx] = q;
        }
    if (out.max_projection_displacement > 1e-4)
        throw NumericalError("reconstruct_immersion: model projection displacement " +
                             std::to_string(out.max_projection_displacement) + " exceeds 1e-4");
    return out;
}

/// Immersion samples plus an adapted frame at a base node, the common
/// currency of compare_up_to_isometry.
struct SampledImmersion {
    Signature sig;
    ParameterGrid grid;
    std::vector<Vec> nodes;
    int base_i = 0, base_j = 0;
    Mat base_frame;  // FrameMatrix at the base node
};

inline SampledImmersion sampled_from_reconstruction(const ReconstructedChart& r,
                                                    const FrameField& frames) {
    SampledImmersion s;
    s.sig = r.sig;
    s.grid = r.grid;
    s.nodes = r.nodes;
    s.base_i = frames.base_i;
    s.base_j = frames.base_j;
    s.base_frame = frames.A[static_cast<std::size_t>(r.grid.index(frames.base_i, frames.base_j))];
    return s;
}

inline SampledImmersion sampled_from_chart(const Chart& chart, const ParameterGrid& grid,
                                           const Signature& sig, int base_i, int base_j) {
    if (!chart.has_derivatives())
        throw PreconditionError("sampled_from_chart: chart needs analytic derivatives");
    SampledImmersion s;
    s.sig = sig;
    s.grid = grid;
    s.nodes.resize(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.nu; ++i)
        for (int j = 0; j < grid.nv; ++j)
            s.nodes[static_cast<std::size_t>(grid.index(i, j))] = chart.eval(grid.u(i), grid.v(j));
    s.base_i = base_i;
    s.base_j = base_j;
    const double u0 = grid.u(base_i), v0 = grid.v(base_j);
    s.base_frame = adapted_frame_at(chart.eval(u0, v0), {chart.du(u0, v0), chart.dv(u0, v0)}, sig);
    return s;
}

/// Align b to a by the unique ambient isometry (G-orthogonal map of the
/// horizontal factor + vertical translation) matching the base frames, then
/// return the max pointwise coordinate distance.
inline double compare_up_to_isometry(const SampledImmersion& a, const SampledImmersion& b) {
    if (a.grid.size() != b.grid.size() || a.sig.dim() != b.sig.dim())
        throw ValidationError("compare_up_to_isometry: grids or signatures differ");
    const Signature& sig = a.sig;
    const int d = sig.dim();
    const int nh = d - 1;  // horizontal dimension n+1
    // Horizontal parts of the frame columns; A G tA = G gives Hb eps tHb = Gh,
    // so eps tHb Gh^{-1} is a right inverse of Hb and the system Phi Hb = Ha
    // is solved exactly (the common kernel is the vertical Z-row direction).
    Mat Ha = a.base_frame.topRows(nh);
    Mat Hb = b.base_frame.topRows(nh);
    Vec eps = sig.g_diagonal();
    Mat Gh = Mat::Zero(nh, nh);
    for (int i = 0; i < nh; ++i) Gh(i, i) = eps(i);
    Mat Phi = Ha * eps.asDiagonal() * Hb.transpose() * Gh;  // Gh^{-1} = Gh
    // re-orthonormalize Phi w.r.t. Gh (columns, column 0 of causal type kappa)
    for (int j = 0; j < nh; ++j) {
        Vec c = Phi.col(j);
        for (int k = 0; k < j; ++k) {
            const double ip = eps(k) * (c.transpose() * Gh * Phi.col(k))(0, 0);
            c -= ip * Phi.col(k);
        }
        const double q = eps(j) * (c.transpose() * Gh * c)(0, 0);
        if (q < 1e-10)
            throw DomainError("compare_up_to_isometry: degenerate base frames");
        Phi.col(j) = c / std::sqrt(q);
    }
    const double shift =
        a.nodes[static_cast<std::size_t>(a.grid.index(a.base_i, a.base_j))](d - 1) -
        b.nodes[static_cast<std::size_t>(b.grid.index(b.base_i, b.base_j))](d - 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.nodes.size(); ++k) {
        Vec t(d);
        t.head(nh) = Phi * b.nodes[k].head(nh);
        t(d - 1) = b.nodes[k](d - 1) + shift;
        worst = std::max(worst, (a.nodes[k] - t).cwiseAbs().maxCoeff());
    }
    return worst;
}

/// Prop "change of signs": the three data transformations corresponding to
/// orientation-reversing ambient isometries.
inline FundamentalData apply_sign_flip(const FundamentalData& d, int which) {
    if (which < 1 || which > 3)
        throw ValidationError("apply_sign_flip: case must be 1, 2 or 3");
    const double sS = (which == 3) ? 1.0 : -1.0;
    const double sT = (which == 1) ? 1.0 : -1.0;
    const double sNu = (which == 2) ? 1.0 : -1.0;
    FundamentalData out = d;
    for (std::size_t k = 0; k < out.S.size(); ++k) {
        out.S[k] *= sS;
        out.T[k] *= sT;
        out.nu[k] *= sNu;
    }
    if (out.has_data_derivatives)
        for (std::size_t k = 0; k < out.S.size(); ++k) {
            out.dS_u[k] *= sS;
            out.dS_v[k] *= sS;
            out.dT_u[k] *= sT;
            out.dT_v[k] *= sT;
            out.dnu_u[k] *= sNu;
            out.dnu_v[k] *= sNu;
        }
    if (d.analytic) {
        auto f = d.analytic;
        out.analytic = [f, sS, sT, sNu](double uu, double vv) {
            DataSample s = f(uu, vv);
            s.S *= sS;
            s.T *= sT;
            s.nu *= sNu;
            return s;
        };
    }
    return out;
}

/// Which ambient orientations the isometry realizing the flip reverses.
inline std::string sign_flip_description(int which) {
    switch (which) {
        case 1: return "reverses the orientation of M^n, preserves R";
        case 2: return "preserves the orientation of M^n, reverses R";
        case 3: return "reverses the orientations of both M^n and R";
        default: throw ValidationError("sign_flip_description: case must be 1, 2 or 3");
    }
}

}  // namespace mxr
