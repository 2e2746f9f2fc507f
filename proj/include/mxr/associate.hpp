#pragma once

// Associate family of minimal surfaces in M^2 x R: the rotation J of the
// tangent plane, the data rotation (S_theta, T_theta) and the generation of
// x_theta through the reconstruction pipeline.

#include <cmath>
#include <vector>

#include "mxr/frames.hpp"
#include "mxr/fundamental.hpp"

namespace mxr {

namespace detail {

/// J in the coordinate frame: the unique g-isometry with J^2 = -I and
/// positive orientation. In a conformal chart J du = dv, J dv = -du.
inline Mat rotation_matrix(const Mat& g) {
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    if (!(g(0, 0) > 0.0) || !(det > 0.0))
        throw ValidationError("rotation_field: metric not positive definite");
    const double s = 1.0 / std::sqrt(det);
    Mat J(2, 2);
    J << -g(0, 1), -g(1, 1), g(0, 0), g(0, 1);
    return s * J;
}

/// u- or v-derivative of J given the metric derivative in that direction.
inline Mat rotation_matrix_derivative(const Mat& g, const Mat& dg) {
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    const double ddet = dg(0, 0) * g(1, 1) + g(0, 0) * dg(1, 1) - 2.0 * g(0, 1) * dg(0, 1);
    const double s = 1.0 / std::sqrt(det);
    const double ds = -0.5 * ddet / (det * std::sqrt(det));
    Mat J(2, 2), dJ(2, 2);
    J << -g(0, 1), -g(1, 1), g(0, 0), g(0, 1);
    dJ << -dg(0, 1), -dg(1, 1), dg(0, 0), dg(0, 1);
    return ds * J + s * dJ;
}

}  // namespace detail

/// Per-node J in the coordinate frame.
inline std::vector<Mat> rotation_field(const FundamentalData& d) {
    d.require_n2("rotation_field");
    std::vector<Mat> J(static_cast<std::size_t>(d.grid.size()));
    for (std::size_t k = 0; k < J.size(); ++k) J[k] = detail::rotation_matrix(d.g[k]);
    return J;
}

/// Largest |trace S| over the grid; the minimality hypothesis of Prop 4.1.
inline double max_trace_S(const FundamentalData& d) {
    double worst = 0.0;
    for (const Mat& S : d.S) worst = std::max(worst, std::abs(S.trace()));
    return worst;
}

inline double minimality_gate(const FundamentalData& d) {
    if (d.analytic || d.has_data_derivatives) return 1e-8;
    const double h = std::max(d.grid.hu(), d.grid.hv());
    return 10.0 * h * h;
}

/// Prop 4.1: S_theta = e^{theta J} S, T_theta = e^{theta J} T; g and nu are
/// unchanged. Requires trace-free S (minimal surface).
inline FundamentalData rotate_data(const FundamentalData& d, double theta) {
    d.require_n2("rotate_data");
    const double gate = minimality_gate(d);
    const double tr = max_trace_S(d);
    if (tr > gate)
        throw HypothesisError("rotate_data: trace S = " + std::to_string(tr) +
                              " violates the minimality hypothesis (gate " +
                              std::to_string(gate) + ")");
    const double ct = std::cos(theta), st = std::sin(theta);
    FundamentalData out = d;
    for (int i = 0; i < d.grid.nu; ++i)
        for (int j = 0; j < d.grid.nv; ++j) {
            const std::size_t k = static_cast<std::size_t>(d.grid.index(i, j));
            const Mat J = detail::rotation_matrix(d.g[k]);
            out.S[k] = ct * d.S[k] + st * J * d.S[k];
            out.T[k] = ct * d.T[k] + st * J * d.T[k];
            if (d.has_data_derivatives && d.has_metric_derivatives) {
                const Mat dJu = detail::rotation_matrix_derivative(d.g[k], d.dg_u[k]);
                const Mat dJv = detail::rotation_matrix_derivative(d.g[k], d.dg_v[k]);
                out.dS_u[k] = ct * d.dS_u[k] + st * (dJu * d.S[k] + J * d.dS_u[k]);
                out.dS_v[k] = ct * d.dS_v[k] + st * (dJv * d.S[k] + J * d.dS_v[k]);
                out.dT_u[k] = ct * d.dT_u[k] + st * (dJu * d.T[k] + J * d.dT_u[k]);
                out.dT_v[k] = ct * d.dT_v[k] + st * (dJv * d.T[k] + J * d.dT_v[k]);
            }
        }
    if (d.analytic) {
        auto f = d.analytic;
        out.analytic = [f, ct, st](double uu, double vv) {
            DataSample s = f(uu, vv);
            const Mat J = detail::rotation_matrix(s.g);
            // dg is passed through; J's derivative does not enter the sample
            s.S = ct * s.S + st * J * s.S;
            s.T = ct * s.T + st * J * s.T;
            return s;
        };
    }
    return out;
}

/// x_theta together with its frames and rotated data.
struct AssociateImmersion {
    double theta = 0.0;
    FundamentalData data;      // rotated data
    FrameField frames;
    ReconstructedChart x_theta;
};

/// Theorem 4.2: generate the associate immersion x_theta on the grid. The
/// initial frame is the adapted frame of x at the base node with the tangent
/// columns rotated by -theta (so the Z-row carries e^{theta J} T while the
/// basepoint and tangent plane of x are preserved); t0 is the height of x at
/// the base.
inline AssociateImmersion associate_immersion(const Chart& chart, double theta,
                                              const ParameterGrid& grid, const Signature& sig,
                                              int base_i, int base_j) {
    if (!chart.has_derivatives())
        throw PreconditionError("associate_immersion: chart needs analytic derivatives");
    FundamentalData data = fundamental_from_chart(chart, grid, sig);
    AssociateImmersion out;
    out.theta = theta;
    out.data = rotate_data(data, theta);
    const ConnectionField conn = connection_from_data(out.data);

    const double u0 = grid.u(base_i), v0 = grid.v(base_j);
    const Vec x0 = chart.eval(u0, v0);
    const Mat A_base =
        adapted_frame_at(x0, {chart.du(u0, v0), chart.dv(u0, v0)}, sig);
    Mat R = Mat::Identity(sig.dim(), sig.dim());
    R(1, 1) = std::cos(theta);
    R(1, 2) = std::sin(theta);
    R(2, 1) = -std::sin(theta);
    R(2, 2) = std::cos(theta);
    const Mat A0 = A_base * R;

    out.frames = integrate_frame(conn, out.data, base_i, base_j, A0);
    out.x_theta = reconstruct_immersion(out.frames, out.data, x0(sig.dim() - 1));
    return out;
}

inline AssociateImmersion associate_immersion(const Chart& chart, double theta,
                                              const ParameterGrid& grid,
                                              const Signature& sig) {
    return associate_immersion(chart, theta, grid, sig, grid.nu / 2, grid.nv / 2);
}

}  // namespace mxr
