#pragma once

// Height function, its harmonic conjugate, the Hopf differential Qphi, the
// Abresch-Rosenberg form Q and the associate-family transformation laws.
// All complex fields are dz^2 coefficients in the fixed conformal chart,
// with d/dz = (d/du - i d/dv)/2.

#include <complex>
#include <vector>

#include "mxr/associate.hpp"
#include "mxr/frames.hpp"

namespace mxr {

using Cx = std::complex<double>;

struct HeightPair {
    ParameterGrid grid;
    std::vector<double> h, h_star;  // h_star anchored (= 0) at the base node
    int base_i = 0, base_j = 0;
    double harmonicity = 0.0;  // max |discrete Laplacian of h| over the interior
};

struct ComplexScalarField {
    ParameterGrid grid;
    std::vector<Cx> q;
    double cross_route_deviation = 0.0;  // hopf_differential only
};

namespace detail {

/// Node samples of (h, h_u, h_v): analytic chart derivatives when available,
/// otherwise second-order differences of the height samples.
struct HeightDerivatives {
    std::vector<double> h, hu, hv;
};

inline HeightDerivatives height_derivatives(const Chart& chart, const ParameterGrid& g) {
    HeightDerivatives out;
    const std::size_t m = static_cast<std::size_t>(g.size());
    out.h.resize(m);
    out.hu.resize(m);
    out.hv.resize(m);
    int dim = -1;
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const Vec x = chart.eval(g.u(i), g.v(j));
            if (dim < 0) dim = static_cast<int>(x.size());
            out.h[static_cast<std::size_t>(g.index(i, j))] = x(dim - 1);
        }
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const std::size_t idx = static_cast<std::size_t>(g.index(i, j));
            if (chart.has_derivatives()) {
                out.hu[idx] = chart.du(g.u(i), g.v(j))(dim - 1);
                out.hv[idx] = chart.dv(g.u(i), g.v(j))(dim - 1);
            } else {
                auto row = [&](int k) { return out.h[static_cast<std::size_t>(g.index(k, j))]; };
                auto col = [&](int k) { return out.h[static_cast<std::size_t>(g.index(i, k))]; };
                out.hu[idx] = fd_first(row, i, g.nu, g.hu());
                out.hv[idx] = fd_first(col, j, g.nv, g.hv());
            }
        }
    return out;
}

}  // namespace detail

/// h = last chart coordinate; h* by trapezoidal path integration of
/// (-h_v, h_u) from the base node (the harmonic conjugate up to a constant).
inline HeightPair height_pair(const Chart& chart, const ParameterGrid& g, int base_i,
                              int base_j, double harmonicity_gate = -1.0) {
    if (!chart.conformal)
        throw PreconditionError("height_pair: chart must be conformal");
    const auto d = detail::height_derivatives(chart, g);
    HeightPair out;
    out.grid = g;
    out.base_i = base_i;
    out.base_j = base_j;
    out.h = d.h;
    out.h_star.assign(static_cast<std::size_t>(g.size()), 0.0);

    auto HS = [&](int i, int j) -> double& {
        return out.h_star[static_cast<std::size_t>(g.index(i, j))];
    };
    auto EU = [&](int i, int j) { return -d.hv[static_cast<std::size_t>(g.index(i, j))]; };
    auto EV = [&](int i, int j) { return d.hu[static_cast<std::size_t>(g.index(i, j))]; };
    for (int i = base_i + 1; i < g.nu; ++i)
        HS(i, base_j) = HS(i - 1, base_j) + 0.5 * g.hu() * (EU(i - 1, base_j) + EU(i, base_j));
    for (int i = base_i - 1; i >= 0; --i)
        HS(i, base_j) = HS(i + 1, base_j) - 0.5 * g.hu() * (EU(i + 1, base_j) + EU(i, base_j));
    for (int i = 0; i < g.nu; ++i) {
        for (int j = base_j + 1; j < g.nv; ++j)
            HS(i, j) = HS(i, j - 1) + 0.5 * g.hv() * (EV(i, j - 1) + EV(i, j));
        for (int j = base_j - 1; j >= 0; --j)
            HS(i, j) = HS(i, j + 1) - 0.5 * g.hv() * (EV(i, j + 1) + EV(i, j));
    }

    for (int i = 1; i < g.nu - 1; ++i)
        for (int j = 1; j < g.nv - 1; ++j) {
            auto H = [&](int a, int b) { return d.h[static_cast<std::size_t>(g.index(a, b))]; };
            const double lap = (H(i + 1, j) - 2.0 * H(i, j) + H(i - 1, j)) / (g.hu() * g.hu()) +
                               (H(i, j + 1) - 2.0 * H(i, j) + H(i, j - 1)) / (g.hv() * g.hv());
            out.harmonicity = std::max(out.harmonicity, std::abs(lap));
        }
    if (harmonicity_gate < 0.0) {
        const double h = std::max(g.hu(), g.hv());
        harmonicity_gate = 10.0 * h * h;
    }
    if (out.harmonicity > harmonicity_gate)
        throw HypothesisError("height_pair: harmonicity residual " +
                              std::to_string(out.harmonicity) +
                              " exceeds the gate; h is not harmonic (surface not minimal?)");
    return out;
}

/// Qphi = -4 (dh/dz)^2 dz^2, cross-checked against 4 <phi_z, phi_z> dz^2
/// computed from the horizontal projection phi of the chart.
inline ComplexScalarField hopf_differential(const Chart& chart, const ParameterGrid& g,
                                            const Signature& sig) {
    if (!chart.conformal)
        throw PreconditionError("hopf_differential: chart must be conformal");
    const auto d = detail::height_derivatives(chart, g);
    ComplexScalarField out;
    out.grid = g;
    out.q.resize(static_cast<std::size_t>(g.size()));

    // horizontal chart samples for the phi-route
    std::vector<Vec> x(static_cast<std::size_t>(g.size()));
    if (!chart.has_derivatives())
        for (int i = 0; i < g.nu; ++i)
            for (int j = 0; j < g.nv; ++j)
                x[static_cast<std::size_t>(g.index(i, j))] = chart.eval(g.u(i), g.v(j));

    auto hinner = [&](const Vec& a, const Vec& b) {
        double s = sig.kappa * a(0) * b(0);
        for (int k = 1; k <= sig.n; ++k) s += a(k) * b(k);
        return s;
    };
    for (int i = 0; i < g.nu; ++i)
        for (int j = 0; j < g.nv; ++j) {
            const std::size_t idx = static_cast<std::size_t>(g.index(i, j));
            const Cx dhz = 0.5 * Cx(d.hu[idx], -d.hv[idx]);
            out.q[idx] = -4.0 * dhz * dhz;

            Vec xu, xv;
            if (chart.has_derivatives()) {
                xu = chart.du(g.u(i), g.v(j));
                xv = chart.dv(g.u(i), g.v(j));
            } else {
                auto row = [&](int k) { return x[static_cast<std::size_t>(g.index(k, j))]; };
                auto col = [&](int k) { return x[static_cast<std::size_t>(g.index(i, k))]; };
                xu = fd_first(row, i, g.nu, g.hu());
                xv = fd_first(col, j, g.nv, g.hv());
            }
            // 4 <phi_z, phi_z> with phi_z = (phi_u - i phi_v)/2
            const Cx qphi(hinner(xu, xu) - hinner(xv, xv), -2.0 * hinner(xu, xv));
            out.cross_route_deviation =
                std::max(out.cross_route_deviation, std::abs(out.q[idx] - qphi));
        }
    const double h = std::max(g.hu(), g.hv());
    if (out.cross_route_deviation > 10.0 * h * h)
        throw NumericalError("hopf_differential: h-route and phi-route disagree by " +
                             std::to_string(out.cross_route_deviation));
    return out;
}

/// Max discrete Cauchy-Riemann residual of the coefficient field over the
/// interior; O(h^2) iff the field is holomorphic.
inline double holomorphy_residual(const ComplexScalarField& f) {
    const ParameterGrid& g = f.grid;
    double worst = 0.0;
    auto Q = [&](int i, int j) { return f.q[static_cast<std::size_t>(g.index(i, j))]; };
    for (int i = 1; i < g.nu - 1; ++i)
        for (int j = 1; j < g.nv - 1; ++j) {
            const Cx qu = (Q(i + 1, j) - Q(i - 1, j)) / (2.0 * g.hu());
            const Cx qv = (Q(i, j + 1) - Q(i, j - 1)) / (2.0 * g.hv());
            worst = std::max(worst, std::abs(qu.real() - qv.imag()));
            worst = std::max(worst, std::abs(qu.imag() + qv.real()));
        }
    return worst;
}

/// The Abresch-Rosenberg form evaluated on (d_u, d_u):
/// Q(X,Y) = -(kappa/2)(<T,X><T,Y> - <T,JX><T,JY>)
///          + i (kappa/2)(<T,JX><T,Y> + <T,X><T,JY>).
/// For a conformal minimal chart this is the dz^2 coefficient and equals
/// (kappa/2) Qphi.
inline ComplexScalarField abresch_rosenberg(const FundamentalData& d) {
    d.require_n2("abresch_rosenberg");
    ComplexScalarField out;
    out.grid = d.grid;
    out.q.resize(static_cast<std::size_t>(d.grid.size()));
    const double k2 = 0.5 * d.sig.kappa;
    for (std::size_t idx = 0; idx < out.q.size(); ++idx) {
        const Mat J = detail::rotation_matrix(d.g[idx]);
        const Vec gT = d.g[idx] * d.T[idx];
        const double tx = gT(0);                          // <T, d_u>
        const double tjx = d.T[idx].dot(d.g[idx] * J.col(0));  // <T, J d_u>
        out.q[idx] = Cx(-k2 * (tx * tx - tjx * tjx), k2 * 2.0 * tx * tjx);
    }
    return out;
}

struct RotationLawReport {
    double theta = 0.0;
    double max_height_dev = 0.0;   // h_theta = cos(theta) h + sin(theta) h*
    double max_hopf_dev = 0.0;     // Qphi_theta = e^{-2 i theta} Qphi
    double max_modulus_dev = 0.0;  // |Qphi_theta| = |Qphi|
};

/// Verify the two transformation laws of the associate family by running the
/// full reconstruction pipeline and extracting h_theta and Qphi_theta from
/// the generated immersion.
inline RotationLawReport rotation_law_check(const Chart& chart, double theta,
                                            const ParameterGrid& g, const Signature& sig,
                                            int base_i, int base_j) {
    RotationLawReport rep;
    rep.theta = theta;
    const HeightPair hp = height_pair(chart, g, base_i, base_j);
    const AssociateImmersion assoc = associate_immersion(chart, theta, g, sig, base_i, base_j);

    const int dim = sig.dim();
    const std::size_t base = static_cast<std::size_t>(g.index(base_i, base_j));
    const double ct = std::cos(theta), st = std::sin(theta);
    std::vector<double> ht(static_cast<std::size_t>(g.size()));
    for (std::size_t k = 0; k < ht.size(); ++k) ht[k] = assoc.x_theta.nodes[k](dim - 1);
    for (std::size_t k = 0; k < ht.size(); ++k) {
        const double lhs = ht[k] - ht[base];
        const double rhs = ct * (hp.h[k] - hp.h[base]) + st * (hp.h_star[k] - hp.h_star[base]);
        rep.max_height_dev = std::max(rep.max_height_dev, std::abs(lhs - rhs));
    }

    const ComplexScalarField q0 = hopf_differential(chart, g, sig);
    const Cx phase = std::exp(Cx(0.0, -2.0 * theta));
    auto HT = [&](int i, int j) { return ht[static_cast<std::size_t>(g.index(i, j))]; };
    for (int i = 1; i < g.nu - 1; ++i)
        for (int j = 1; j < g.nv - 1; ++j) {
            const double hu = (HT(i + 1, j) - HT(i - 1, j)) / (2.0 * g.hu());
            const double hv = (HT(i, j + 1) - HT(i, j - 1)) / (2.0 * g.hv());
            const Cx dhz = 0.5 * Cx(hu, -hv);
            const Cx qtheta = -4.0 * dhz * dhz;
            const Cx expect = phase * q0.q[static_cast<std::size_t>(g.index(i, j))];
            rep.max_hopf_dev = std::max(rep.max_hopf_dev, std::abs(qtheta - expect));
            rep.max_modulus_dev = std::max(
                rep.max_modulus_dev, std::abs(std::abs(qtheta) - std::abs(expect)));
        }
    return rep;
}

inline RotationLawReport rotation_law_check(const Chart& chart, double theta,
                                            const ParameterGrid& g, const Signature& sig) {
    return rotation_law_check(chart, theta, g, sig, g.nu / 2, g.nv / 2);
}

}  // namespace mxr
