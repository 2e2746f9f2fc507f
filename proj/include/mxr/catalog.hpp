#pragma once

// Closed-form charts, profile-ODE solvers and fundamental data for the
// explicit minimal surfaces in S^2 x R and H^2 x R (helicoids, unduloids,
// catenoids, the horocycle-foliated surface C_0, generalized catenoids,
// slices, vertical cylinders/planes), plus conjugacy verification.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "mxr/ambient.hpp"
#include "mxr/fundamental.hpp"
#include "mxr/grid.hpp"

namespace mxr {

enum class Family {
    S2_Helicoid,
    S2_Unduloid,
    H2_Helicoid,
    H2_Catenoid,
    H2_Horocycle,  // the surface C_0
    H2_GenCatenoid,
    Slice,
    S2_Cylinder,
    H2_VerticalPlane,
};

struct CatalogSpec {
    Family kind = Family::S2_Helicoid;
    double parameter = 1.0;  // beta, alpha, gamma, or the slice height t
    int slice_kappa = 1;     // ambient for Family::Slice

    CatalogSpec() = default;
    CatalogSpec(Family k, double p, int slice_k = 1)
        : kind(k), parameter(p), slice_kappa(slice_k) {}
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::S2_Helicoid: return "s2-helicoid";
        case Family::S2_Unduloid: return "s2-unduloid";
        case Family::H2_Helicoid: return "h2-helicoid";
        case Family::H2_Catenoid: return "h2-catenoid";
        case Family::H2_Horocycle: return "h2-horocycle";
        case Family::H2_GenCatenoid: return "h2-gencatenoid";
        case Family::Slice: return "slice";
        case Family::S2_Cylinder: return "s2-cylinder";
        case Family::H2_VerticalPlane: return "h2-vertical-plane";
    }
    return "?";
}

inline Signature signature_of(const CatalogSpec& s) {
    switch (s.kind) {
        case Family::S2_Helicoid:
        case Family::S2_Unduloid:
        case Family::S2_Cylinder: return Signature(1, 2);
        case Family::Slice: return Signature(s.slice_kappa, 2);
        default: return Signature(-1, 2);
    }
}

inline void validate(const CatalogSpec& s) {
    const double p = s.parameter;
    switch (s.kind) {
        case Family::S2_Helicoid:
        case Family::H2_Helicoid:
            if (p == 0.0) throw ValidationError("helicoid requires beta != 0");
            break;
        case Family::S2_Unduloid:
            if (std::abs(p) <= 1.0)
                throw ValidationError("unduloid requires alpha > 1 or alpha < -1");
            break;
        case Family::H2_Catenoid:
            if (p == 0.0) throw ValidationError("catenoid requires alpha != 0");
            break;
        case Family::H2_GenCatenoid:
            if (!(std::abs(p) > 0.0 && std::abs(p) < 1.0))
                throw ValidationError("generalized catenoid requires 0 < |gamma| < 1");
            break;
        case Family::Slice:
            if (s.slice_kappa != 1 && s.slice_kappa != -1)
                throw ValidationError("slice requires kappa = +1 or -1");
            break;
        default: break;
    }
}

// ---------------------------------------------------------------------------
// Profile ODE machinery.

namespace detail {

struct ProfileODE {
    double p0 = 0.0, q0 = 1.0;
    double c2 = 0.0;  // coefficient of the trig/hyperbolic term
    enum Kind { Sin, Sinh, Cosh } kind = Sin;

    // second-order right-hand side p'' = F(p) and its derivative
    double F(double p) const {
        switch (kind) {
            case Sin: return 0.5 * c2 * std::sin(2.0 * p);
            default: return 0.5 * c2 * std::sinh(2.0 * p);
        }
    }
    double dF(double p) const {
        switch (kind) {
            case Sin: return c2 * std::cos(2.0 * p);
            default: return c2 * std::cosh(2.0 * p);
        }
    }
    // value q^2 should take along the solution
    double first_integral(double p) const {
        switch (kind) {
            case Sin: {
                const double s = std::sin(p);
                return 1.0 + c2 * s * s - (q0 * q0 == 0.0 ? 1.0 : 0.0);  // see below
            }
            default: return 0.0;  // overridden below
        }
    }
};

}  // namespace detail

/// Numerically integrated profile (phi, psi or chi) with its derivative.
struct ProfileSolution {
    double step = 1e-4;
    double halfspan = 0.0;
    int nside = 0;                  // samples on each side of u = 0
    std::vector<double> p, q;       // index k corresponds to u = (k - nside)*step
    double first_integral_drift = 0.0;

    // ODE closure for off-sample evaluation
    double c2 = 0.0;
    int kind = 0;  // 0 sin, 1 sinh (helicoid/catenoid), 2 cosh (gen catenoid uses sinh too)
    double I0 = 0.0;  // q^2 - I(p) = 0 along the solution, I(p) = I0 + c2*w(p)^2

    double rhs(double pp) const {
        return kind == 0 ? 0.5 * c2 * std::sin(2.0 * pp) : 0.5 * c2 * std::sinh(2.0 * pp);
    }
    double rhs_prime(double pp) const {
        return kind == 0 ? c2 * std::cos(2.0 * pp) : c2 * std::cosh(2.0 * pp);
    }
    double integral_value(double pp) const {
        // q^2 along the solution: helicoids 1 + c2 sin^2/sinh^2, unduloid and
        // catenoid c2 sin^2/sinh^2 - 1, generalized catenoid c2 cosh^2 - 1.
        const double w = (kind == 0)   ? std::sin(pp)
                         : (kind == 1) ? std::sinh(pp)
                                       : std::cosh(pp);
        return I0 + c2 * w * w;
    }
    double rhs_general(double pp) const {
        // kind 2 (cosh first integral) has the same second-order form as sinh
        return kind == 0 ? 0.5 * c2 * std::sin(2.0 * pp) : 0.5 * c2 * std::sinh(2.0 * pp);
    }

    std::pair<double, double> at_index(int k) const {
        return {p[static_cast<std::size_t>(k)], q[static_cast<std::size_t>(k)]};
    }

    /// (profile, profile') at arbitrary u: one RK4 step from the nearest
    /// stored sample at or below u.
    std::pair<double, double> eval(double u) const {
        if (std::abs(u) > halfspan + 0.5 * step)
            throw DomainError("ProfileSolution::eval: u outside the integrated span");
        double pos = (u + halfspan) / step;
        int k = static_cast<int>(std::floor(pos));
        k = std::clamp(k, 0, 2 * nside);
        const double dt = u - (k - nside) * step;
        double pp = p[static_cast<std::size_t>(k)], qq = q[static_cast<std::size_t>(k)];
        if (dt != 0.0) rk4(pp, qq, dt);
        return {pp, qq};
    }

    void rk4(double& pp, double& qq, double dt) const {
        const double k1p = qq, k1q = rhs(pp);
        const double k2p = qq + 0.5 * dt * k1q, k2q = rhs(pp + 0.5 * dt * k1p);
        const double k3p = qq + 0.5 * dt * k2q, k3q = rhs(pp + 0.5 * dt * k2p);
        const double k4p = qq + dt * k3q, k4q = rhs(pp + dt * k3p);
        pp += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        qq += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    }
};

// ---------------------------------------------------------------------------
// Quadrature for the domain half-widths.

namespace detail {

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

/// Half-width u0 of the maximal profile domain; finite only for the H^2 x R
/// families. Improper integrals are evaluated after the substitution
/// x = cosh s, which removes both endpoint singularities.
inline double domain_halfwidth(const CatalogSpec& spec) {
    validate(spec);
    const double cutoff = 40.0;  // integrands decay like e^{-s}
    const double tol = 1e-12;
    switch (spec.kind) {
        case Family::H2_Catenoid: {
            const double a2 = spec.parameter * spec.parameter;
            return detail::adaptive_simpson(
                [a2](double s) {
                    const double c = std::cosh(s);
                    return 1.0 / std::sqrt(c * c + a2);
                },
                0.0, cutoff, tol);
        }
        case Family::H2_GenCatenoid: {
            const double g2 = spec.parameter * spec.parameter;
            return detail::adaptive_simpson(
                [g2](double s) {
                    const double c = std::cosh(s);
                    return 1.0 / std::sqrt(c * c - g2);
                },
                0.0, cutoff, tol);
        }
        case Family::H2_Helicoid: {
            const double b2 = spec.parameter * spec.parameter;
            return detail::adaptive_simpson(
                [b2](double s) {
                    const double sh = std::sinh(s);
                    return 1.0 / std::sqrt(1.0 + b2 * sh * sh);
                },
                0.0, cutoff, tol);
        }
        default:
            throw UnsupportedError(std::string("domain_halfwidth: not defined for ") +
                                   family_name(spec.kind));
    }
}

inline bool has_profile(Family f) {
    return f == Family::S2_Helicoid || f == Family::S2_Unduloid ||
           f == Family::H2_Helicoid || f == Family::H2_Catenoid ||
           f == Family::H2_GenCatenoid;
}

inline bool has_bounded_domain(Family f) {
    return f == Family::H2_Helicoid || f == Family::H2_Catenoid ||
           f == Family::H2_GenCatenoid || f == Family::H2_Horocycle;
}

inline double default_halfspan(const CatalogSpec& spec) {
    if (spec.kind == Family::H2_Horocycle) return 0.95 * (M_PI / 2.0);
    if (has_bounded_domain(spec.kind)) return 0.95 * domain_halfwidth(spec);
    return 1.3;
}

/// Integrate the second-order profile ODE with the paper's initial
/// conditions, outward from u = 0 in both directions.
inline ProfileSolution solve_profile(const CatalogSpec& spec, double step = 1e-4,
                                     double halfspan = -1.0) {
    validate(spec);
    if (!has_profile(spec.kind))
        throw UnsupportedError(std::string("solve_profile: ") + family_name(spec.kind) +
                               " has no profile ODE");
    if (halfspan < 0.0) halfspan = default_halfspan(spec);
    if (has_bounded_domain(spec.kind)) {
        const double u0 = domain_halfwidth(spec);
        if (halfspan >= u0)
            throw DomainError("solve_profile: halfspan " + std::to_string(halfspan) +
                              " is not inside the maximal domain (-u0, u0), u0 = " +
                              std::to_string(u0));
    }
    if (!(step > 0.0) || !(halfspan > 0.0))
        throw ValidationError("solve_profile: step and halfspan must be positive");

    ProfileSolution sol;
    sol.step = step;
    const double par = spec.parameter;
    const double par2 = par * par;
    double p0 = 0.0, q0 = 1.0;
    switch (spec.kind) {
        case Family::S2_Helicoid:
            sol.kind = 0;
            sol.c2 = par2;
            sol.I0 = 1.0;  // q^2 = 1 + beta^2 sin^2 p
            break;
        case Family::S2_Unduloid:
            sol.kind = 0;
            sol.c2 = par2;
            sol.I0 = -1.0;  // q^2 = alpha^2 sin^2 p - 1
            p0 = std::asin(1.0 / std::abs(par));
            q0 = 0.0;
            break;
        case Family::H2_Helicoid:
            sol.kind = 1;
            sol.c2 = par2;
            sol.I0 = 1.0;  // q^2 = 1 + beta^2 sinh^2 p
            break;
        case Family::H2_Catenoid:
            sol.kind = 1;
            sol.c2 = par2;
            sol.I0 = -1.0;  // q^2 = alpha^2 sinh^2 p - 1
            p0 = std::asinh(1.0 / std::abs(par));
            q0 = 0.0;
            break;
        case Family::H2_GenCatenoid:
            sol.kind = 2;
            sol.c2 = par2;
            sol.I0 = -1.0;  // q^2 = gamma^2 cosh^2 p - 1
            p0 = std::acosh(1.0 / std::abs(par));
            q0 = 0.0;
            break;
        default: break;
    }
    sol.nside = static_cast<int>(std::llround(halfspan / step));
    if (sol.nside < 1) sol.nside = 1;
    sol.halfspan = sol.nside * step;
    const int total = 2 * sol.nside + 1;
    sol.p.assign(static_cast<std::size_t>(total), 0.0);
    sol.q.assign(static_cast<std::size_t>(total), 0.0);
    sol.p[static_cast<std::size_t>(sol.nside)] = p0;
    sol.q[static_cast<std::size_t>(sol.nside)] = q0;
    for (int dir : {+1, -1}) {
        double pp = p0, qq = q0;
        for (int k = 1; k <= sol.nside; ++k) {
            sol.rk4(pp, qq, dir * step);
            const int idx = sol.nside + dir * k;
            sol.p[static_cast<std::size_t>(idx)] = pp;
            sol.q[static_cast<std::size_t>(idx)] = qq;
        }
    }
    for (int k = 0; k < total; ++k) {
        const double drift =
            std::abs(sol.q[static_cast<std::size_t>(k)] * sol.q[static_cast<std::size_t>(k)] -
                     sol.integral_value(sol.p[static_cast<std::size_t>(k)]));
        sol.first_integral_drift = std::max(sol.first_integral_drift, drift);
    }
    if (sol.first_integral_drift > 1e-6)
        throw NumericalError("solve_profile: first-integral drift " +
                             std::to_string(sol.first_integral_drift) +
                             " indicates the step size is too large");
    return sol;
}

// ---------------------------------------------------------------------------
// Pointwise closed-form data for the conformally parametrized families.

/// Fundamental data of a conformal catalog surface as scalar functions of u:
/// metric lam2*(du^2+dv^2), S = -m * M, T = tau * d(t_dir), plus u-derivatives.
struct ConformalData {
    double lam2 = 1.0, dlam2 = 0.0, d2lam2 = 0.0;
    double m = 0.0, dm = 0.0;
    double tau = 0.0, dtau = 0.0;
    double nu = 0.0, dnu = 0.0;
    double M00 = 1.0, M01 = 0.0;  // M = [[M00, M01],[M01, -M00]]
    int t_dir = 0;
};

inline bool is_conformal_family(Family f) {
    return has_profile(f) || f == Family::H2_Horocycle;
}

inline ConformalData conformal_data_at(const CatalogSpec& spec, const ProfileSolution* prof,
                                       double u) {
    ConformalData d;
    const double par = spec.parameter;
    if (spec.kind == Family::H2_Horocycle) {
        const double c = std::cos(u), s = std::sin(u);
        const double sec2 = 1.0 / (c * c);
        d.lam2 = sec2;
        d.dlam2 = 2.0 * sec2 * (s / c);
        d.d2lam2 = 4.0 * sec2 * (s * s) / (c * c) + 2.0 * sec2 * sec2;
        d.m = c;
        d.dm = -s;
        d.tau = c * c;
        d.dtau = -2.0 * s * c;
        d.nu = s;
        d.dnu = c;
        d.M00 = 1.0;
        d.M01 = 0.0;
        d.t_dir = 0;
        return d;
    }
    if (!prof) throw PreconditionError("conformal_data_at: profile required");
    auto [p, q] = prof->eval(u);
    const double F = prof->rhs(p);
    const double dFq = prof->rhs_prime(p) * q;  // d/du of F(p)
    switch (spec.kind) {
        case Family::S2_Helicoid: {
            const double sp = std::sin(p), cp = std::cos(p);
            d.lam2 = q * q;
            d.dlam2 = 2.0 * q * F;
            d.d2lam2 = 2.0 * F * F + 2.0 * q * dFq;
            d.m = par * cp / (q * q);
            d.dm = -par * sp / q - 2.0 * par * cp * F / (q * q * q);
            d.tau = 1.0 / (q * q);
            d.dtau = -2.0 * F / (q * q * q);
            d.nu = par * sp / q;
            d.dnu = par * (cp * q * q - sp * F) / (q * q);
            d.M00 = 0.0;
            d.M01 = 1.0;
            d.t_dir = 1;
            break;
        }
        case Family::H2_Helicoid: {
            const double sp = std::sinh(p), cp = std::cosh(p);
            d.lam2 = q * q;
            d.dlam2 = 2.0 * q * F;
            d.d2lam2 = 2.0 * F * F + 2.0 * q * dFq;
            d.m = par * cp / (q * q);
            d.dm = par * sp / q - 2.0 * par * cp * F / (q * q * q);
            d.tau = 1.0 / (q * q);
            d.dtau = -2.0 * F / (q * q * q);
            d.nu = par * sp / q;
            d.dnu = par * (cp * q * q - sp * F) / (q * q);
            d.M00 = 0.0;
            d.M01 = 1.0;
            d.t_dir = 1;
            break;
        }
        case Family::S2_Unduloid: {
            const double sp = std::sin(p), cp = std::cos(p);
            const double L = 1.0 + q * q, dL = 2.0 * q * F;
            d.lam2 = L;
            d.dlam2 = dL;
            d.d2lam2 = 2.0 * F * F + 2.0 * q * dFq;
            d.m = par * cp / L;
            d.dm = par * (-sp * q * L - cp * dL) / (L * L);
            d.tau = 1.0 / L;
            d.dtau = -dL / (L * L);
            d.nu = q / (par * sp);
            d.dnu = (F * sp - q * q * cp) / (par * sp * sp);
            d.t_dir = 0;
            break;
        }
        case Family::H2_Catenoid: {
            const double sp = std::sinh(p), cp = std::cosh(p);
            const double L = 1.0 + q * q, dL = 2.0 * q * F;
            d.lam2 = L;
            d.dlam2 = dL;
            d.d2lam2 = 2.0 * F * F + 2.0 * q * dFq;
            d.m = par * cp / L;
            d.dm = par * (sp * q * L - cp * dL) / (L * L);
            d.tau = 1.0 / L;
            d.dtau = -dL / (L * L);
            d.nu = q / (par * sp);
            d.dnu = (F * sp - q * q * cp) / (par * sp * sp);
            d.t_dir = 0;
            break;
        }
        case Family::H2_GenCatenoid: {
            const double sp = std::sinh(p), cp = std::cosh(p);
            const double L = 1.0 + q * q, dL = 2.0 * q * F;
            d.lam2 = L;
            d.dlam2 = dL;
            d.d2lam2 = 2.0 * F * F + 2.0 * q * dFq;
            d.m = par * sp / L;
            d.dm = par * (cp * q * L - sp * dL) / (L * L);
            d.tau = 1.0 / L;
            d.dtau = -dL / (L * L);
            d.nu = q / (par * cp);
            d.dnu = (F * cp - q * q * sp) / (par * cp * cp);
            d.t_dir = 0;
            break;
        }
        default:
            throw UnsupportedError("conformal_data_at: not a conformal catalog family");
    }
    return d;
}

inline DataSample data_sample_from_conformal(const ConformalData& c) {
    DataSample s;
    Mat M(2, 2);
    M << c.M00, c.M01, c.M01, -c.M00;
    s.g = c.lam2 * Mat::Identity(2, 2);
    s.dg_u = c.dlam2 * Mat::Identity(2, 2);
    s.dg_v = Mat::Zero(2, 2);
    s.S = -c.m * M;
    s.T = Vec::Zero(2);
    s.T(c.t_dir) = c.tau;
    s.nu = c.nu;
    return s;
}

// ---------------------------------------------------------------------------
// Charts.

namespace detail {

inline Vec v4(double a, double b, double c, double d) {
    Vec x(4);
    x << a, b, c, d;
    return x;
}

}  // namespace detail

/// The displayed chart of a catalog surface, with analytic first and second
/// partial derivatives (profile derivatives via the profile ODE itself).
inline Chart chart_of(const CatalogSpec& spec, std::shared_ptr<const ProfileSolution> prof) {
    validate(spec);
    Chart c;
    c.conformal = is_conformal_family(spec.kind);
    const double par = spec.parameter;
    using detail::v4;
    switch (spec.kind) {
        case Family::S2_Helicoid: {
            if (!prof) throw PreconditionError("chart_of: profile required");
            c.eval = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(std::sin(p) * std::cos(par * v), std::sin(p) * std::sin(par * v),
                          std::cos(p), v);
            };
            c.du = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(q * std::cos(p) * std::cos(par * v), q * std::cos(p) * std::sin(par * v),
                          -q * std::sin(p), 0.0);
            };
            c.dv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(-par * std::sin(p) * std::sin(par * v),
                          par * std::sin(p) * std::cos(par * v), 0.0, 1.0);
            };
            c.duu = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                const double F = prof->rhs(p);
                const double A = F * std::cos(p) - q * q * std::sin(p);
                const double B = -F * std::sin(p) - q * q * std::cos(p);
                return v4(A * std::cos(par * v), A * std::sin(par * v), B, 0.0);
            };
            c.duv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(-par * q * std::cos(p) * std::sin(par * v),
                          par * q * std::cos(p) * std::cos(par * v), 0.0, 0.0);
            };
            c.dvv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(-par * par * std::sin(p) * std::cos(par * v),
                          -par * par * std::sin(p) * std::sin(par * v), 0.0, 0.0);
            };
            break;
        }
        case Family::S2_Unduloid: {
            if (!prof) throw PreconditionError("chart_of: profile required");
            c.eval = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(std::sin(p) * std::cos(par * v), std::sin(p) * std::sin(par * v),
                          std::cos(p), u);
            };
            c.du = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(q * std::cos(p) * std::cos(par * v), q * std::cos(p) * std::sin(par * v),
                          -q * std::sin(p), 1.0);
            };
            c.dv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(-par * std::sin(p) * std::sin(par * v),
                          par * std::sin(p) * std::cos(par * v), 0.0, 0.0);
            };
            c.duu = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                const double F = prof->rhs(p);
                const double A = F * std::cos(p) - q * q * std::sin(p);
                const double B = -F * std::sin(p) - q * q * std::cos(p);
                return v4(A * std::cos(par * v), A * std::sin(par * v), B, 0.0);
            };
            c.duv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(-par * q * std::cos(p) * std::sin(par * v),
                          par * q * std::cos(p) * std::cos(par * v), 0.0, 0.0);
            };
            c.dvv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(-par * par * std::sin(p) * std::cos(par * v),
                          -par * par * std::sin(p) * std::sin(par * v), 0.0, 0.0);
            };
            break;
        }
        case Family::H2_Helicoid:
        case Family::H2_Catenoid: {
            if (!prof) throw PreconditionError("chart_of: profile required");
            const bool helicoid = spec.kind == Family::H2_Helicoid;
            c.eval = [prof, par, helicoid](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(std::cosh(p), std::sinh(p) * std::cos(par * v),
                          std::sinh(p) * std::sin(par * v), helicoid ? v : u);
            };
            c.du = [prof, par, helicoid](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(q * std::sinh(p), q * std::cosh(p) * std::cos(par * v),
                          q * std::cosh(p) * std::sin(par * v), helicoid ? 0.0 : 1.0);
            };
            c.dv = [prof, par, helicoid](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(0.0, -par * std::sinh(p) * std::sin(par * v),
                          par * std::sinh(p) * std::cos(par * v), helicoid ? 1.0 : 0.0);
            };
            c.duu = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                const double F = prof->rhs(p);
                const double A = F * std::sinh(p) + q * q * std::cosh(p);
                const double B = F * std::cosh(p) + q * q * std::sinh(p);
                return v4(A, B * std::cos(par * v), B * std::sin(par * v), 0.0);
            };
            c.duv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(0.0, -par * q * std::cosh(p) * std::sin(par * v),
                          par * q * std::cosh(p) * std::cos(par * v), 0.0);
            };
            c.dvv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(0.0, -par * par * std::sinh(p) * std::cos(par * v),
                          -par * par * std::sinh(p) * std::sin(par * v), 0.0);
            };
            break;
        }
        case Family::H2_GenCatenoid: {
            if (!prof) throw PreconditionError("chart_of: profile required");
            c.eval = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(std::cosh(p) * std::cosh(par * v), std::sinh(p),
                          std::cosh(p) * std::sinh(par * v), u);
            };
            c.du = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(q * std::sinh(p) * std::cosh(par * v), q * std::cosh(p),
                          q * std::sinh(p) * std::sinh(par * v), 1.0);
            };
            c.dv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(par * std::cosh(p) * std::sinh(par * v), 0.0,
                          par * std::cosh(p) * std::cosh(par * v), 0.0);
            };
            c.duu = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                const double F = prof->rhs(p);
                const double A = F * std::sinh(p) + q * q * std::cosh(p);
                const double B = F * std::cosh(p) + q * q * std::sinh(p);
                return v4(A * std::cosh(par * v), B, A * std::sinh(par * v), 0.0);
            };
            c.duv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                return v4(par * q * std::sinh(p) * std::sinh(par * v), 0.0,
                          par * q * std::sinh(p) * std::cosh(par * v), 0.0);
            };
            c.dvv = [prof, par](double u, double v) {
                auto [p, q] = prof->eval(u);
                (void)q;
                return v4(par * par * std::cosh(p) * std::cosh(par * v), 0.0,
                          par * par * std::cosh(p) * std::sinh(par * v), 0.0);
            };
            break;
        }
        case Family::H2_Horocycle: {
            c.eval = [](double u, double v) {
                const double cu = std::cos(u);
                return v4((v * v + 1.0) / (2.0 * cu) + cu / 2.0, v / cu,
                          (v * v - 1.0) / (2.0 * cu) + cu / 2.0, u);
            };
            c.du = [](double u, double v) {
                const double cu = std::cos(u), su = std::sin(u);
                const double dsec = su / (cu * cu);  // d/du (1/cos u)
                return v4((v * v + 1.0) / 2.0 * dsec - su / 2.0, v * dsec,
                          (v * v - 1.0) / 2.0 * dsec - su / 2.0, 1.0);
            };
            c.dv = [](double u, double v) {
                const double cu = std::cos(u);
                return v4(v / cu, 1.0 / cu, v / cu, 0.0);
            };
            c.duu = [](double u, double v) {
                const double cu = std::cos(u), su = std::sin(u);
                const double d2sec = (cu * cu + 2.0 * su * su) / (cu * cu * cu);
                return v4((v * v + 1.0) / 2.0 * d2sec - cu / 2.0, v * d2sec,
                          (v * v - 1.0) / 2.0 * d2sec - cu / 2.0, 0.0);
            };
            c.duv = [](double u, double v) {
                const double cu = std::cos(u), su = std::sin(u);
                const double dsec = su / (cu * cu);
                return v4(v * dsec, dsec, v * dsec, 0.0);
            };
            c.dvv = [](double u, double v) {
                const double cu = std::cos(u);
                (void)v;
                return v4(1.0 / cu, 0.0, 1.0 / cu, 0.0);
            };
            break;
        }
        case Family::Slice: {
            const double t = par;
            if (spec.slice_kappa == 1) {
                c.eval = [t](double u, double v) {
                    return v4(std::cos(u) * std::cos(v), std::cos(u) * std::sin(v), std::sin(u),
                              t);
                };
                c.du = [](double u, double v) {
                    return v4(-std::sin(u) * std::cos(v), -std::sin(u) * std::sin(v), std::cos(u),
                              0.0);
                };
                c.dv = [](double u, double v) {
                    return v4(-std::cos(u) * std::sin(v), std::cos(u) * std::cos(v), 0.0, 0.0);
                };
                c.duu = [](double u, double v) {
                    return v4(-std::cos(u) * std::cos(v), -std::cos(u) * std::sin(v),
                              -std::sin(u), 0.0);
                };
                c.duv = [](double u, double v) {
                    return v4(std::sin(u) * std::sin(v), -std::sin(u) * std::cos(v), 0.0, 0.0);
                };
                c.dvv = [](double u, double v) {
                    return v4(-std::cos(u) * std::cos(v), -std::cos(u) * std::sin(v), 0.0, 0.0);
                };
            } else {
                c.eval = [t](double u, double v) {
                    return v4(std::cosh(u) * std::cosh(v), std::sinh(u),
                              std::cosh(u) * std::sinh(v), t);
                };
                c.du = [](double u, double v) {
                    return v4(std::sinh(u) * std::cosh(v), std::cosh(u),
                              std::sinh(u) * std::sinh(v), 0.0);
                };
                c.dv = [](double u, double v) {
                    return v4(std::cosh(u) * std::sinh(v), 0.0, std::cosh(u) * std::cosh(v), 0.0);
                };
                c.duu = [](double u, double v) {
                    return v4(std::cosh(u) * std::cosh(v), std::sinh(u),
                              std::cosh(u) * std::sinh(v), 0.0);
                };
                c.duv = [](double u, double v) {
                    return v4(std::sinh(u) * std::sinh(v), 0.0, std::sinh(u) * std::cosh(v), 0.0);
                };
                c.dvv = [](double u, double v) {
                    return v4(std::cosh(u) * std::cosh(v), 0.0, std::cosh(u) * std::sinh(v), 0.0);
                };
            }
            break;
        }
        case Family::S2_Cylinder: {
            c.conformal = true;
            c.eval = [](double u, double v) { return v4(std::cos(u), std::sin(u), 0.0, v); };
            c.du = [](double u, double v) {
                (void)v;
                return v4(-std::sin(u), std::cos(u), 0.0, 0.0);
            };
            c.dv = [](double, double) { return v4(0.0, 0.0, 0.0, 1.0); };
            c.duu = [](double u, double v) {
                (void)v;
                return v4(-std::cos(u), -std::sin(u), 0.0, 0.0);
            };
            c.duv = [](double, double) { return v4(0.0, 0.0, 0.0, 0.0); };
            c.dvv = [](double, double) { return v4(0.0, 0.0, 0.0, 0.0); };
            break;
        }
        case Family::H2_VerticalPlane: {
            c.conformal = true;
            c.eval = [](double u, double v) { return v4(std::cosh(u), std::sinh(u), 0.0, v); };
            c.du = [](double u, double v) {
                (void)v;
                return v4(std::sinh(u), std::cosh(u), 0.0, 0.0);
            };
            c.dv = [](double, double) { return v4(0.0, 0.0, 0.0, 1.0); };
            c.duu = [](double u, double v) {
                (void)v;
                return v4(std::cosh(u), std::sinh(u), 0.0, 0.0);
            };
            c.duv = [](double, double) { return v4(0.0, 0.0, 0.0, 0.0); };
            c.dvv = [](double, double) { return v4(0.0, 0.0, 0.0, 0.0); };
            break;
        }
    }
    return c;
}

/// A spec together with its signature, profile (if any) and analytic chart.
struct Surface {
    CatalogSpec spec;
    Signature sig;
    std::shared_ptr<const ProfileSolution> profile;
    Chart chart;
};

inline Surface make_surface(const CatalogSpec& spec, double profile_step = 1e-4,
                            double halfspan = -1.0) {
    validate(spec);
    Surface s;
    s.spec = spec;
    s.sig = signature_of(spec);
    if (has_profile(spec.kind))
        s.profile = std::make_shared<const ProfileSolution>(
            solve_profile(spec, profile_step, halfspan));
    s.chart = chart_of(spec, s.profile);
    return s;
}

/// Default parameter grid: [-0.5, 0.5]^2 at spacing h, with the u-range
/// clamped to 0.9 * u0 for the families with a bounded profile domain.
inline ParameterGrid grid_for(const CatalogSpec& spec, double h = 1e-2,
                              double halfwidth = 0.5) {
    double uhw = halfwidth;
    if (has_bounded_domain(spec.kind)) {
        const double u0 = (spec.kind == Family::H2_Horocycle) ? M_PI / 2.0
                                                              : domain_halfwidth(spec);
        uhw = std::min(uhw, 0.9 * u0);
    }
    const int nu = 2 * static_cast<int>(std::llround(uhw / h)) + 1;
    const int nv = 2 * static_cast<int>(std::llround(halfwidth / h)) + 1;
    return ParameterGrid(-uhw, uhw, -halfwidth, halfwidth, std::max(nu, 3), std::max(nv, 3));
}

// ---------------------------------------------------------------------------
// Closed-form fundamental data.

inline FundamentalData fundamental_closed_form(const Surface& surf, const ParameterGrid& grid) {
    const CatalogSpec& spec = surf.spec;
    validate(spec);
    FundamentalData d;
    d.sig = surf.sig;
    d.grid = grid;
    d.allocate();
    d.allocate_all_derivatives();

    if (is_conformal_family(spec.kind)) {
        const ProfileSolution* prof = surf.profile.get();
        for (int i = 0; i < grid.nu; ++i) {
            const ConformalData c = conformal_data_at(spec, prof, grid.u(i));
            Mat M(2, 2);
            M << c.M00, c.M01, c.M01, -c.M00;
            for (int j = 0; j < grid.nv; ++j) {
                const int idx = grid.index(i, j);
                d.g[idx] = c.lam2 * Mat::Identity(2, 2);
                d.dg_u[idx] = c.dlam2 * Mat::Identity(2, 2);
                d.dg_v[idx] = Mat::Zero(2, 2);
                d.d2g_uu[idx] = c.d2lam2 * Mat::Identity(2, 2);
                d.d2g_uv[idx] = Mat::Zero(2, 2);
                d.d2g_vv[idx] = Mat::Zero(2, 2);
                d.S[idx] = -c.m * M;
                d.dS_u[idx] = -c.dm * M;
                d.dS_v[idx] = Mat::Zero(2, 2);
                d.T[idx] = Vec::Zero(2);
                d.T[idx](c.t_dir) = c.tau;
                d.dT_u[idx] = Vec::Zero(2);
                d.dT_u[idx](c.t_dir) = c.dtau;
                d.dT_v[idx] = Vec::Zero(2);
                d.nu[idx] = c.nu;
                d.dnu_u[idx] = c.dnu;
                d.dnu_v[idx] = 0.0;
            }
        }
        auto prof_ptr = surf.profile;
        CatalogSpec sp = spec;
        d.analytic = [sp, prof_ptr](double uu, double vv) {
            (void)vv;
            return data_sample_from_conformal(conformal_data_at(sp, prof_ptr.get(), uu));
        };
        return d;
    }

    // Slices and vertical cylinders/planes: S = 0 and data in closed form.
    const bool slice = spec.kind == Family::Slice;
    const int kappa = d.sig.kappa;
    // Slice normal sign fixed by the det = +1 adapted-frame convention of the
    // chart route (computed once; constant over the slice).
    double slice_nu = 0.0;
    if (slice) slice_nu = (kappa == 1) ? -1.0 : 1.0;
    auto fill = [&](double uu) {
        DataSample s;
        s.S = Mat::Zero(2, 2);
        s.dg_v = Mat::Zero(2, 2);
        if (slice && kappa == 1) {
            const double c = std::cos(uu);
            s.g = Mat::Identity(2, 2);
            s.g(1, 1) = c * c;
            s.dg_u = Mat::Zero(2, 2);
            s.dg_u(1, 1) = -std::sin(2.0 * uu);
            s.T = Vec::Zero(2);
            s.nu = slice_nu;
        } else if (slice) {
            const double c = std::cosh(uu);
            s.g = Mat::Identity(2, 2);
            s.g(1, 1) = c * c;
            s.dg_u = Mat::Zero(2, 2);
            s.dg_u(1, 1) = std::sinh(2.0 * uu);
            s.T = Vec::Zero(2);
            s.nu = slice_nu;
        } else {
            s.g = Mat::Identity(2, 2);
            s.dg_u = Mat::Zero(2, 2);
            s.T = Vec::Zero(2);
            s.T(1) = 1.0;
            s.nu = 0.0;
        }
        return s;
    };
    for (int i = 0; i < grid.nu; ++i) {
        const double uu = grid.u(i);
        const DataSample s = fill(uu);
        Mat d2uu = Mat::Zero(2, 2);
        if (slice)
            d2uu(1, 1) = (kappa == 1) ? -2.0 * std::cos(2.0 * uu) : 2.0 * std::cosh(2.0 * uu);
        for (int j = 0; j < grid.nv; ++j) {
            const int idx = grid.index(i, j);
            d.g[idx] = s.g;
            d.dg_u[idx] = s.dg_u;
            d.dg_v[idx] = s.dg_v;
            d.d2g_uu[idx] = d2uu;
            d.d2g_uv[idx] = Mat::Zero(2, 2);
            d.d2g_vv[idx] = Mat::Zero(2, 2);
            d.S[idx] = Mat::Zero(2, 2);
            d.dS_u[idx] = Mat::Zero(2, 2);
            d.dS_v[idx] = Mat::Zero(2, 2);
            d.T[idx] = s.T;
            d.dT_u[idx] = Vec::Zero(2);
            d.dT_v[idx] = Vec::Zero(2);
            d.nu[idx] = s.nu;
            d.dnu_u[idx] = 0.0;
            d.dnu_v[idx] = 0.0;
        }
    }
    d.analytic = [fill](double uu, double vv) {
        (void)vv;
        return fill(uu);
    };
    return d;
}

inline FundamentalData fundamental_closed_form(const CatalogSpec& spec,
                                               const ParameterGrid& grid,
                                               double profile_step = 1e-4) {
    double halfspan = -1.0;
    if (has_profile(spec.kind)) {
        const double need = std::max(std::abs(grid.u_min), std::abs(grid.u_max)) + 0.05;
        halfspan = std::max(need, 0.5);
        if (has_bounded_domain(spec.kind))
            halfspan = std::min(halfspan, 0.97 * domain_halfwidth(spec));
    }
    return fundamental_closed_form(make_surface(spec, profile_step, halfspan), grid);
}

// ---------------------------------------------------------------------------
// Conjugate pairs.

struct ConjugateReport {
    double relation_residual = 0.0;
    double max_y = 0.0;        // shared-ODE quantity agreement
    double max_metric = 0.0;   // conformal factor equality
    double max_S = 0.0;        // S_b - J S_a
    double max_T = 0.0;        // T_b - J T_a
    double max_nu = 0.0;       // nu_b - nu_a
    double max_ode = 0.0;      // residual of (y')^2 = (y^2 - a_eff^2)(y^2 - b^2)
    bool pass = false;

    double worst() const {
        return std::max({max_y, max_metric, max_S, max_T, max_nu, max_ode});
    }
};

/// Verify one of the paper's four conjugacy propositions pointwise along the
/// common u-grid. `a` is the rotational/parabolic/hyperbolic side, `b` the
/// helicoid; either argument order is accepted.
inline ConjugateReport conjugate_pair_check(CatalogSpec a, CatalogSpec b,
                                            double u_halfwidth = 0.5, int samples = 101,
                                            double profile_step = 1e-4, double tol = 1e-8) {
    if (a.kind == Family::S2_Helicoid || a.kind == Family::H2_Helicoid) std::swap(a, b);
    validate(a);
    validate(b);
    const bool s2 = a.kind == Family::S2_Unduloid;
    if ((s2 && b.kind != Family::S2_Helicoid) ||
        (!s2 && b.kind != Family::H2_Helicoid))
        throw PreconditionError("conjugate_pair_check: second surface must be the helicoid of "
                                "the same ambient space");
    const double alpha = a.parameter, beta = b.parameter;
    double relation = 0.0, a_eff2 = 0.0;
    switch (a.kind) {
        case Family::S2_Unduloid:
            relation = alpha * alpha - 1.0 - beta * beta;
            a_eff2 = alpha * alpha;
            break;
        case Family::H2_Catenoid:
            relation = beta * beta - 1.0 - alpha * alpha;
            a_eff2 = alpha * alpha;
            break;
        case Family::H2_Horocycle:
            relation = beta - 1.0;
            a_eff2 = 0.0;
            break;
        case Family::H2_GenCatenoid:
            relation = beta * beta + alpha * alpha - 1.0;
            a_eff2 = -alpha * alpha;  // shared ODE (y')^2 = (y^2 + gamma^2)(y^2 - beta^2)
            break;
        default:
            throw PreconditionError("conjugate_pair_check: unsupported pair");
    }
    ConjugateReport rep;
    rep.relation_residual = std::abs(relation);
    if (a.kind != Family::H2_Horocycle) {
        const bool same_sign = alpha * beta > 0.0;
        if (rep.relation_residual > 1e-12 || !same_sign)
            throw PreconditionError("conjugate_pair_check: parameter relation violated");
    } else if (rep.relation_residual > 1e-12) {
        throw PreconditionError("conjugate_pair_check: C_0 is conjugate to the helicoid beta=1");
    }

    std::shared_ptr<const ProfileSolution> prof_a, prof_b;
    auto make_prof = [&](const CatalogSpec& s) -> std::shared_ptr<const ProfileSolution> {
        if (!has_profile(s.kind)) return nullptr;
        double hs = u_halfwidth + 0.05;
        if (has_bounded_domain(s.kind)) hs = std::min(hs, 0.97 * domain_halfwidth(s));
        if (hs < u_halfwidth)
            throw DomainError("conjugate_pair_check: u range exceeds the profile domain");
        return std::make_shared<const ProfileSolution>(solve_profile(s, profile_step, hs));
    };
    prof_a = make_prof(a);
    prof_b = make_prof(b);

    Mat J(2, 2);
    J << 0.0, -1.0, 1.0, 0.0;
    const double beta2 = beta * beta;
    for (int k = 0; k < samples; ++k) {
        const double u = -u_halfwidth + 2.0 * u_halfwidth * k / (samples - 1);
        const ConformalData ca = conformal_data_at(a, prof_a.get(), u);
        const ConformalData cb = conformal_data_at(b, prof_b.get(), u);
        const double ya = ca.m * ca.lam2, yb = cb.m * cb.lam2;
        rep.max_y = std::max(rep.max_y, std::abs(ya - yb));
        rep.max_metric = std::max(rep.max_metric, std::abs(ca.lam2 - cb.lam2));
        Mat Ma(2, 2), Mb(2, 2);
        Ma << ca.M00, ca.M01, ca.M01, -ca.M00;
        Mb << cb.M00, cb.M01, cb.M01, -cb.M00;
        const Mat Sa = -ca.m * Ma, Sb = -cb.m * Mb;
        rep.max_S = std::max(rep.max_S, (J * Sa - Sb).cwiseAbs().maxCoeff());
        Vec Ta = Vec::Zero(2), Tb = Vec::Zero(2);
        Ta(ca.t_dir) = ca.tau;
        Tb(cb.t_dir) = cb.tau;
        rep.max_T = std::max(rep.max_T, (J * Ta - Tb).cwiseAbs().maxCoeff());
        rep.max_nu = std::max(rep.max_nu, std::abs(ca.nu - cb.nu));
        for (const ConformalData* c : {&ca, &cb}) {
            const double y = c->m * c->lam2;
            const double dy = c->dm * c->lam2 + c->m * c->dlam2;
            const double res = dy * dy - (y * y - a_eff2) * (y * y - beta2);
            rep.max_ode = std::max(rep.max_ode, std::abs(res));
        }
    }
    rep.pass = rep.worst() <= tol;
    return rep;
}

}  // namespace mxr
