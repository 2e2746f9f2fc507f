#pragma once

// Fundamental data (ds^2, S, T, nu) on a parameter grid: construction from an
// explicit chart and evaluation of the compatibility-equation residuals.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "mxr/ambient.hpp"
#include "mxr/grid.hpp"

namespace mxr {

/// Parametrized surface patch in M^n x R, with optional analytic partials.
struct Chart {
    std::function<Vec(double, double)> eval;
    std::function<Vec(double, double)> du, dv, duu, duv, dvv;
    bool conformal = false;

    bool has_derivatives() const { return static_cast<bool>(du); }
};

/// Pointwise fundamental data plus first metric derivatives; payload of the
/// off-grid evaluator attached to analytically known data.
struct DataSample {
    Mat g, dg_u, dg_v, S;
    Vec T;
    double nu = 0.0;
};

struct FundamentalData {
    Signature sig;
    ParameterGrid grid;
    std::vector<Mat> g, S;
    std::vector<Vec> T;
    std::vector<double> nu;

    // Analytic derivative supply, filled by the closed-form catalog route
    // (fully) or the analytic-chart route (metric derivatives only).
    bool has_metric_derivatives = false;         // dg_u, dg_v
    bool has_second_metric_derivatives = false;  // d2g_*
    bool has_data_derivatives = false;           // dS_*, dT_*, dnu_*
    std::vector<Mat> dg_u, dg_v, d2g_uu, d2g_uv, d2g_vv, dS_u, dS_v;
    std::vector<Vec> dT_u, dT_v;
    std::vector<double> dnu_u, dnu_v;

    /// Off-grid evaluator; present when the data has a closed form.
    std::function<DataSample(double, double)> analytic;

    void allocate() {
        const int m = grid.size();
        g.resize(m);
        S.resize(m);
        T.resize(m);
        nu.resize(m);
    }
    void allocate_metric_derivatives() {
        dg_u.resize(grid.size());
        dg_v.resize(grid.size());
        has_metric_derivatives = true;
    }
    void allocate_all_derivatives() {
        allocate_metric_derivatives();
        const int m = grid.size();
        d2g_uu.resize(m);
        d2g_uv.resize(m);
        d2g_vv.resize(m);
        dS_u.resize(m);
        dS_v.resize(m);
        dT_u.resize(m);
        dT_v.resize(m);
        dnu_u.resize(m);
        dnu_v.resize(m);
        has_second_metric_derivatives = true;
        has_data_derivatives = true;
    }

    void require_n2(const char* who) const {
        if (sig.n != 2)
            throw UnsupportedError(std::string(who) +
                                   ": only n = 2 data is supported on a 2D parameter grid");
    }
};

namespace detail {

inline void check_metric(const Mat& g, int i, int j) {
    const double tr = g.trace();
    if (g.determinant() < 1e-12 * tr * tr)
        throw DomainError("degenerate metric at node (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
}

}  // namespace detail

/// Adapted frame (Nbar, e_1, ..., e_n, N) at a point of an immersed surface
/// patch, from the position and the coordinate tangents. Columns are
/// G-orthonormal with det = +1; for kappa = -1 the Nbar column is timelike.
inline Mat adapted_frame_at(const Vec& x, const std::vector<Vec>& tangents,
                            const Signature& sig) {
    const int d = sig.dim();
    Mat A(d, d);
    Vec nbar = x;
    nbar(d - 1) = 0.0;
    A.col(0) = nbar;
    for (std::size_t k = 0; k < tangents.size(); ++k)
        A.col(static_cast<int>(k) + 1) = tangents[k];
    // G-Gram-Schmidt the filled columns.
    Vec eps(d);
    eps(0) = static_cast<double>(sig.kappa);
    for (int i = 1; i < d; ++i) eps(i) = 1.0;
    const int filled = static_cast<int>(tangents.size()) + 1;
    for (int j = 0; j < filled; ++j) {
        Vec c = A.col(j);
        for (int k = 0; k < j; ++k)
            c -= eps(k) * g_inner(c, A.col(k), sig) * A.col(k);
        const double q = eps(j) * g_inner(c, c, sig);
        if (q < 1e-14)
            throw DomainError("adapted_frame_at: degenerate tangent data");
        A.col(j) = c / std::sqrt(q);
    }
    // The normal N spans the G-orthogonal complement of the filled columns.
    const Mat G = sig.g_matrix();
    Mat rows(filled, d);
    for (int k = 0; k < filled; ++k) rows.row(k) = (G * A.col(k)).transpose();
    Eigen::FullPivLU<Mat> lu(rows);
    const Mat ker = lu.kernel();
    if (ker.cols() < 1)
        throw DomainError("adapted_frame_at: no normal direction");
    Vec N = ker.col(0);
    N /= std::sqrt(g_inner(N, N, sig));
    A.col(d - 1) = N;
    if (A.determinant() < 0.0) A.col(d - 1) = -N;
    return A;
}

/// Derive fundamental data from a chart: induced metric, shape operator from
/// second derivatives, tangent projection T and normal component nu of the
/// vertical vector. Uses analytic partials when the chart supplies them,
/// otherwise grid finite differences of the samples.
inline FundamentalData fundamental_from_chart(const Chart& chart, const ParameterGrid& grid,
                                              const Signature& sig) {
    if (sig.n != 2)
        throw UnsupportedError("fundamental_from_chart: charts are 2-parameter, need n = 2");
    const int d = sig.dim();
    FundamentalData data;
    data.sig = sig;
    data.grid = grid;
    data.allocate();

    const int nu_ = grid.nu, nv_ = grid.nv;
    std::vector<Vec> x(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; ++j) {
            Vec p = chart.eval(grid.u(i), grid.v(j));
            if (p.size() != d)
                throw ValidationError("fundamental_from_chart: chart dimension mismatch");
            if (std::abs(horizontal_quadratic(p, sig) - sig.kappa) > 1e-8)
                throw ValidationError("fundamental_from_chart: chart leaves the model at node (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            x[static_cast<std::size_t>(grid.index(i, j))] = p;
        }

    const bool analytic = chart.has_derivatives();
    if (analytic) data.allocate_metric_derivatives();

    auto sample = [&](int i, int j) -> const Vec& {
        return x[static_cast<std::size_t>(grid.index(i, j))];
    };

    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; ++j) {
            const double uu = grid.u(i), vv = grid.v(j);
            Vec xu, xv, xuu, xuv, xvv;
            if (analytic) {
                xu = chart.du(uu, vv);
                xv = chart.dv(uu, vv);
                xuu = chart.duu(uu, vv);
                xuv = chart.duv(uu, vv);
                xvv = chart.dvv(uu, vv);
            } else {
                auto row = [&](int k) { return sample(k, j); };
                auto col = [&](int k) { return sample(i, k); };
                xu = fd_first(row, i, nu_, grid.hu());
                xv = fd_first(col, j, nv_, grid.hv());
                xuu = fd_second(row, i, nu_, grid.hu());
                xvv = fd_second(col, j, nv_, grid.hv());
                auto dv_of_row = [&](int k) {
                    auto colk = [&](int l) { return sample(k, l); };
                    return fd_first(colk, j, nv_, grid.hv());
                };
                xuv = fd_first(dv_of_row, i, nu_, grid.hu());
            }

            Mat g(2, 2);
            g(0, 0) = g_inner(xu, xu, sig);
            g(0, 1) = g(1, 0) = g_inner(xu, xv, sig);
            g(1, 1) = g_inner(xv, xv, sig);
            detail::check_metric(g, i, j);

            const Mat A = adapted_frame_at(sample(i, j), {xu, xv}, sig);
            const Vec N = A.col(d - 1);

            Mat B(2, 2);
            B(0, 0) = g_inner(xuu, N, sig);
            B(0, 1) = B(1, 0) = g_inner(xuv, N, sig);
            B(1, 1) = g_inner(xvv, N, sig);

            const int idx = grid.index(i, j);
            data.g[idx] = g;
            data.S[idx] = g.ldlt().solve(B);
            Vec rhs(2);
            rhs << xu(d - 1), xv(d - 1);
            data.T[idx] = g.ldlt().solve(rhs);
            data.nu[idx] = N(d - 1);

            if (analytic) {
                Mat dgu(2, 2), dgv(2, 2);
                dgu(0, 0) = 2.0 * g_inner(xuu, xu, sig);
                dgu(0, 1) = dgu(1, 0) = g_inner(xuu, xv, sig) + g_inner(xu, xuv, sig);
                dgu(1, 1) = 2.0 * g_inner(xuv, xv, sig);
                dgv(0, 0) = 2.0 * g_inner(xuv, xu, sig);
                dgv(0, 1) = dgv(1, 0) = g_inner(xuv, xv, sig) + g_inner(xu, xvv, sig);
                dgv(1, 1) = 2.0 * g_inner(xvv, xv, sig);
                data.dg_u[idx] = dgu;
                data.dg_v[idx] = dgv;
            }
        }

    if (analytic) {
        // Off-grid evaluator: everything above is pointwise in the chart.
        Chart c = chart;
        Signature s = sig;
        data.analytic = [c, s, d](double uu, double vv) {
            DataSample out;
            const Vec xu = c.du(uu, vv), xv = c.dv(uu, vv);
            const Vec xuu = c.duu(uu, vv), xuv = c.duv(uu, vv), xvv = c.dvv(uu, vv);
            Mat g(2, 2);
            g(0, 0) = g_inner(xu, xu, s);
            g(0, 1) = g(1, 0) = g_inner(xu, xv, s);
            g(1, 1) = g_inner(xv, xv, s);
            const Mat A = adapted_frame_at(c.eval(uu, vv), {xu, xv}, s);
            const Vec N = A.col(d - 1);
            Mat B(2, 2);
            B(0, 0) = g_inner(xuu, N, s);
            B(0, 1) = B(1, 0) = g_inner(xuv, N, s);
            B(1, 1) = g_inner(xvv, N, s);
            out.g = g;
            out.S = g.ldlt().solve(B);
            Vec rhs(2);
            rhs << xu(d - 1), xv(d - 1);
            out.T = g.ldlt().solve(rhs);
            out.nu = N(d - 1);
            Mat dgu(2, 2), dgv(2, 2);
            dgu(0, 0) = 2.0 * g_inner(xuu, xu, s);
            dgu(0, 1) = dgu(1, 0) = g_inner(xuu, xv, s) + g_inner(xu, xuv, s);
            dgu(1, 1) = 2.0 * g_inner(xuv, xv, s);
            dgv(0, 0) = 2.0 * g_inner(xuv, xu, s);
            dgv(0, 1) = dgv(1, 0) = g_inner(xuv, xv, s) + g_inner(xu, xvv, s);
            dgv(1, 1) = 2.0 * g_inner(xvv, xv, s);
            out.dg_u = dgu;
            out.dg_v = dgv;
            return out;
        };
    }
    return data;
}

// ---------------------------------------------------------------------------
// Christoffel symbols and curvature of the grid metric.

using Christoffels = std::array<Mat, 2>;  // Gamma[k](a,b) = Gamma^k_{ab}

inline Christoffels christoffels_from(const Mat& g, const Mat& dgu, const Mat& dgv) {
    const Mat ginv = g.inverse();
    const Mat* dg[2] = {&dgu, &dgv};
    Christoffels Gamma{Mat::Zero(2, 2), Mat::Zero(2, 2)};
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l)
                    s += ginv(k, l) *
                         ((*dg[a])(b, l) + (*dg[b])(a, l) - (*dg[l])(a, b));
                Gamma[k](a, b) = 0.5 * s;
            }
    return Gamma;
}

namespace detail {

inline Mat fd_metric_du(const FundamentalData& d, int i, int j) {
    auto row = [&](int k) { return d.g[d.grid.index(k, j)]; };
    return fd_first(row, i, d.grid.nu, d.grid.hu());
}
inline Mat fd_metric_dv(const FundamentalData& d, int i, int j) {
    auto col = [&](int k) { return d.g[d.grid.index(i, k)]; };
    return fd_first(col, j, d.grid.nv, d.grid.hv());
}

}  // namespace detail

/// Metric first derivatives at a node: stored analytic fields when present,
/// grid finite differences otherwise.
inline std::pair<Mat, Mat> metric_derivatives_at(const FundamentalData& d, int i, int j) {
    const int idx = d.grid.index(i, j);
    if (d.has_metric_derivatives) return {d.dg_u[idx], d.dg_v[idx]};
    return {detail::fd_metric_du(d, i, j), detail::fd_metric_dv(d, i, j)};
}

inline Christoffels christoffels_at(const FundamentalData& d, int i, int j) {
    auto [dgu, dgv] = metric_derivatives_at(d, i, j);
    return christoffels_from(d.g[d.grid.index(i, j)], dgu, dgv);
}

/// d/dc Gamma from analytic metric derivatives: dg_c plus the second
/// derivatives d(dg_u)/dc, d(dg_v)/dc.
inline Christoffels dchristoffels_from(const Mat& g, const Mat& dgu, const Mat& dgv,
                                       const Mat& dg_c, const Mat& d2g_cu, const Mat& d2g_cv) {
    const Mat ginv = g.inverse();
    const Mat dginv = -ginv * dg_c * ginv;
    const Mat* dg[2] = {&dgu, &dgv};
    const Mat* d2g[2] = {&d2g_cu, &d2g_cv};
    Christoffels out{Mat::Zero(2, 2), Mat::Zero(2, 2)};
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l) {
                    s += dginv(k, l) *
                         ((*dg[a])(b, l) + (*dg[b])(a, l) - (*dg[l])(a, b));
                    s += ginv(k, l) *
                         ((*d2g[a])(b, l) + (*d2g[b])(a, l) - (*d2g[l])(a, b));
                }
                out[k](a, b) = 0.5 * s;
            }
    return out;
}

/// Gauss curvature of the node metric. Analytic when second metric
/// derivatives are stored, finite differences of the Christoffel field
/// otherwise.
inline double gauss_curvature_at(const FundamentalData& d, int i, int j) {
    const int idx = d.grid.index(i, j);
    Christoffels dG_u, dG_v;
    if (d.has_second_metric_derivatives) {
        dG_u = dchristoffels_from(d.g[idx], d.dg_u[idx], d.dg_v[idx], d.dg_u[idx],
                                  d.d2g_uu[idx], d.d2g_uv[idx]);
        dG_v = dchristoffels_from(d.g[idx], d.dg_u[idx], d.dg_v[idx], d.dg_v[idx],
                                  d.d2g_uv[idx], d.d2g_vv[idx]);
    } else {
        auto gamma_at = [&](int a, int b) { return christoffels_at(d, a, b); };
        auto row = [&](int k) {
            Christoffels c = gamma_at(k, j);
            Mat m(2, 4);
            m << c[0], c[1];
            return m;
        };
        auto col = [&](int k) {
            Christoffels c = gamma_at(i, k);
            Mat m(2, 4);
            m << c[0], c[1];
            return m;
        };
        // The Gamma field is itself produced by finite differences when the
        // metric derivatives are not stored; use endpoint-avoiding stencils
        // then, so the one-sided truncation jump at the boundary is not
        // differentiated (it would cost an order of accuracy at i = 1).
        Mat mu, mv;
        if (d.has_metric_derivatives) {
            mu = fd_first(row, i, d.grid.nu, d.grid.hu());
            mv = fd_first(col, j, d.grid.nv, d.grid.hv());
        } else {
            mu = fd_first_derived(row, i, d.grid.nu, d.grid.hu());
            mv = fd_first_derived(col, j, d.grid.nv, d.grid.hv());
        }
        dG_u = {mu.leftCols(2), mu.rightCols(2)};
        dG_v = {mv.leftCols(2), mv.rightCols(2)};
    }
    const Christoffels Gamma = christoffels_at(d, i, j);
    // R(du,dv)du with the convention R(X,Y)Z = D_Y D_X Z - D_X D_Y Z + D_[X,Y] Z;
    // this convention gives K = <R(du,dv)du,dv>/det g = +1 on the unit sphere.
    Vec R(2);
    for (int l = 0; l < 2; ++l) {
        double s = dG_v[l](0, 0) - dG_u[l](1, 0);
        for (int p = 0; p < 2; ++p)
            s += Gamma[l](1, p) * Gamma[p](0, 0) - Gamma[l](0, p) * Gamma[p](1, 0);
        R(l) = s;
    }
    const Mat& g = d.g[idx];
    const double num = R(0) * g(0, 1) + R(1) * g(1, 1);
    return num / g.determinant();
}

// ---------------------------------------------------------------------------
// Residuals of the compatibility equations.

/// K - det S - kappa(1 - |T|^2) per node (n = 2 scalar Gauss equation).
inline std::vector<double> gauss_residual(const FundamentalData& d) {
    d.require_n2("gauss_residual");
    std::vector<double> out(static_cast<std::size_t>(d.grid.size()));
    for (int i = 0; i < d.grid.nu; ++i)
        for (int j = 0; j < d.grid.nv; ++j) {
            const int idx = d.grid.index(i, j);
            const double K = gauss_curvature_at(d, i, j);
            const double tt = d.T[idx].dot(d.g[idx] * d.T[idx]);
            out[static_cast<std::size_t>(idx)] =
                K - d.S[idx].determinant() - d.sig.kappa * (1.0 - tt);
        }
    return out;
}

namespace detail {

inline std::pair<Mat, Mat> shape_derivatives_at(const FundamentalData& d, int i, int j) {
    const int idx = d.grid.index(i, j);
    if (d.has_data_derivatives) return {d.dS_u[idx], d.dS_v[idx]};
    auto row = [&](int k) { return d.S[d.grid.index(k, j)]; };
    auto col = [&](int k) { return d.S[d.grid.index(i, k)]; };
    return {fd_first(row, i, d.grid.nu, d.grid.hu()),
            fd_first(col, j, d.grid.nv, d.grid.hv())};
}

inline std::pair<Vec, Vec> tangent_derivatives_at(const FundamentalData& d, int i, int j) {
    const int idx = d.grid.index(i, j);
    if (d.has_data_derivatives) return {d.dT_u[idx], d.dT_v[idx]};
    auto row = [&](int k) { return d.T[d.grid.index(k, j)]; };
    auto col = [&](int k) { return d.T[d.grid.index(i, k)]; };
    return {fd_first(row, i, d.grid.nu, d.grid.hu()),
            fd_first(col, j, d.grid.nv, d.grid.hv())};
}

inline std::pair<double, double> nu_derivatives_at(const FundamentalData& d, int i, int j) {
    const int idx = d.grid.index(i, j);
    if (d.has_data_derivatives) return {d.dnu_u[idx], d.dnu_v[idx]};
    auto row = [&](int k) { return d.nu[d.grid.index(k, j)]; };
    auto col = [&](int k) { return d.nu[d.grid.index(i, k)]; };
    return {fd_first(row, i, d.grid.nu, d.grid.hu()),
            fd_first(col, j, d.grid.nv, d.grid.hv())};
}

}  // namespace detail

/// g-norm of D_u(S dv) - D_v(S du) - kappa nu(<dv,T> du - <du,T> dv) per node.
inline std::vector<double> codazzi_residual(const FundamentalData& d) {
    d.require_n2("codazzi_residual");
    std::vector<double> out(static_cast<std::size_t>(d.grid.size()), 0.0);
    for (int i = 0; i < d.grid.nu; ++i)
        for (int j = 0; j < d.grid.nv; ++j) {
            const int idx = d.grid.index(i, j);
            const Christoffels Gamma = christoffels_at(d, i, j);
            auto [dSu, dSv] = detail::shape_derivatives_at(d, i, j);
            const Mat& S = d.S[idx];
            const Vec eta = d.g[idx] * d.T[idx];
            Vec r(2);
            for (int k = 0; k < 2; ++k) {
                // D_u (S dv)^k - D_v (S du)^k
                double a = dSu(k, 1) - dSv(k, 0);
                for (int p = 0; p < 2; ++p)
                    a += Gamma[k](0, p) * S(p, 1) - Gamma[k](1, p) * S(p, 0);
                const double rhs =
                    d.sig.kappa * d.nu[idx] * (eta(1) * (k == 0) - eta(0) * (k == 1));
                r(k) = a - rhs;
            }
            out[static_cast<std::size_t>(idx)] = std::sqrt(r.dot(d.g[idx] * r));
        }
    return out;
}

struct StructureResiduals {
    std::vector<double> nabla_T, d_nu, unit_norm, d_eta;
};

/// |D_i T - nu S di|_g, |d nu(di) + <S di,T>|, ||T|^2 + nu^2 - 1| and the
/// antisymmetrized mixed difference of eta per node.
inline StructureResiduals structure_residuals(const FundamentalData& d) {
    d.require_n2("structure_residuals");
    const std::size_t m = static_cast<std::size_t>(d.grid.size());
    StructureResiduals out;
    out.nabla_T.assign(m, 0.0);
    out.d_nu.assign(m, 0.0);
    out.unit_norm.assign(m, 0.0);
    out.d_eta.assign(m, 0.0);
    for (int i = 0; i < d.grid.nu; ++i)
        for (int j = 0; j < d.grid.nv; ++j) {
            const int idx = d.grid.index(i, j);
            const Christoffels Gamma = christoffels_at(d, i, j);
            auto [dTu, dTv] = detail::tangent_derivatives_at(d, i, j);
            auto [dnu_u_, dnu_v_] = detail::nu_derivatives_at(d, i, j);
            const Mat& S = d.S[idx];
            const Mat& g = d.g[idx];
            const Vec& T = d.T[idx];
            const Vec* dT[2] = {&dTu, &dTv};
            double worst_T = 0.0, worst_nu = 0.0;
            const double dnu_dir[2] = {dnu_u_, dnu_v_};
            for (int a = 0; a < 2; ++a) {
                Vec r(2);
                for (int k = 0; k < 2; ++k) {
                    double cov = (*dT[a])(k);
                    for (int p = 0; p < 2; ++p) cov += Gamma[k](a, p) * T(p);
                    r(k) = cov - d.nu[idx] * S(k, a);
                }
                worst_T = std::max(worst_T, std::sqrt(r.dot(g * r)));
                const double sT = S.col(a).dot(g * T);
                worst_nu = std::max(worst_nu, std::abs(dnu_dir[a] + sT));
            }
            out.nabla_T[static_cast<std::size_t>(idx)] = worst_T;
            out.d_nu[static_cast<std::size_t>(idx)] = worst_nu;
            out.unit_norm[static_cast<std::size_t>(idx)] =
                std::abs(T.dot(g * T) + d.nu[idx] * d.nu[idx] - 1.0);
            // d eta(du,dv) = d_u eta_v - d_v eta_u with eta = g T.
            auto [dgu, dgv] = metric_derivatives_at(d, i, j);
            const double eu = (dgu * T + g * dTu)(1);
            const double ev = (dgv * T + g * dTv)(0);
            out.d_eta[static_cast<std::size_t>(idx)] = std::abs(eu - ev);
        }
    return out;
}

struct ResidualEntry {
    double max = 0.0, rms = 0.0;
};

struct ResidualReport {
    ResidualEntry gauss, codazzi, nabla_T, d_nu, unit_norm, d_eta;
    bool pass = false;
    double tolerance = 0.0;

    double worst() const {
        double w = gauss.max;
        for (double v : {codazzi.max, nabla_T.max, d_nu.max, unit_norm.max, d_eta.max})
            w = std::max(w, v);
        return w;
    }

    /// Name of the equation with the largest max-norm residual.
    std::string worst_name() const {
        const std::pair<const char*, double> entries[] = {
            {"gauss", gauss.max},       {"codazzi", codazzi.max}, {"nabla_T", nabla_T.max},
            {"d_nu", d_nu.max},         {"unit_norm", unit_norm.max},
            {"d_eta", d_eta.max}};
        const char* name = entries[0].first;
        double w = entries[0].second;
        for (const auto& [n, v] : entries)
            if (v > w) {
                w = v;
                name = n;
            }
        return name;
    }

    /// Names of every equation whose max-norm residual exceeds the tolerance.
    std::vector<std::string> failing_names() const {
        const std::pair<const char*, double> entries[] = {
            {"gauss", gauss.max},       {"codazzi", codazzi.max}, {"nabla_T", nabla_T.max},
            {"d_nu", d_nu.max},         {"unit_norm", unit_norm.max},
            {"d_eta", d_eta.max}};
        std::vector<std::string> out;
        for (const auto& [n, v] : entries)
            if (v > tolerance) out.emplace_back(n);
        return out;
    }
};

namespace detail {

inline ResidualEntry score_interior(const std::vector<double>& field, const ParameterGrid& g) {
    ResidualEntry e;
    double ss = 0.0;
    int count = 0;
    for (int i = 1; i < g.nu - 1; ++i)
        for (int j = 1; j < g.nv - 1; ++j) {
            const double v = std::abs(field[static_cast<std::size_t>(g.index(i, j))]);
            e.max = std::max(e.max, v);
            ss += v * v;
            ++count;
        }
    e.rms = count ? std::sqrt(ss / count) : 0.0;
    return e;
}

}  // namespace detail

/// Aggregate all compatibility residuals over interior nodes.
inline ResidualReport check_compatibility(const FundamentalData& d, double tol) {
    ResidualReport rep;
    rep.tolerance = tol;
    rep.gauss = detail::score_interior(gauss_residual(d), d.grid);
    rep.codazzi = detail::score_interior(codazzi_residual(d), d.grid);
    const StructureResiduals sr = structure_residuals(d);
    rep.nabla_T = detail::score_interior(sr.nabla_T, d.grid);
    rep.d_nu = detail::score_interior(sr.d_nu, d.grid);
    rep.unit_norm = detail::score_interior(sr.unit_norm, d.grid);
    rep.d_eta = detail::score_interior(sr.d_eta, d.grid);
    rep.pass = rep.worst() <= tol;
    return rep;
}

}  // namespace mxr
