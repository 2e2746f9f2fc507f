#pragma once

// Rectangular parameter grid and second-order finite-difference helpers.

#include "mxr/ambient.hpp"

namespace mxr {

struct ParameterGrid {
    double u_min = -0.5, u_max = 0.5;
    double v_min = -0.5, v_max = 0.5;
    int nu = 101, nv = 101;

    ParameterGrid() = default;
    ParameterGrid(double umin, double umax, double vmin, double vmax, int nu_, int nv_)
        : u_min(umin), u_max(umax), v_min(vmin), v_max(vmax), nu(nu_), nv(nv_) {
        if (nu < 3 || nv < 3)
            throw ValidationError("ParameterGrid: nu, nv must be >= 3");
        if (!(u_max > u_min) || !(v_max > v_min))
            throw ValidationError("ParameterGrid: empty parameter rectangle");
    }

    double hu() const { return (u_max - u_min) / (nu - 1); }
    double hv() const { return (v_max - v_min) / (nv - 1); }
    double u(int i) const { return u_min + i * hu(); }
    double v(int j) const { return v_min + j * hv(); }
    int index(int i, int j) const { return i * nv + j; }
    int size() const { return nu * nv; }
    bool interior(int i, int j) const {
        return i > 0 && i < nu - 1 && j > 0 && j < nv - 1;
    }
    /// Node closest to the rectangle center.
    int center_index() const { return index(nu / 2, nv / 2); }
};

// Second-order first derivative of a node-sampled field along one index.
// Central in the interior, one-sided at the ends. F(k) returns the sample at
// index k along the line; m is the line length, h the spacing.
template <typename F>
auto fd_first(F&& f, int k, int m, double h) -> decltype(f(0)) {
    if (k > 0 && k < m - 1) return (f(k + 1) - f(k - 1)) / (2.0 * h);
    if (k == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    return (3.0 * f(m - 1) - 4.0 * f(m - 2) + f(m - 3)) / (2.0 * h);
}

// Like fd_first, but avoids sampling the line endpoints when differentiating
// at k = 1 or k = m-2 (one-sided stencils facing the interior). Used for
// fields that are themselves derived by finite differences: their endpoint
// samples carry a different truncation constant, and differencing across the
// jump would cost an order of accuracy.
template <typename F>
auto fd_first_derived(F&& f, int k, int m, double h) -> decltype(f(0)) {
    if (k > 1 && k < m - 2) return (f(k + 1) - f(k - 1)) / (2.0 * h);
    // evaluated at the nearest endpoint-free node (exact there; the true
    // endpoints are never scored)
    if (k <= 1) return (-3.0 * f(1) + 4.0 * f(2) - f(3)) / (2.0 * h);
    return (3.0 * f(m - 2) - 4.0 * f(m - 3) + f(m - 4)) / (2.0 * h);
}

// Second-order second derivative along one index line.
template <typename F>
auto fd_second(F&& f, int k, int m, double h) -> decltype(f(0)) {
    if (k > 0 && k < m - 1) return (f(k + 1) - 2.0 * f(k) + f(k - 1)) / (h * h);
    if (k == 0) return (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h);
    return (2.0 * f(m - 1) - 5.0 * f(m - 2) + 4.0 * f(m - 3) - f(m - 4)) / (h * h);
}

}  // namespace mxr
