#include <catch2/catch_amalgamated.hpp>

#include "mxr/catalog.hpp"
#include "mxr/frames.hpp"

using namespace mxr;

namespace {

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

Mat base_frame_for(const FundamentalData& d, int bi, int bj) {
    const int idx = d.grid.index(bi, bj);
    const Mat P = detail::orthonormal_frame(d.g[idx]);
    const Vec eta = d.g[idx] * d.T[idx];
    Vec zrow(4);
    zrow << 0.0, P.col(0).dot(eta), P.col(1).dot(eta), d.nu[idx];
    return complete_frame_with_last_row(zrow, d.sig);
}

}  // namespace

TEST_CASE("connection forms take values in the isometry algebra") {
    for (auto spec : {CatalogSpec(Family::S2_Helicoid, 1.0), CatalogSpec(Family::H2_Catenoid, 1.0)}) {
        FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.05));
        ConnectionField c = connection_from_data(d);
        for (int k = 0; k < d.grid.size(); ++k) {
            CHECK(so_defect(c.omega_u[k], d.sig) < 1e-12);
            CHECK(so_defect(c.omega_v[k], d.sig) < 1e-12);
        }
    }
}

TEST_CASE("flatness residual of compatible data") {
    CatalogSpec spec(Family::S2_Unduloid, std::sqrt(2.0));
    SECTION("analytic route is exact to quadrature error") {
        FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.02));
        CHECK(max_of(flatness_residual(connection_from_data(d))) < 1e-9);
    }
    SECTION("finite-difference route converges at order 2") {
        Surface surf = make_surface(spec);
        auto worst_at = [&](double h) {
            FundamentalData full = fundamental_from_chart(surf.chart, grid_for(spec, h), surf.sig);
            FundamentalData d;
            d.sig = full.sig;
            d.grid = full.grid;
            d.allocate();
            d.g = full.g;
            d.S = full.S;
            d.T = full.T;
            d.nu = full.nu;
            // interior max: the gate used by integrate_frame (the one-sided
            // boundary stencils are only first-order accurate)
            const std::vector<double> flat = flatness_residual(connection_from_data(d));
            double worst = 0.0;
            for (int i = 1; i < d.grid.nu - 1; ++i)
                for (int j = 1; j < d.grid.nv - 1; ++j)
                    worst = std::max(worst, flat[static_cast<std::size_t>(d.grid.index(i, j))]);
            return worst;
        };
        const double ratio = worst_at(2e-2) / worst_at(1e-2);
        INFO("ratio " << ratio);
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
}

TEST_CASE("frame transport stays in the group and satisfies the Z-row") {
    CatalogSpec spec(Family::H2_Helicoid, 1.0);
    FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.02));
    ConnectionField c = connection_from_data(d);
    const int bi = d.grid.nu / 2, bj = d.grid.nv / 2;
    FrameField f = integrate_frame(c, d, bi, bj, base_frame_for(d, bi, bj));
    double defect = 0.0;
    for (const Mat& A : f.A) defect = std::max(defect, frame_defect(A, d.sig));
    CHECK(defect < 1e-9);
    CHECK(max_of(z_row_residual(f, d)) < 1e-8);
    // holonomy around a coordinate rectangle vanishes for flat connections
    CHECK(rectangle_holonomy(c, f.A0, bi - 5, bj - 5, bi + 5, bj + 5) < 1e-9);
}

TEST_CASE("reconstruction reproduces the catalog chart up to an ambient isometry") {
    for (auto spec : {CatalogSpec(Family::S2_Helicoid, 1.0), CatalogSpec(Family::H2_Catenoid, 1.0),
                      CatalogSpec(Family::H2_Horocycle, 0.0)}) {
        Surface surf = make_surface(spec);
        ParameterGrid grid = grid_for(spec, 0.02);
        FundamentalData d = fundamental_closed_form(surf, grid);
        ConnectionField c = connection_from_data(d);
        const int bi = grid.nu / 2, bj = grid.nv / 2;
        FrameField f = integrate_frame(c, d, bi, bj, base_frame_for(d, bi, bj));
        ReconstructedChart r = reconstruct_immersion(f, d, 0.0);
        CHECK(r.max_projection_displacement < 1e-8);
        const double dev = compare_up_to_isometry(sampled_from_chart(surf.chart, grid, surf.sig, bi, bj),
                                                  sampled_from_reconstruction(r, f));
        INFO(family_name(spec.kind) << " deviation " << dev);
        CHECK(dev < 1e-8);
    }
}

TEST_CASE("sign flips produce congruent immersions") {
    CatalogSpec spec(Family::S2_Helicoid, 1.0);
    ParameterGrid grid = grid_for(spec, 0.02);
    FundamentalData d = fundamental_closed_form(spec, grid);
    const int bi = grid.nu / 2, bj = grid.nv / 2;
    for (int which : {1, 2, 3}) {
        INFO(sign_flip_description(which));
        FundamentalData fd = apply_sign_flip(d, which);
        ConnectionField c = connection_from_data(fd);
        FrameField f = integrate_frame(c, fd, bi, bj, base_frame_for(fd, bi, bj));
        ReconstructedChart r = reconstruct_immersion(f, fd, 0.0);
        CHECK(r.max_projection_displacement < 1e-8);
        CHECK(max_of(z_row_residual(f, fd)) < 1e-8);
    }
}

TEST_CASE("incompatible connection data is rejected before integration") {
    CatalogSpec spec(Family::S2_Helicoid, 1.0);
    FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.02));
    ConnectionField c = connection_from_data(d);
    const int bi = d.grid.nu / 2, bj = d.grid.nv / 2;
    const Mat A0 = base_frame_for(d, bi, bj);

    SECTION("zeroed shape-operator block breaks flatness") {
        ConnectionField broken = c;
        broken.analytic = nullptr;
        for (std::vector<Mat>* f : {&broken.omega_u, &broken.omega_v})
            for (Mat& W : *f) {
                W(3, 1) = W(3, 2) = 0.0;
                W(1, 3) = W(2, 3) = 0.0;
            }
        double worst = 0.0;
        for (double x : flatness_residual(broken)) worst = std::max(worst, x);
        CHECK(worst > 1e-1);
        CHECK_THROWS_AS(integrate_frame(broken, d, bi, bj, A0), IntegrabilityError);
    }
    SECTION("base frame must satisfy the Z-row condition") {
        Mat bad = Mat::Identity(4, 4);
        if (d.sig.kappa == 1) {
            // identity is in the group but its last row is not the Z-row here
            CHECK_THROWS_AS(integrate_frame(c, d, bi, bj, bad), PreconditionError);
        }
    }
    SECTION("base frame must lie in the group") {
        Mat bad = A0;
        bad(0, 0) += 0.1;
        CHECK_THROWS_AS(integrate_frame(c, d, bi, bj, bad), PreconditionError);
    }
}
