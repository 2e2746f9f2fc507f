#include <catch2/catch_amalgamated.hpp>

#include "mxr/associate.hpp"
#include "mxr/catalog.hpp"
#include "mxr/hopf.hpp"

using namespace mxr;

namespace {

Chart vertical_reflection(const Chart& c, double t0) {
    // sigma o x for sigma the reflection through the slice at height t0
    Chart r = c;
    auto flip = [](Vec x) {
        x(3) = -x(3);
        return x;
    };
    r.eval = [c, flip, t0](double u, double v) {
        Vec x = flip(c.eval(u, v));
        x(3) += 2.0 * t0;
        return x;
    };
    r.du = [c, flip](double u, double v) { return flip(c.du(u, v)); };
    r.dv = [c, flip](double u, double v) { return flip(c.dv(u, v)); };
    r.duu = nullptr;
    r.duv = nullptr;
    r.dvv = nullptr;
    return r;
}

}  // namespace

TEST_CASE("data rotation preserves the structure") {
    CatalogSpec spec(Family::S2_Unduloid, std::sqrt(2.0));
    FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.02));
    for (double theta : {0.4, M_PI / 2.0, 2.5}) {
        FundamentalData r = rotate_data(d, theta);
        CHECK(max_trace_S(r) < 1e-10);
        ResidualReport rep = check_compatibility(r, 1e-8);
        INFO("theta " << theta << " worst " << rep.worst());
        CHECK(rep.pass);
        // nu and the metric are untouched
        for (int k = 0; k < d.grid.size(); ++k) {
            CHECK(r.nu[k] == d.nu[k]);
            CHECK((r.g[k] - d.g[k]).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("rotation requires minimality") {
    CatalogSpec spec(Family::S2_Unduloid, std::sqrt(2.0));
    FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.05));
    for (Mat& S : d.S) S(0, 0) += 0.1;  // trace 0.1: not minimal
    CHECK_THROWS_AS(rotate_data(d, 1.0), HypothesisError);
}

TEST_CASE("associate immersion at theta = 0 reproduces the surface") {
    CatalogSpec spec(Family::S2_Unduloid, std::sqrt(2.0));
    Surface surf = make_surface(spec);
    ParameterGrid grid = grid_for(spec, 0.02);
    AssociateImmersion a = associate_immersion(surf.chart, 0.0, grid, surf.sig);
    const double dev =
        compare_up_to_isometry(sampled_from_chart(surf.chart, grid, surf.sig, a.frames.base_i,
                                                  a.frames.base_j),
                               sampled_from_reconstruction(a.x_theta, a.frames));
    INFO("deviation " << dev);
    CHECK(dev < 1e-8);
}

TEST_CASE("conjugate immersion of the unduloid is the spherical helicoid") {
    CatalogSpec spec(Family::S2_Unduloid, std::sqrt(2.0));
    Surface surf = make_surface(spec);
    ParameterGrid grid = grid_for(spec, 0.02);
    AssociateImmersion a = associate_immersion(surf.chart, M_PI / 2.0, grid, surf.sig);
    Surface heli = make_surface(CatalogSpec(Family::S2_Helicoid, 1.0));
    const double dev =
        compare_up_to_isometry(sampled_from_chart(heli.chart, grid, surf.sig, a.frames.base_i,
                                                  a.frames.base_j),
                               sampled_from_reconstruction(a.x_theta, a.frames));
    INFO("deviation " << dev);
    CHECK(dev < 1e-8);
}

TEST_CASE("associate immersion at theta = pi is the vertical reflection") {
    CatalogSpec spec(Family::S2_Helicoid, 1.0);
    Surface surf = make_surface(spec);
    ParameterGrid grid = grid_for(spec, 0.02);
    AssociateImmersion a = associate_immersion(surf.chart, M_PI, grid, surf.sig);
    const int bi = a.frames.base_i, bj = a.frames.base_j;
    const double t0 = surf.chart.eval(grid.u(bi), grid.v(bj))(3);
    Chart refl = vertical_reflection(surf.chart, t0);
    const double dev = compare_up_to_isometry(sampled_from_chart(refl, grid, surf.sig, bi, bj),
                                              sampled_from_reconstruction(a.x_theta, a.frames));
    INFO("deviation " << dev);
    CHECK(dev < 1e-8);
}

TEST_CASE("hopf differential of the unduloid") {
    CatalogSpec spec(Family::S2_Unduloid, std::sqrt(2.0));
    Surface surf = make_surface(spec);
    ParameterGrid grid = grid_for(spec, 0.02);

    ComplexScalarField Q = hopf_differential(surf.chart, grid, surf.sig);
    CHECK(Q.cross_route_deviation < 1e-8);
    CHECK(holomorphy_residual(Q) < 1e-8);
    // constant on the whole grid (the coordinates are the canonical ones)
    for (const Cx& q : Q.q) {
        CHECK(std::abs(q - Q.q.front()) < 1e-10);
    }

    // the Abresch-Rosenberg differential is kappa/2 times the Hopf
    // differential of the vertical height
    FundamentalData d = fundamental_closed_form(surf, grid);
    ComplexScalarField AR = abresch_rosenberg(d);
    double worst = 0.0;
    for (std::size_t k = 0; k < AR.q.size(); ++k)
        worst = std::max(worst, std::abs(AR.q[k] - 0.5 * double(surf.sig.kappa) * Q.q[k]));
    CHECK(worst < 1e-10);
}

TEST_CASE("height pair and harmonicity") {
    CatalogSpec spec(Family::H2_Catenoid, 1.0);
    Surface surf = make_surface(spec);
    ParameterGrid grid = grid_for(spec, 0.02);
    HeightPair hp = height_pair(surf.chart, grid, grid.nu / 2, grid.nv / 2);
    CHECK(hp.harmonicity < 1e-8);
    CHECK(hp.h_star[static_cast<std::size_t>(grid.index(hp.base_i, hp.base_j))] == 0.0);

    Chart notconf = surf.chart;
    notconf.conformal = false;
    CHECK_THROWS_AS(height_pair(notconf, grid, 0, 0), PreconditionError);
    CHECK_THROWS_AS(hopf_differential(notconf, grid, surf.sig), PreconditionError);
}

TEST_CASE("rotation laws of the associate family") {
    CatalogSpec spec(Family::S2_Unduloid, std::sqrt(2.0));
    Surface surf = make_surface(spec);
    ParameterGrid grid = grid_for(spec, 0.02);
    for (double theta : {M_PI / 6.0, M_PI / 2.0, M_PI}) {
        RotationLawReport rep = rotation_law_check(surf.chart, theta, grid, surf.sig);
        INFO("theta " << theta << " height " << rep.max_height_dev << " hopf "
                      << rep.max_hopf_dev);
        CHECK(rep.max_height_dev < 1e-8);
        CHECK(rep.max_hopf_dev < 1e-8);
        CHECK(rep.max_modulus_dev < 1e-8);
    }
}
