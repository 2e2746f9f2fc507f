#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "mxr/catalog.hpp"
#include "mxr/frames.hpp"
#include "mxr/fundamental.hpp"

using namespace mxr;

namespace {

FundamentalData strip_to_fd(const FundamentalData& d) {
    // keep only the node values: forces the finite-difference route
    FundamentalData out;
    out.sig = d.sig;
    out.grid = d.grid;
    out.allocate();
    out.g = d.g;
    out.S = d.S;
    out.T = d.T;
    out.nu = d.nu;
    return out;
}

const std::vector<CatalogSpec>& minimal_specs() {
    static const std::vector<CatalogSpec> specs = {
        {Family::S2_Helicoid, 1.0},  {Family::S2_Unduloid, std::sqrt(2.0)},
        {Family::H2_Helicoid, 1.0},  {Family::H2_Catenoid, 1.0},
        {Family::H2_Horocycle, 0.0}, {Family::H2_GenCatenoid, 0.6}};
    return specs;
}

}  // namespace

TEST_CASE("grid indexing and finite differences") {
    ParameterGrid g(-1.0, 1.0, 0.0, 0.5, 21, 11);
    CHECK(g.hu() == Catch::Approx(0.1));
    CHECK(g.hv() == Catch::Approx(0.05));
    CHECK(g.index(3, 4) == 3 * 11 + 4);
    CHECK(g.u(10) == Catch::Approx(0.0));
    CHECK_THROWS_AS(ParameterGrid(-1, 1, 0, 1, 2, 5), ValidationError);
    CHECK_THROWS_AS(ParameterGrid(1, -1, 0, 1, 5, 5), ValidationError);

    // second-order convergence of the stencils on exp
    auto sample = [](double h) {
        auto f = [h](int k) { return std::exp(k * h); };
        const double d1c = fd_first(f, 5, 11, h) - std::exp(5 * h);
        const double d1l = fd_first(f, 0, 11, h) - 1.0;
        const double d2 = fd_second(f, 5, 11, h) - std::exp(5 * h);
        return std::max({std::abs(d1c), std::abs(d1l), std::abs(d2)});
    };
    CHECK(sample(0.01) / sample(0.005) > 3.0);
}

TEST_CASE("chart route on the slice") {
    for (int kappa : {1, -1}) {
        CatalogSpec spec(Family::Slice, 0.25, kappa);
        Surface surf = make_surface(spec);
        ParameterGrid grid(-0.4, 0.4, -0.4, 0.4, 41, 41);
        FundamentalData d = fundamental_from_chart(surf.chart, grid, surf.sig);
        for (int k = 0; k < grid.size(); ++k) {
            CHECK(d.S[k].cwiseAbs().maxCoeff() < 1e-10);
            CHECK(d.T[k].cwiseAbs().maxCoeff() < 1e-10);
            CHECK(std::abs(std::abs(d.nu[k]) - 1.0) < 1e-12);
        }
        // S, T, nu derivatives come from finite differences here, so the
        // compatibility tolerance is the usual O(h^2) gate
        ResidualReport rep = check_compatibility(d, 10.0 * grid.hu() * grid.hu());
        CHECK(rep.pass);
    }
}

TEST_CASE("closed-form data matches the chart route pointwise") {
    for (const CatalogSpec& spec : minimal_specs()) {
        Surface surf = make_surface(spec);
        ParameterGrid grid = grid_for(spec, 0.05);
        FundamentalData a = fundamental_closed_form(surf, grid);
        FundamentalData b = fundamental_from_chart(surf.chart, grid, surf.sig);
        double worst = 0.0;
        for (int k = 0; k < grid.size(); ++k) {
            worst = std::max(worst, (a.g[k] - b.g[k]).cwiseAbs().maxCoeff());
            worst = std::max(worst, (a.S[k] - b.S[k]).cwiseAbs().maxCoeff());
            worst = std::max(worst, (a.T[k] - b.T[k]).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(a.nu[k] - b.nu[k]));
        }
        INFO(family_name(spec.kind));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("structure identities of catalog data") {
    for (const CatalogSpec& spec : minimal_specs()) {
        Surface surf = make_surface(spec);
        ParameterGrid grid = grid_for(spec, 0.05);
        FundamentalData d = fundamental_closed_form(surf, grid);
        for (int k = 0; k < grid.size(); ++k) {
            // |T|^2 + nu^2 = 1
            CHECK(std::abs(d.T[k].dot(d.g[k] * d.T[k]) + d.nu[k] * d.nu[k] - 1.0) < 1e-12);
            // g S symmetric
            const Mat gs = d.g[k] * d.S[k];
            CHECK(std::abs(gs(0, 1) - gs(1, 0)) < 1e-12);
            // minimal
            CHECK(std::abs(d.S[k].trace()) < 1e-12);
        }
    }
}

TEST_CASE("gauss curvature against closed forms") {
    // slice of S^2 x R has K = 1, of H^2 x R has K = -1; vertical cylinders
    // and planes are flat
    for (int kappa : {1, -1}) {
        CatalogSpec spec(Family::Slice, 0.0, kappa);
        ParameterGrid grid(-0.3, 0.3, -0.3, 0.3, 15, 15);
        FundamentalData d = fundamental_closed_form(spec, grid);
        CHECK(std::abs(gauss_curvature_at(d, 7, 7) - kappa) < 1e-12);
        CHECK(std::abs(gauss_curvature_at(d, 3, 11) - kappa) < 1e-12);
    }
    CatalogSpec cyl(Family::S2_Cylinder, 0.0);
    FundamentalData d = fundamental_closed_form(cyl, ParameterGrid(-0.3, 0.3, -0.3, 0.3, 15, 15));
    CHECK(std::abs(gauss_curvature_at(d, 7, 7)) < 1e-14);
}

TEST_CASE("compatibility of closed-form catalog data") {
    for (const CatalogSpec& spec : minimal_specs()) {
        FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.02));
        ResidualReport rep = check_compatibility(d, 1e-8);
        INFO(family_name(spec.kind) << " worst " << rep.worst());
        CHECK(rep.pass);
    }
}

TEST_CASE("finite-difference route converges at order 2") {
    for (const CatalogSpec& spec :
         {CatalogSpec(Family::S2_Helicoid, 1.0), CatalogSpec(Family::H2_Catenoid, 1.0)}) {
        Surface surf = make_surface(spec);
        double coarse = 0.0, fine = 0.0;
        for (double h : {2e-2, 1e-2}) {
            ParameterGrid grid = grid_for(spec, h);
            FundamentalData d = strip_to_fd(fundamental_from_chart(surf.chart, grid, surf.sig));
            const double worst = check_compatibility(d, 1.0).worst();
            (h == 2e-2 ? coarse : fine) = worst;
        }
        INFO(family_name(spec.kind) << " ratio " << coarse / fine);
        CHECK(coarse / fine > 3.5);
        CHECK(coarse / fine < 4.5);
    }
}

TEST_CASE("sign-flip closure of the compatibility equations") {
    CatalogSpec spec(Family::S2_Helicoid, 1.0);
    FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.05));
    for (int which : {1, 2, 3}) {
        FundamentalData f = apply_sign_flip(d, which);
        CHECK(check_compatibility(f, 1e-8).pass);
    }
}

TEST_CASE("corrupted data is flagged with the violated equation") {
    CatalogSpec spec(Family::S2_Helicoid, 1.0);
    FundamentalData d = fundamental_closed_form(spec, grid_for(spec, 0.05));
    SECTION("scaled normal component breaks the unit-norm identity") {
        FundamentalData c = d;
        for (double& v : c.nu) v *= 1.1;
        c.analytic = nullptr;  // corrupt the stored field, not the evaluator
        for (double& v : c.dnu_u) v *= 1.1;
        for (double& v : c.dnu_v) v *= 1.1;
        ResidualReport rep = check_compatibility(c, 1e-8);
        CHECK_FALSE(rep.pass);
        // the scaling breaks |T|^2 + nu^2 = 1 directly (and the differential
        // identities involving nu as a side effect)
        const auto names = rep.failing_names();
        CHECK(std::find(names.begin(), names.end(), "unit_norm") != names.end());
        CHECK(rep.unit_norm.max > 1e-2);
    }
    SECTION("shape-operator offset breaks Codazzi") {
        FundamentalData c = d;
        for (Mat& S : c.S) S(0, 0) += 0.1;
        c.analytic = nullptr;
        ResidualReport rep = check_compatibility(c, 1e-8);
        CHECK_FALSE(rep.pass);
        CHECK(rep.codazzi.max > 1e-2);
    }
}

TEST_CASE("degenerate metric aborts with the node named") {
    // a rank-one chart: all of S^1 x {0} traced diagonally
    Chart c;
    c.eval = [](double u, double v) {
        Vec x(4);
        x << std::cos(u + v), std::sin(u + v), 0.0, 0.0;
        return x;
    };
    ParameterGrid grid(-0.2, 0.2, -0.2, 0.2, 5, 5);
    try {
        fundamental_from_chart(c, grid, Signature(1, 2));
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("(0,0)") != std::string::npos);
    }
}
