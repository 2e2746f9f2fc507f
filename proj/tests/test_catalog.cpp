#include <catch2/catch_amalgamated.hpp>

#include "mxr/catalog.hpp"

using namespace mxr;

TEST_CASE("spec validation") {
    CHECK_NOTHROW(validate({Family::S2_Helicoid, 2.5}));
    CHECK_THROWS_AS(validate({Family::S2_Helicoid, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate({Family::S2_Unduloid, 1.0}), ValidationError);
    CHECK_NOTHROW(validate({Family::S2_Unduloid, -1.5}));
    CHECK_THROWS_AS(validate({Family::H2_Catenoid, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate({Family::H2_GenCatenoid, 1.0}), ValidationError);
    CHECK_THROWS_AS(validate({Family::H2_GenCatenoid, 0.0}), ValidationError);
    CHECK_THROWS_AS(validate(CatalogSpec(Family::Slice, 0.0, 2)), ValidationError);

    CHECK(signature_of({Family::S2_Unduloid, 2.0}).kappa == 1);
    CHECK(signature_of({Family::H2_Horocycle, 0.0}).kappa == -1);
    CHECK(std::string(family_name(Family::H2_GenCatenoid)) == "h2-gencatenoid");
}

TEST_CASE("domain half-widths") {
    // quadrature cross-checked against an independent high-precision evaluation
    CHECK(domain_halfwidth({Family::H2_Helicoid, 1.0}) ==
          Catch::Approx(M_PI / 2.0).epsilon(1e-12));
    CHECK(domain_halfwidth({Family::H2_Catenoid, 1.0}) ==
          Catch::Approx(1.3110287771460598).epsilon(1e-11));
    CHECK(domain_halfwidth({Family::H2_GenCatenoid, 0.6}) ==
          Catch::Approx(1.7507538029157526).epsilon(1e-11));
    // the catenoid never covers a half-turn of the profile domain, the
    // generalized catenoid always does
    CHECK(2.0 * domain_halfwidth({Family::H2_Catenoid, 0.3}) < M_PI);
    CHECK(2.0 * domain_halfwidth({Family::H2_GenCatenoid, 0.9}) > M_PI);
    CHECK_THROWS_AS(domain_halfwidth({Family::S2_Helicoid, 1.0}), UnsupportedError);
}

TEST_CASE("profile integration against a closed-form solution") {
    // beta = 1 in H^2 x R: phi(u) = ln tan(u/2 + pi/4), phi' = 1/cos u
    CatalogSpec spec(Family::H2_Helicoid, 1.0);
    ProfileSolution sol = solve_profile(spec, 1e-4, 1.2);
    CHECK(sol.first_integral_drift < 1e-10);
    for (double u : {0.5, 1.0, -0.8, 0.123456}) {
        auto [p, q] = sol.eval(u);
        CHECK(p == Catch::Approx(std::log(std::tan(0.5 * u + M_PI / 4.0))).margin(1e-10));
        CHECK(q == Catch::Approx(1.0 / std::cos(u)).margin(1e-10));
    }
    CHECK(sol.eval(0.5).first == Catch::Approx(0.52223810327844034).margin(1e-10));
    CHECK(sol.eval(1.0).first == Catch::Approx(1.2261911708835171).margin(1e-10));
    CHECK_THROWS_AS(sol.eval(1.3), DomainError);
    // requesting a span past the maximal domain is refused up front
    CHECK_THROWS_AS(solve_profile(spec, 1e-4, 1.6), DomainError);
}

TEST_CASE("profile first integral holds for every family") {
    for (auto spec : {CatalogSpec(Family::S2_Helicoid, 1.0), CatalogSpec(Family::S2_Unduloid, 1.7),
                      CatalogSpec(Family::H2_Helicoid, 0.8), CatalogSpec(Family::H2_Catenoid, 1.2),
                      CatalogSpec(Family::H2_GenCatenoid, 0.6)}) {
        ProfileSolution sol = solve_profile(spec, 1e-4);
        INFO(family_name(spec.kind) << " drift " << sol.first_integral_drift);
        CHECK(sol.first_integral_drift < 1e-10);
        // symmetric domain, symmetric initial data
        CHECK(static_cast<int>(sol.p.size()) == 2 * sol.nside + 1);
    }
}

TEST_CASE("charts land on the model surface") {
    for (auto spec : {CatalogSpec(Family::S2_Helicoid, 1.0), CatalogSpec(Family::S2_Unduloid, 1.5),
                      CatalogSpec(Family::H2_Helicoid, 1.0), CatalogSpec(Family::H2_Catenoid, 1.0),
                      CatalogSpec(Family::H2_Horocycle, 0.0),
                      CatalogSpec(Family::H2_GenCatenoid, 0.6),
                      CatalogSpec(Family::S2_Cylinder, 0.0),
                      CatalogSpec(Family::H2_VerticalPlane, 0.0),
                      CatalogSpec(Family::Slice, 0.3, 1), CatalogSpec(Family::Slice, 0.3, -1)}) {
        Surface surf = make_surface(spec);
        ParameterGrid grid = grid_for(spec, 0.1, 0.4);
        double worst = 0.0, dworst = 0.0;
        const double h = 1e-6;
        for (int i = 0; i < grid.nu; ++i)
            for (int j = 0; j < grid.nv; ++j) {
                const double u = grid.u(i), v = grid.v(j);
                const Vec x = surf.chart.eval(u, v);
                worst = std::max(worst,
                                 std::abs(horizontal_quadratic(x, surf.sig) - surf.sig.kappa));
                // analytic derivatives vs central differences of eval
                const Vec du_fd = (surf.chart.eval(u + h, v) - surf.chart.eval(u - h, v)) / (2 * h);
                const Vec dv_fd = (surf.chart.eval(u, v + h) - surf.chart.eval(u, v - h)) / (2 * h);
                dworst = std::max(dworst, (surf.chart.du(u, v) - du_fd).cwiseAbs().maxCoeff());
                dworst = std::max(dworst, (surf.chart.dv(u, v) - dv_fd).cwiseAbs().maxCoeff());
            }
        INFO(family_name(spec.kind));
        CHECK(worst < 1e-12);
        CHECK(dworst < 1e-8);
    }
}

TEST_CASE("conjugate pairs") {
    const double a = 1.2;
    SECTION("catenoid and helicoid") {
        ConjugateReport rep = conjugate_pair_check(CatalogSpec(Family::H2_Catenoid, a),
                                                   CatalogSpec(Family::H2_Helicoid, std::sqrt(1 + a * a)));
        INFO("worst " << rep.worst());
        CHECK(rep.pass);
        CHECK(rep.worst() < 1e-8);
    }
    SECTION("unduloid and spherical helicoid") {
        ConjugateReport rep =
            conjugate_pair_check(CatalogSpec(Family::S2_Unduloid, std::sqrt(1 + a * a)),
                                 CatalogSpec(Family::S2_Helicoid, a));
        CHECK(rep.pass);
    }
    SECTION("horocycle surface and helicoid beta = 1") {
        ConjugateReport rep = conjugate_pair_check(CatalogSpec(Family::H2_Horocycle, 0.0),
                                                   CatalogSpec(Family::H2_Helicoid, 1.0));
        CHECK(rep.pass);
    }
    SECTION("generalized catenoid and helicoid") {
        const double g = 0.6;
        ConjugateReport rep =
            conjugate_pair_check(CatalogSpec(Family::H2_GenCatenoid, g),
                                 CatalogSpec(Family::H2_Helicoid, std::sqrt(1 - g * g)));
        CHECK(rep.pass);
    }
    SECTION("argument order is normalized") {
        ConjugateReport rep = conjugate_pair_check(CatalogSpec(Family::H2_Helicoid, std::sqrt(2.0)),
                                                   CatalogSpec(Family::H2_Catenoid, 1.0));
        CHECK(rep.pass);
    }
    SECTION("wrong parameter relation is refused") {
        CHECK_THROWS_AS(conjugate_pair_check(CatalogSpec(Family::H2_Catenoid, 1.0),
                                             CatalogSpec(Family::H2_Helicoid, 1.0)),
                        PreconditionError);
        CHECK_THROWS_AS(conjugate_pair_check(CatalogSpec(Family::Slice, 0.0, -1),
                                             CatalogSpec(Family::H2_Helicoid, 1.0)),
                        PreconditionError);
    }
}
