#include <catch2/catch_amalgamated.hpp>

#include "mxr/ambient.hpp"

using namespace mxr;

TEST_CASE("signature validation and metric") {
    CHECK_THROWS_AS(Signature(0, 2), ValidationError);
    CHECK_THROWS_AS(Signature(2, 2), ValidationError);
    CHECK_THROWS_AS(Signature(1, 1), ValidationError);
    Signature s(-1, 2);
    CHECK(s.dim() == 4);
    CHECK(s.g_diagonal()(0) == -1.0);
    CHECK(s.g_diagonal()(3) == 1.0);
    CHECK(s.g_matrix().trace() == 2.0);
}

TEST_CASE("lorentz inner product") {
    Signature s(-1, 2);
    Vec a(4), b(4);
    a << 1, 2, 3, 4;
    b << 5, 6, 7, 8;
    CHECK(g_inner(a, b, s) == Catch::Approx(-5 + 12 + 21 + 32));
    CHECK(g_inner(a, b, Signature(1, 2)) == Catch::Approx(5 + 12 + 21 + 32));
    Vec c(3);
    c << 1, 2, 3;
    CHECK_THROWS_AS(g_inner(a, c, s), ValidationError);
}

TEST_CASE("projection onto the model") {
    Signature sp(1, 2), sm(-1, 2);
    Vec p(4);
    p << 3, 4, 0, 7;
    Vec q = project_to_model(p, sp);
    CHECK(horizontal_quadratic(q, sp) == Catch::Approx(1.0));
    CHECK(q(3) == 7.0);  // vertical untouched
    CHECK(q(0) == Catch::Approx(0.6));

    Vec h(4);
    h << 2, 1, 0.5, -3;  // -4 + 1 + 0.25 < 0: timelike, fine for kappa=-1
    Vec r = project_to_model(h, sm);
    CHECK(horizontal_quadratic(r, sm) == Catch::Approx(-1.0));
    CHECK(r(0) > 0.0);
    CHECK(r(3) == -3.0);

    Vec bad(4);
    bad << 0.5, 1, 0, 0;  // spacelike horizontal part: not on the hyperboloid side
    CHECK_THROWS_AS(project_to_model(bad, sm), DomainError);
    Vec zero = Vec::Zero(4);
    CHECK_THROWS_AS(project_to_model(zero, sp), DomainError);
}

namespace {

Mat boost_frame() {
    // an element of SO+(L^4): boost in the (0,1) plane x rotation in (2,3)
    const double t = 0.7, r = 0.3;
    Mat A = Mat::Identity(4, 4);
    A(0, 0) = std::cosh(t);
    A(0, 1) = std::sinh(t);
    A(1, 0) = std::sinh(t);
    A(1, 1) = std::cosh(t);
    A(2, 2) = std::cos(r);
    A(2, 3) = -std::sin(r);
    A(3, 2) = std::sin(r);
    A(3, 3) = std::cos(r);
    return A;
}

}  // namespace

TEST_CASE("frame defect and inverse") {
    Signature s(-1, 2);
    const Mat A = boost_frame();
    CHECK(frame_defect(A, s) < 1e-14);
    CHECK((frame_inverse(A, s) * A - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
    Mat B = A;
    B(1, 2) += 1e-3;
    CHECK(frame_defect(B, s) > 1e-4);
}

TEST_CASE("so projection") {
    Signature s(-1, 2);
    Mat H = Mat::Random(4, 4);
    const Mat P = so_project(H, s);
    CHECK(so_defect(P, s) < 1e-14);
    // idempotent, and identity on the algebra
    CHECK((so_project(P, s) - P).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("reorthonormalization") {
    Signature s(-1, 2);
    const Mat A = boost_frame();
    // idempotent on the group
    CHECK((reorthonormalize(A, s) - A).cwiseAbs().maxCoeff() < 1e-13);
    // restores a small perturbation
    Mat B = A + 1e-6 * Mat::Random(4, 4);
    const Mat C = reorthonormalize(B, s);
    CHECK(frame_defect(C, s) < 1e-12);
    CHECK((C - A).cwiseAbs().maxCoeff() < 1e-5);
    // degenerate input is rejected
    Mat D = A;
    D.col(1) = D.col(2);
    CHECK_THROWS_AS(reorthonormalize(D, s), NumericalError);
}

TEST_CASE("completion of a prescribed last row") {
    for (int kappa : {1, -1}) {
        Signature s(kappa, 2);
        Vec row(4);
        row << 0.0, 0.3, 0.4, std::sqrt(1.0 - 0.25);
        const Mat A = complete_frame_with_last_row(row, s);
        CHECK(frame_defect(A, s) < 1e-12);
        CHECK((A.row(3).transpose() - row).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(A.determinant() == Catch::Approx(1.0).margin(1e-12));
        if (kappa == -1) CHECK(A(0, 0) > 0.0);
    }
    Signature s(1, 2);
    Vec bad(4);
    bad << 0, 1, 1, 1;  // not G-unit
    CHECK_THROWS_AS(complete_frame_with_last_row(bad, s), PreconditionError);
}
