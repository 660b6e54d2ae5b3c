#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "clf/simplex.hpp"
#include "clf/types.hpp"
#include "test_helpers.hpp"

using clf::Matrix;
using clf::Vector;
namespace sx = clf::simplex;

TEST_CASE("feasible_point solves simple equality systems over the nonnegative cone") {
    // w1 + w2 = 1 has the whole segment as solutions.
    Matrix e(1, 2);
    e << 1.0, 1.0;
    Vector f(1);
    f << 1.0;
    const auto w = sx::feasible_point(e, f, 1e-9);
    REQUIRE(w.has_value());
    CHECK((*w)(0) >= -1e-12);
    CHECK((*w)(1) >= -1e-12);
    CHECK((e * *w - f).cwiseAbs().maxCoeff() <= 1e-9);

    // w1 + w2 = -1 is impossible for w >= 0.
    Vector fneg(1);
    fneg << -1.0;
    CHECK_FALSE(sx::feasible_point(e, fneg, 1e-9).has_value());

    // Two equations pinning the unique solution (2, 1).
    Matrix e2(2, 2);
    e2 << 1.0, 1.0, 1.0, -1.0;
    Vector f2(2);
    f2 << 3.0, 1.0;
    const auto w2 = sx::feasible_point(e2, f2, 1e-9);
    REQUIRE(w2.has_value());
    CHECK((*w2)(0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK((*w2)(1) == doctest::Approx(1.0).epsilon(1e-9));

    // Inconsistent equalities.
    Matrix e3(2, 1);
    e3 << 1.0, 1.0;
    Vector f3(2);
    f3 << 1.0, 2.0;
    CHECK_FALSE(sx::feasible_point(e3, f3, 1e-9).has_value());
}

TEST_CASE("in_convex_hull: segments, squares, and returned weights") {
    // Midpoint of a segment.
    Matrix seg(2, 2);
    seg.col(0) << 0.0, 0.0;
    seg.col(1) << 2.0, 2.0;
    Vector mid(2);
    mid << 1.0, 1.0;
    Vector w;
    CHECK(sx::in_convex_hull(seg, mid, 1e-9, &w));
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((seg * w - mid).norm() <= 1e-8);

    Vector off(2);
    off << 1.0, 1.5;  // off the segment
    CHECK_FALSE(sx::in_convex_hull(seg, off, 1e-9));
    Vector beyond(2);
    beyond << 3.0, 3.0;  // on the line but outside the segment
    CHECK_FALSE(sx::in_convex_hull(seg, beyond, 1e-9));

    // Unit square corners: center inside, (1.1, 0.5) outside.
    Matrix sq(2, 4);
    sq.col(0) << 0.0, 0.0;
    sq.col(1) << 1.0, 0.0;
    sq.col(2) << 0.0, 1.0;
    sq.col(3) << 1.0, 1.0;
    Vector c(2);
    c << 0.5, 0.5;
    CHECK(sx::in_convex_hull(sq, c, 1e-9));
    Vector out(2);
    out << 1.1, 0.5;
    CHECK_FALSE(sx::in_convex_hull(sq, out, 1e-9));
    // Boundary point (edge midpoint) counts as inside.
    Vector edge(2);
    edge << 1.0, 0.5;
    CHECK(sx::in_convex_hull(sq, edge, 1e-9));
}

TEST_CASE("in_convex_hull matches random convex combinations and rejects translates") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const clf::Index dim = 2 + static_cast<clf::Index>(rng() % 3);  // 2..4
        const clf::Index npts = dim + 1 + static_cast<clf::Index>(rng() % 4);
        const Matrix pts = testutil::random_matrix(rng, dim, npts, 1.0);

        // A random convex combination must test inside.
        Vector lam(npts);
        double s = 0.0;
        for (clf::Index i = 0; i < npts; ++i) {
            lam(i) = clf::rnd::exponential(rng);
            s += lam(i);
        }
        lam /= s;
        CHECK(sx::in_convex_hull(pts, Vector(pts * lam), 1e-9));

        // Pushing any point past the cloud's farthest extent leaves the hull.
        Vector dir(dim);
        for (clf::Index i = 0; i < dim; ++i) dir(i) = clf::rnd::gaussian(rng);
        dir.normalize();
        double reach = -1e300;
        for (clf::Index i = 0; i < npts; ++i) reach = std::max(reach, dir.dot(pts.col(i)));
        const Vector outside = Vector(pts * lam) + (reach - dir.dot(pts * lam) + 0.5) * dir +
                               0.5 * dir;
        CHECK_FALSE(sx::in_convex_hull(pts, outside, 1e-9));
    }
}

TEST_CASE("single-point hull is just that point") {
    Matrix one(3, 1);
    one.col(0) << 1.0, 2.0, 3.0;
    Vector q = one.col(0);
    CHECK(sx::in_convex_hull(one, q, 1e-9));
    q(0) += 0.01;
    CHECK_FALSE(sx::in_convex_hull(one, q, 1e-9));
}
