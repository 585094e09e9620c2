#include <cmath>
#include <random>

#include "doctest.h"
#include "diskflow/calculus.hpp"
#include "helpers.hpp"

using namespace diskflow;
using namespace diskflow::testing;

TEST_CASE("eulerian gradient on flat and dilated maps") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    Field f = scalar_of(disk, [](double x, double y) { return x * x + y * y; });
    Field df = eulerian_gradient(f, geo);
    Field e1 = scalar_of(disk, [](double x, double) { return 2 * x; });
    Field e2 = scalar_of(disk, [](double, double y) { return 2 * y; });
    CHECK((df.comp(0) - e1.comp(0)).abs().maxCoeff() < 1e-10);
    CHECK((df.comp(1) - e2.comp(0)).abs().maxCoeff() < 1e-10);

    // f = x1 x2 under x = 2y: df = (x2, x1) evaluated at x = 2y.
    GeometryCache big = build_geometry(disk, LagrangianMap::dilation(disk, 2.0));
    Field g(0, Frame::Eulerian, 17, 32);
    g.comp(0) = big.x1 * big.x2;
    Field dg = eulerian_gradient(g, big);
    CHECK((dg.comp(0) - big.x2).abs().maxCoeff() < 1e-9);
    CHECK((dg.comp(1) - big.x1).abs().maxCoeff() < 1e-9);
}

TEST_CASE("laplace-beltrami matches flat laplacian values") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    Field h = scalar_of(disk, [](double x, double y) { return 1 - x * x - y * y; });
    Field lap = laplace_beltrami(h, geo);
    CHECK((lap.comp(0) + 4.0).abs().maxCoeff() < 1e-9);

    Field c = scalar_of(disk, [](double, double) { return 3.0; });
    CHECK(laplace_beltrami(c, geo).max_abs() < 1e-9);

    Field harm = scalar_of(disk, [](double x, double y) { return x * x - y * y; });
    CHECK(laplace_beltrami(harm, geo).max_abs() < 1e-9);
}

TEST_CASE("divergence and curl of canonical velocity fields") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    DivCurl quad = div_curl(quadrupole(disk, 2.0), geo);
    CHECK(quad.divergence.abs().maxCoeff() < 1e-9);
    CHECK(quad.curl.max_abs() < 1e-9);

    double omega = 1.5;
    DivCurl rot = div_curl(rotation_seed(disk, omega), geo);
    CHECK(rot.divergence.abs().maxCoeff() < 1e-9);
    CHECK((rot.curl.comp({0, 1}) - 2 * omega).abs().maxCoeff() < 1e-9);
    CHECK((rot.curl.comp({1, 0}) + 2 * omega).abs().maxCoeff() < 1e-9);
    CHECK((rot.curl.norm_squared() - 8 * omega * omega).abs().maxCoeff() < 1e-8);

    Field radial = vector_of(disk, [](double x, double) { return x; },
                             [](double, double y) { return y; });
    DivCurl rad = div_curl(radial, geo);
    CHECK((rad.divergence - 2.0).abs().maxCoeff() < 1e-9);
    CHECK(rad.curl.max_abs() < 1e-9);
}

TEST_CASE("symmetric dot contracts adjacent slots") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    Field a = scalar_of(disk, [](double x, double) { return x; });
    Field b = scalar_of(disk, [](double, double y) { return y; });
    CHECK_THROWS_AS(symmetric_dot(a, b), RankMismatch);

    // ((dv).~(df))_i = d_i v^k d_k f with v = (2x1, -2x2), f = x1 x2.
    Field dv = eulerian_gradient(quadrupole(disk, 2.0), geo);
    Field f = scalar_of(disk, [](double x, double y) { return x * y; });
    Field df = eulerian_gradient(f, geo);
    Field sd = symmetric_dot(dv, df);
    Field want1 = scalar_of(disk, [](double, double y) { return 2 * y; });
    Field want2 = scalar_of(disk, [](double x, double) { return -2 * x; });
    CHECK((sd.comp(0) - want1.comp(0)).abs().maxCoeff() < 1e-9);
    CHECK((sd.comp(1) - want2.comp(0)).abs().maxCoeff() < 1e-9);
}

TEST_CASE("tangential projection at the boundary is idempotent") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BoundaryField S(2, Frame::Eulerian, 32);
    for (int c = 0; c < S.n_components(); ++c)
        for (int i = 0; i < 32; ++i) S.comp(c)[i] = u(rng);

    BoundaryField p1 = boundary_project(S, geo);
    BoundaryField p2 = boundary_project(p1, geo);
    double diff = 0.0;
    for (int c = 0; c < p1.n_components(); ++c)
        diff = std::max(diff, (p2.comp(c) - p1.comp(c)).abs().maxCoeff());
    CHECK(diff < 1e-12);
}

TEST_CASE("sobolev norms reproduce closed-form integrals") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    Field h = scalar_of(disk, [](double x, double y) { return 1 - x * x - y * y; });
    CHECK(l2_norm(h, geo) == doctest::Approx(std::sqrt(kPi / 3)).epsilon(1e-10));
    // int |grad h|^2 = 2 pi, int |hess h|^2 = 8 pi.
    CHECK(sobolev_norm(h, 1, geo) ==
          doctest::Approx(std::sqrt(kPi / 3 + 2 * kPi)).epsilon(1e-9));
    CHECK(sobolev_norm(h, 2, geo) ==
          doctest::Approx(std::sqrt(kPi / 3 + 2 * kPi + 8 * kPi)).epsilon(1e-8));
}

TEST_CASE("collar inner product is symmetric and positive") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    Field a = vector_of(disk, [](double x, double y) { return x + y; },
                        [](double x, double y) { return x - 2 * y; });
    Field b = vector_of(disk, [](double x, double y) { return y * y - x; },
                        [](double x, double) { return 1 + x; });
    ArrayXXd ab = q_inner(a, b, geo);
    ArrayXXd ba = q_inner(b, a, geo);
    CHECK((ab - ba).abs().maxCoeff() < 1e-13);
    CHECK(q_inner(a, a, geo).minCoeff() >= -1e-13);

    // Zero q-slots reduces to the plain componentwise contraction.
    ArrayXXd plain = q_inner(a, b, geo, 0);
    ArrayXXd direct = a.comp(0) * b.comp(0) + a.comp(1) * b.comp(1);
    CHECK((plain - direct).abs().maxCoeff() < 1e-13);
}

TEST_CASE("commutator identities hold on analytic data") {
    // Small grid: the polynomial data is exact there and the roundoff floor of
    // the repeated spectral derivatives stays well under the tolerances.
    ReferenceDisk disk(9, 16);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));

    Field v = quadrupole(disk, 2.0);
    Field f = scalar_of(disk, [](double x, double y) { return x * y; });
    CHECK(commutator_residual(CommutatorKind::DtGrad, 1, v, f, geo) < 1e-10);

    Field z(1, Frame::Eulerian, 9, 16);
    CHECK(commutator_residual(CommutatorKind::DtGrad, 1, z, f, geo) == 0.0);

    Field harm = scalar_of(disk, [](double x, double y) { return x * x - y * y; });
    CHECK(commutator_residual(CommutatorKind::LaplaceDt, 1, rotation_seed(disk, 1.0), harm, geo) <
          1e-9);

    // Higher-order gradient commutators on polynomial data.
    Field p = scalar_of(disk, [](double x, double y) { return x * x * y + y * y; });
    CHECK(commutator_residual(CommutatorKind::DtGradR, 2, v, p, geo) < 1e-9);
    CHECK(commutator_residual(CommutatorKind::DtGradR, 3, v, p, geo) < 1e-9);
}
