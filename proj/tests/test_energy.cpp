#include <cmath>

#include "doctest.h"
#include "diskflow/energy.hpp"
#include "helpers.hpp"

using namespace diskflow;
using namespace diskflow::testing;

TEST_CASE("conserved energy of a rigid rotation is the plain kinetic integral") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    EosFamily eos = EosFamily::linear(100.0);

    Field h0(0, Frame::Eulerian, 17, 32);
    double E = conserved_energy(rotation_seed(disk, 1.0), h0, eos, geo);
    // rho = 1 at h = 0; int |v|^2/2 = int r^2/2 = pi/4.
    CHECK(E == doctest::Approx(kPi / 4).epsilon(1e-10));

    Field zero_v(1, Frame::Eulerian, 17, 32);
    CHECK(conserved_energy(zero_v, h0, eos, geo) == 0.0);
}

TEST_CASE("order zero report matches the frozen enthalpy oracle") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    EosFamily eos = EosFamily::linear(100.0);

    Field h0 = scalar_of(disk, [](double x, double y) { return 1 - x * x - y * y; });
    Field v0(1, Frame::Eulerian, 17, 32);
    Field hdot(0, Frame::Eulerian, 17, 32);

    DerivedTimeFields d = derive_time_fields(v0, h0, hdot, eos, geo, 0);
    EnergyReport rep = energy_total(d.tables, eos, geo, 0);

    // E_{0,0} = (1/2) int rho e' h^2 with rho within 1% of 1 on this state;
    // the boundary term vanishes since h does.
    CHECK(rep.E_sk.size() == 1);
    CHECK(std::abs(rep.E_sk[0] - kPi / 600) / (kPi / 600) < 0.01);
    // W_1 = (1/2)||grad h|| exactly: h1 = -kappa div v = 0 kills the other term.
    CHECK(rep.W_next == doctest::Approx(0.5 * std::sqrt(2 * kPi)).epsilon(1e-9));
    CHECK(rep.E_r == rep.E0);
    CHECK(rep.eps == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.calE == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("taylor sign quantities and violation flags") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    EosFamily eos = EosFamily::linear(100.0);

    Field good = scalar_of(disk, [](double x, double y) { return 2 * (1 - x * x - y * y); });
    ArrayXd vals = boundary_sign_values(good, geo);
    CHECK((vals - 4.0).abs().maxCoeff() < 1e-9);

    Field bad = scalar_of(disk, [](double x, double y) { return 0.5 * (x * x + y * y - 1); });
    TimeDerivativeTables t;
    t.v.push_back(quadrupole(disk, 1.0));
    t.h.push_back(bad);
    TaylorReport tr = taylor_and_apriori(t, eos, geo);
    CHECK(tr.eps == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK_FALSE(tr.sign_ok);
    CHECK(std::isinf(tr.calE));
    // Curvature 1; the chord sweep quantizes to grid pairs, so on 32 angles
    // the injectivity radius is sin(5 pi / 32) rather than the continuum 1/2.
    CHECK(tr.K == doctest::Approx(1.0 + 1.0 / std::sin(5 * kPi / 32)).epsilon(1e-10));

    // A complete order-1 table still refuses the energy when the sign fails.
    Field zero_hdot = scalar_of(disk, [](double, double) { return 0.0; });
    DerivedTimeFields full =
        derive_time_fields(t.v[0], bad, zero_hdot, eos, geo, 1, false);
    CHECK_THROWS_AS(energy_total(full.tables, eos, geo, 1), SignConditionViolation);
}

TEST_CASE("rotational kinetic term matches the enstrophy oracle") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    EosFamily eos = EosFamily::linear(100.0);

    double omega = 0.8;
    Field h0 = scalar_of(disk, [](double x, double y) { return 1 - x * x - y * y; });
    Field hdot(0, Frame::Eulerian, 17, 32);
    DerivedTimeFields d = derive_time_fields(rotation_seed(disk, omega), h0, hdot, eos, geo, 1);
    EnergyReport rep = energy_total(d.tables, eos, geo, 1);
    // K_1 = int rho |curl v|^2 = 8 pi omega^2 up to the density variation.
    CHECK(std::abs(rep.K_r - 8 * kPi * omega * omega) / (8 * kPi * omega * omega) < 0.01);
    CHECK(rep.E_star == doctest::Approx(rep.E0 + rep.E_r).epsilon(1e-12));
    CHECK(rep.order == 1);
    CHECK(rep.E_sk.size() == 2);
}

TEST_CASE("energy reports are invariant under a rotated parametrization") {
    ReferenceDisk disk(17, 32);
    EosFamily eos = EosFamily::linear(100.0);

    auto report_on = [&](const LagrangianMap& map) {
        GeometryCache geo = build_geometry(disk, map);
        Field v(1, Frame::Eulerian, 17, 32);
        v.comp(0) = 2.0 * geo.x1; // strain field sampled at mapped points
        v.comp(1) = -2.0 * geo.x2;
        Field h(0, Frame::Eulerian, 17, 32);
        h.comp(0) = 2.0 * (1.0 - geo.x1 * geo.x1 - geo.x2 * geo.x2);
        // Nonzero rotation-invariant D_t h so the W norms compare genuine
        // content, not roundoff.
        Field hdot(0, Frame::Eulerian, 17, 32);
        hdot.comp(0) = 1.0 - geo.x1 * geo.x1 - geo.x2 * geo.x2;
        DerivedTimeFields d = derive_time_fields(v, h, hdot, eos, geo, 2);
        return energy_total(d.tables, eos, geo, 2);
    };

    EnergyReport a = report_on(LagrangianMap::identity(disk));
    EnergyReport b = report_on(LagrangianMap::rotation(disk, 0.6));
    CHECK(a.E_r == doctest::Approx(b.E_r).epsilon(1e-8));
    CHECK(a.E0 == doctest::Approx(b.E0).epsilon(1e-10));
    CHECK(a.W_next == doctest::Approx(b.W_next).epsilon(1e-8));
    CHECK(a.K_r == doctest::Approx(b.K_r).epsilon(1e-8));
    CHECK(a.eps == doctest::Approx(b.eps).epsilon(1e-9));
    for (size_t k = 0; k < a.E_sk.size(); ++k)
        CHECK(a.E_sk[k] == doctest::Approx(b.E_sk[k]).epsilon(1e-7));
}

TEST_CASE("variant energies order consistently") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    EosFamily eos = EosFamily::linear(100.0);

    Field h0 = scalar_of(disk, [](double x, double y) { return 2 * (1 - x * x - y * y); });
    Field hdot(0, Frame::Eulerian, 17, 32);
    DerivedTimeFields d = derive_time_fields(quadrupole(disk, 2.0), h0, hdot, eos, geo, 2);
    EnergyReport rep = energy_total(d.tables, eos, geo, 2);

    CHECK(rep.E_hat <= rep.E_r + 1e-12); // dropped interior pieces
    CHECK(rep.E_r > 0.0);
    CHECK(rep.E_orders.size() == 2);
    CHECK(rep.E_star == doctest::Approx(rep.E0 + rep.E_orders[0] + rep.E_orders[1]).epsilon(1e-12));
    CHECK(rep.W_tilde_next > 0.0);
    CHECK(rep.M_linf > 0.0);
    CHECK(rep.K_geo == doctest::Approx(1.0 + 1.0 / std::sin(5 * kPi / 32)).epsilon(1e-10));
}

TEST_CASE("incompressible reports stop at order one and skip stiff weights") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    EosFamily eos = EosFamily::incompressible();

    Field h0 = scalar_of(disk, [](double x, double y) { return 2 * (1 - x * x - y * y); });
    Field hdot(0, Frame::Eulerian, 17, 32); // D_t p supplied externally
    DerivedTimeFields d = derive_time_fields(quadrupole(disk, 2.0), h0, hdot, eos, geo, 1);
    EnergyReport rep = energy_total(d.tables, eos, geo, 1);
    CHECK(rep.order == 1);
    CHECK(std::isfinite(rep.E_r));
    // W_2 carries only the gradient part: no sqrt(e') h_2 term exists.
    CHECK(rep.W_next == doctest::Approx(0.5 * l2_norm(eulerian_gradient(d.tables.h[1], geo), geo))
                            .epsilon(1e-10));

    CHECK_THROWS_AS(derive_time_fields(quadrupole(disk, 2.0), h0, hdot, eos, geo, 2),
                    DegenerateEos);
}

TEST_CASE("unresolved fields are flagged by the spectral tail monitor") {
    ReferenceDisk disk(17, 32);
    GeometryCache geo = build_geometry(disk, LagrangianMap::identity(disk));
    EosFamily eos = EosFamily::linear(100.0);

    ArrayXXd noisy(17, 32);
    for (int j = 0; j < 17; ++j)
        for (int i = 0; i < 32; ++i)
            noisy(j, i) = std::cos(15 * disk.theta(i)) * (1 - disk.r(j) * disk.r(j));
    Field h0(0, Frame::Eulerian, 17, 32);
    h0.comp(0) = noisy;
    Field v0(1, Frame::Eulerian, 17, 32);
    Field hdot(0, Frame::Eulerian, 17, 32);

    CHECK_THROWS_AS(derive_time_fields(v0, h0, hdot, eos, geo, 1, true), ResolutionInsufficient);
    DerivedTimeFields d = derive_time_fields(v0, h0, hdot, eos, geo, 1, false);
    CHECK(d.worst_tail > 0.1);
}
