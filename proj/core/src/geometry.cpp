#include "diskflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace diskflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// C2 cutoff: 1 for s <= 1/4, 0 for s >= 1/2, quintic blend between.
double collar_cutoff(double s) {
    if (s <= 0.25) return 1.0;
    if (s >= 0.5) return 0.0;
    double u = (s - 0.25) * 4.0;
    return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

// Trigonometric interpolant of the boundary curve with two derivatives.
struct TrigCurve {
    std::vector<std::complex<double>> c1, c2;
    int n = 0;

    TrigCurve(const ArrayXd& bx1, const ArrayXd& bx2) {
        n = int(bx1.size());
        int n_modes = n / 2 + 1;
        c1.assign(n_modes, {0.0, 0.0});
        c2.assign(n_modes, {0.0, 0.0});
        for (int m = 0; m < n_modes; ++m) {
            for (int i = 0; i < n; ++i) {
                double ang = -2.0 * kPi * m * i / n;
                std::complex<double> w(std::cos(ang), std::sin(ang));
                c1[m] += w * bx1[i] / double(n);
                c2[m] += w * bx2[i] / double(n);
            }
        }
    }

    void eval(double s, double out[2], double d1[2], double d2[2]) const {
        out[0] = out[1] = d1[0] = d1[1] = d2[0] = d2[1] = 0.0;
        int n_modes = n / 2 + 1;
        for (int m = 0; m < n_modes; ++m) {
            double scale = (m == 0 || m == n / 2) ? 1.0 : 2.0;
            std::complex<double> w(std::cos(m * s), std::sin(m * s));
            std::complex<double> iw(-w.imag() * m, w.real() * m);
            std::complex<double> nw(-w.real() * m * m, -w.imag() * m * m);
            out[0] += scale * (c1[m] * w).real();
            out[1] += scale * (c2[m] * w).real();
            d1[0] += scale * (c1[m] * iw).real();
            d1[1] += scale * (c2[m] * iw).real();
            d2[0] += scale * (c1[m] * nw).real();
            d2[1] += scale * (c2[m] * nw).real();
        }
    }
};

} // namespace

LagrangianMap LagrangianMap::identity(const ReferenceDisk& disk) {
    return {disk.y1_grid(), disk.y2_grid()};
}

LagrangianMap LagrangianMap::dilation(const ReferenceDisk& disk, double lambda) {
    return {lambda * disk.y1_grid(), lambda * disk.y2_grid()};
}

LagrangianMap LagrangianMap::rotation(const ReferenceDisk& disk, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * disk.y1_grid() - s * disk.y2_grid(), s * disk.y1_grid() + c * disk.y2_grid()};
}

ArrayXXd GeometryCache::euler_d1(const ArrayXXd& f) const {
    return inv11 * disk->d_y1(f) + inv21 * disk->d_y2(f);
}

ArrayXXd GeometryCache::euler_d2(const ArrayXXd& f) const {
    return inv12 * disk->d_y1(f) + inv22 * disk->d_y2(f);
}

double GeometryCache::integrate_phys(const ArrayXXd& f) const {
    return disk->integrate(f * detj);
}

double GeometryCache::boundary_integrate_phys(const ArrayXd& f) const {
    return (f * bweight).sum();
}

GeometryCache build_geometry(const ReferenceDisk& disk, const LagrangianMap& map,
                             GeometryLevel level, double eta_threshold) {
    GeometryCache geo;
    geo.disk = &disk;
    geo.level = level;
    geo.eta_threshold = eta_threshold;
    geo.x1 = map.x1;
    geo.x2 = map.x2;

    geo.jac11 = disk.d_y1(map.x1);
    geo.jac12 = disk.d_y2(map.x1);
    geo.jac21 = disk.d_y1(map.x2);
    geo.jac22 = disk.d_y2(map.x2);

    geo.detj = geo.jac11 * geo.jac22 - geo.jac12 * geo.jac21;
    if (geo.detj.minCoeff() <= 0.0)
        throw DegenerateMap("Lagrangian map jacobian determinant is not positive everywhere");

    geo.inv11 = geo.jac22 / geo.detj;
    geo.inv12 = -geo.jac12 / geo.detj;
    geo.inv21 = -geo.jac21 / geo.detj;
    geo.inv22 = geo.jac11 / geo.detj;

    geo.g11 = geo.jac11 * geo.jac11 + geo.jac21 * geo.jac21;
    geo.g12 = geo.jac11 * geo.jac12 + geo.jac21 * geo.jac22;
    geo.g22 = geo.jac12 * geo.jac12 + geo.jac22 * geo.jac22;
    ArrayXXd detg = geo.g11 * geo.g22 - geo.g12 * geo.g12;
    geo.gi11 = geo.g22 / detg;
    geo.gi12 = -geo.g12 / detg;
    geo.gi22 = geo.g11 / detg;

    if (level == GeometryLevel::Core) return geo;

    const int n_theta = disk.n_theta();
    const int n_r = disk.n_r();

    // Boundary frame from the moving curve theta -> x(1,theta).
    ArrayXXd x1t_full = disk.d_theta(map.x1);
    ArrayXXd x2t_full = disk.d_theta(map.x2);
    ArrayXXd x1tt_full = disk.d_theta(x1t_full);
    ArrayXXd x2tt_full = disk.d_theta(x2t_full);
    ArrayXd x1t = x1t_full.row(0).transpose();
    ArrayXd x2t = x2t_full.row(0).transpose();
    ArrayXd x1tt = x1tt_full.row(0).transpose();
    ArrayXd x2tt = x2tt_full.row(0).transpose();

    ArrayXd speed = (x1t * x1t + x2t * x2t).sqrt();
    if (speed.minCoeff() <= 0.0)
        throw DegenerateMap("boundary curve has a stationary point");
    geo.bt1 = x1t / speed;
    geo.bt2 = x2t / speed;
    // Outward normal for a counterclockwise curve: rotate the tangent by -90.
    geo.bn1 = geo.bt2;
    geo.bn2 = -geo.bt1;
    geo.curvature = (x1t * x2tt - x2t * x1tt) / (speed * speed * speed);
    geo.sigma = geo.curvature;
    geo.max_curvature = geo.curvature.abs().maxCoeff();
    geo.bweight = disk.boundary_weight() * speed;

    // Unit conormal in Lagrangian components: along y on the reference circle,
    // normalized with the inverse metric.
    geo.Nlow1.resize(n_theta);
    geo.Nlow2.resize(n_theta);
    geo.Nup1.resize(n_theta);
    geo.Nup2.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        double y1 = disk.y1_grid()(0, i), y2 = disk.y2_grid()(0, i);
        double gi11 = geo.gi11(0, i), gi12 = geo.gi12(0, i), gi22 = geo.gi22(0, i);
        double norm = std::sqrt(gi11 * y1 * y1 + 2 * gi12 * y1 * y2 + gi22 * y2 * y2);
        geo.Nlow1[i] = y1 / norm;
        geo.Nlow2[i] = y2 / norm;
        geo.Nup1[i] = gi11 * geo.Nlow1[i] + gi12 * geo.Nlow2[i];
        geo.Nup2[i] = gi12 * geo.Nlow1[i] + gi22 * geo.Nlow2[i];
    }

    InjectivityReport inj = injectivity_radius(geo, eta_threshold);
    geo.l1 = inj.l1;
    geo.l0 = inj.l0;
    geo.d0 = geo.l0 / 4.0;

    // Collar: distance from each particle to the moving boundary, foot-point
    // normal where the cutoff is active.
    TrigCurve curve(geo.x1.row(0).transpose(), geo.x2.row(0).transpose());
    const int oversample = 8 * n_theta;
    std::vector<double> sx(oversample), sy(oversample), ss(oversample);
    for (int k = 0; k < oversample; ++k) {
        double s = 2.0 * kPi * k / oversample;
        double p[2], d1[2], d2[2];
        curve.eval(s, p, d1, d2);
        sx[k] = p[0];
        sy[k] = p[1];
        ss[k] = s;
    }

    geo.dist.setZero(n_r, n_theta);
    geo.eta.setZero(n_r, n_theta);
    geo.en1.setZero(n_r, n_theta);
    geo.en2.setZero(n_r, n_theta);
    geo.q11.setZero(n_r, n_theta);
    geo.q12.setZero(n_r, n_theta);
    geo.q22.setZero(n_r, n_theta);

    for (int j = 0; j < n_r; ++j) {
        for (int i = 0; i < n_theta; ++i) {
            double px = geo.x1(j, i), py = geo.x2(j, i);
            double nx, ny, d;
            if (j == 0) {
                d = 0.0;
                nx = geo.bn1[i];
                ny = geo.bn2[i];
            } else {
                int best = 0;
                double best_d2 = 1e300;
                for (int k = 0; k < oversample; ++k) {
                    double dx = sx[k] - px, dy = sy[k] - py;
                    double d2 = dx * dx + dy * dy;
                    if (d2 < best_d2) {
                        best_d2 = d2;
                        best = k;
                    }
                }
                double s = ss[best];
                for (int it = 0; it < 3; ++it) {
                    double p[2], d1[2], d2v[2];
                    curve.eval(s, p, d1, d2v);
                    double rx = p[0] - px, ry = p[1] - py;
                    double grad = rx * d1[0] + ry * d1[1];
                    double hess = d1[0] * d1[0] + d1[1] * d1[1] + rx * d2v[0] + ry * d2v[1];
                    if (hess > 0) s -= grad / hess;
                }
                double p[2], d1[2], d2v[2];
                curve.eval(s, p, d1, d2v);
                double rx = p[0] - px, ry = p[1] - py;
                d = std::sqrt(rx * rx + ry * ry);
                if (d > 1e-12) {
                    nx = rx / d;
                    ny = ry / d;
                } else {
                    double sp = std::sqrt(d1[0] * d1[0] + d1[1] * d1[1]);
                    nx = d1[1] / sp;
                    ny = -d1[0] / sp;
                }
            }
            double eta = geo.d0 > 0.0 ? collar_cutoff(d / geo.d0) : (d == 0.0 ? 1.0 : 0.0);
            geo.dist(j, i) = d;
            geo.eta(j, i) = eta;
            if (eta > 0.0) {
                geo.en1(j, i) = nx;
                geo.en2(j, i) = ny;
            }
            double e2 = eta * eta;
            geo.q11(j, i) = 1.0 - e2 * geo.en1(j, i) * geo.en1(j, i);
            geo.q12(j, i) = -e2 * geo.en1(j, i) * geo.en2(j, i);
            geo.q22(j, i) = 1.0 - e2 * geo.en2(j, i) * geo.en2(j, i);
        }
    }

    return geo;
}

GeometryRates geometry_material_derivatives(const GeometryCache& geo, const Field& v) {
    v.require(1, Frame::Eulerian, "geometry_material_derivatives");
    const ReferenceDisk& disk = *geo.disk;
    const int n_r = disk.n_r(), n_theta = disk.n_theta();

    // Eulerian velocity gradient dv(i,k) = d_i v^k.
    ArrayXXd dv11 = geo.euler_d1(v.comp(0));
    ArrayXXd dv12 = geo.euler_d1(v.comp(1));
    ArrayXXd dv21 = geo.euler_d2(v.comp(0));
    ArrayXXd dv22 = geo.euler_d2(v.comp(1));

    GeometryRates rates;
    rates.dt_g = Field(2, Frame::Lagrangian, n_r, n_theta);
    rates.dt_ginv = Field(2, Frame::Lagrangian, n_r, n_theta);
    rates.volume_rate = dv11 + dv22;

    // D_t g_ab = (dx/dy)^T (dv + dv^T) (dx/dy), no Christoffel terms needed.
    ArrayXXd s11 = 2.0 * dv11;
    ArrayXXd s12 = dv12 + dv21;
    ArrayXXd s22 = 2.0 * dv22;
    const ArrayXXd& j11 = geo.jac11;
    const ArrayXXd& j12 = geo.jac12;
    const ArrayXXd& j21 = geo.jac21;
    const ArrayXXd& j22 = geo.jac22;

    ArrayXXd h11 = j11 * s11 + j21 * s12; // (jac^T s)(a=1, i)
    ArrayXXd h12 = j11 * s12 + j21 * s22;
    ArrayXXd h21 = j12 * s11 + j22 * s12;
    ArrayXXd h22 = j12 * s12 + j22 * s22;

    ArrayXXd dtg11 = h11 * j11 + h12 * j21;
    ArrayXXd dtg12 = h11 * j12 + h12 * j22;
    ArrayXXd dtg22 = h21 * j12 + h22 * j22;

    rates.dt_g.comp({0, 0}) = dtg11;
    rates.dt_g.comp({0, 1}) = dtg12;
    rates.dt_g.comp({1, 0}) = dtg12;
    rates.dt_g.comp({1, 1}) = dtg22;

    // D_t g^ab = -g^ac g^bd D_t g_cd.
    const ArrayXXd& gi11 = geo.gi11;
    const ArrayXXd& gi12 = geo.gi12;
    const ArrayXXd& gi22 = geo.gi22;
    ArrayXXd m11 = gi11 * dtg11 + gi12 * dtg12; // (g^-1 dtg)(a, c)
    ArrayXXd m12 = gi11 * dtg12 + gi12 * dtg22;
    ArrayXXd m21 = gi12 * dtg11 + gi22 * dtg12;
    ArrayXXd m22 = gi12 * dtg12 + gi22 * dtg22;
    ArrayXXd dtgi11 = -(m11 * gi11 + m12 * gi12);
    ArrayXXd dtgi12 = -(m11 * gi12 + m12 * gi22);
    ArrayXXd dtgi22 = -(m21 * gi12 + m22 * gi22);
    rates.dt_ginv.comp({0, 0}) = dtgi11;
    rates.dt_ginv.comp({0, 1}) = dtgi12;
    rates.dt_ginv.comp({1, 0}) = dtgi12;
    rates.dt_ginv.comp({1, 1}) = dtgi22;

    // D_t N_a = -1/2 N_a (D_t g^cd) N_c N_d on the boundary.
    rates.dt_conormal = BoundaryField(1, Frame::Lagrangian, n_theta);
    rates.surface_rate.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        double N1 = geo.Nlow1[i], N2 = geo.Nlow2[i];
        double quad = dtgi11(0, i) * N1 * N1 + 2 * dtgi12(0, i) * N1 * N2 + dtgi22(0, i) * N2 * N2;
        rates.dt_conormal.comp(0)[i] = -0.5 * N1 * quad;
        rates.dt_conormal.comp(1)[i] = -0.5 * N2 * quad;
        double vn = v.comp(0)(0, i) * geo.bn1[i] + v.comp(1)(0, i) * geo.bn2[i];
        rates.surface_rate[i] = geo.sigma[i] * vn;
    }
    return rates;
}

InjectivityReport injectivity_radius(const GeometryCache& geo, double eta_threshold) {
    const int n = geo.disk->n_theta();
    struct Pair {
        double chord;
        bool violates;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            double dx = geo.x1(0, i) - geo.x1(0, k);
            double dy = geo.x2(0, i) - geo.x2(0, k);
            double chord = std::sqrt(dx * dx + dy * dy);
            double dn1 = geo.bn1[i] - geo.bn1[k];
            double dn2 = geo.bn2[i] - geo.bn2[k];
            double dn = std::sqrt(dn1 * dn1 + dn2 * dn2);
            // Slack absorbs roundoff so exact-threshold pairs do not flip.
            bool violates = dn > eta_threshold * (1.0 + 1e-12) + 1e-12;
            pairs.push_back({chord, violates});
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return a.chord < b.chord; });

    InjectivityReport rep;
    rep.max_curvature = geo.max_curvature;
    double l1 = 0.0;
    for (const Pair& p : pairs) {
        if (p.violates) break;
        l1 = p.chord;
    }
    rep.l1 = l1;
    double curv_bound = rep.max_curvature > 0 ? 1.0 / rep.max_curvature : 1e300;
    rep.l0 = std::min(l1 / 2.0, curv_bound);
    return rep;
}

} // namespace diskflow
