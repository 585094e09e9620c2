#pragma once

#include "diskflow/field.hpp"

namespace diskflow {

// Positions x(y) of fluid particles labeled by reference-disk points y,
// stored componentwise over the grid.
struct LagrangianMap {
    ArrayXXd x1, x2;

    static LagrangianMap identity(const ReferenceDisk& disk);
    static LagrangianMap dilation(const ReferenceDisk& disk, double lambda);
    static LagrangianMap rotation(const ReferenceDisk& disk, double angle);
};

enum class GeometryLevel {
    Core, // jacobian, metric, measures: enough to apply differential operators
    Full  // plus boundary frame, curvature, collar cutoff and injectivity radii
};

// Everything derived from the map that the calculus and energy layers consume.
// jac(i,a) = dx^i/dy^a, inv(a,i) = dy^a/dx^i, g_ab the pulled-back metric.
struct GeometryCache {
    const ReferenceDisk* disk = nullptr;
    GeometryLevel level = GeometryLevel::Core;

    ArrayXXd x1, x2;
    ArrayXXd jac11, jac12, jac21, jac22;
    ArrayXXd inv11, inv12, inv21, inv22;
    ArrayXXd detj; // equals sqrt(det g) for orientation-preserving maps
    ArrayXXd g11, g12, g22;
    ArrayXXd gi11, gi12, gi22;

    // Boundary frame in Eulerian components: outward unit normal, unit
    // tangent, signed curvature of the moving boundary curve.  sigma is the
    // trace of the second fundamental form, which in 2d is the curvature.
    ArrayXd bn1, bn2, bt1, bt2, curvature, sigma;
    // Unit conormal in Lagrangian components, lower and raised.
    ArrayXd Nlow1, Nlow2, Nup1, Nup2;
    ArrayXd bweight; // physical arc-length weights per boundary node

    // Collar data: distance to the moving boundary, cutoff eta(d/d0),
    // extended outward normal, and the interior contraction weights
    // q^ij = delta^ij - eta^2 n^i n^j used by the energy inner products.
    ArrayXXd dist, eta, en1, en2, q11, q12, q22;

    double eta_threshold = 1.0;
    double l1 = 0.0, l0 = 0.0, d0 = 0.0, max_curvature = 0.0;

    int n_r() const { return disk->n_r(); }
    int n_theta() const { return disk->n_theta(); }

    // Eulerian partial derivatives of a scalar sample grid.
    ArrayXXd euler_d1(const ArrayXXd& f) const;
    ArrayXXd euler_d2(const ArrayXXd& f) const;

    // Integrals against the moving measures: dx = detj dy on the volume and
    // arc length on the moving boundary.
    double integrate_phys(const ArrayXXd& f) const;
    double boundary_integrate_phys(const ArrayXd& f) const;
};

GeometryCache build_geometry(const ReferenceDisk& disk, const LagrangianMap& map,
                             GeometryLevel level = GeometryLevel::Full,
                             double eta_threshold = 1.0);

// First variations of the metric data under a velocity field v (Eulerian
// components): D_t g_ab, D_t g^ab, D_t N_a, and the volume/surface measure
// rates div v and sigma (v.n).
struct GeometryRates {
    Field dt_g;      // rank 2, Lagrangian
    Field dt_ginv;   // rank 2, Lagrangian
    BoundaryField dt_conormal; // rank 1, Lagrangian, lower index
    ArrayXXd volume_rate;
    ArrayXd surface_rate;
};

GeometryRates geometry_material_derivatives(const GeometryCache& geo, const Field& v);

// l1 = largest realized boundary chord below which all pairs of boundary
// points have normals within eta_threshold of each other; l0 folds in the
// curvature bound: l0 = min(l1/2, 1/max|theta|).
struct InjectivityReport {
    double l1 = 0.0;
    double l0 = 0.0;
    double max_curvature = 0.0;
};

InjectivityReport injectivity_radius(const GeometryCache& geo, double eta_threshold);

} // namespace diskflow
