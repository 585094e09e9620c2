#include "diskflow/elliptic.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/LU>

namespace diskflow {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kBesselJ0Root1 = 2.404825557695773; // first zero of J0
} // namespace

struct FlatDiskSolver::Impl {
    const ReferenceDisk* disk;
    std::vector<Eigen::PartialPivLU<MatrixXd>> lu;
    bool bordered_m0 = false;
};

FlatDiskSolver::~FlatDiskSolver() = default;
FlatDiskSolver::FlatDiskSolver(FlatDiskSolver&&) noexcept = default;

FlatDiskSolver::FlatDiskSolver(const ReferenceDisk& disk, BoundaryCondition bc)
    : impl_(new Impl), bc_(bc) {
    impl_->disk = &disk;
    const int n_r = disk.n_r();
    const int N = disk.doubled_size() - 1;
    const MatrixXd& D = disk.cheb_D();
    MatrixXd D2 = D * D;
    const int n_modes = disk.n_theta() / 2 + 1;
    impl_->lu.reserve(n_modes);

    for (int m = 0; m < n_modes; ++m) {
        double parity = (m % 2 == 0) ? 1.0 : -1.0;
        MatrixXd A = MatrixXd::Zero(n_r, n_r);
        for (int j = 0; j < n_r; ++j) {
            double r = disk.r(j);
            for (int jp = 0; jp < n_r; ++jp) {
                double d1 = D(j, jp) + parity * D(j, N - jp);
                double d2 = D2(j, jp) + parity * D2(j, N - jp);
                A(j, jp) = d2 + d1 / r;
            }
            A(j, j) -= double(m) * m / (r * r);
        }
        // Boundary row at ring 0 (r = 1).
        if (bc == BoundaryCondition::Dirichlet) {
            A.row(0).setZero();
            A(0, 0) = 1.0;
        } else {
            for (int jp = 0; jp < n_r; ++jp) A(0, jp) = D(0, jp) + parity * D(0, N - jp);
        }

        if (bc == BoundaryCondition::Neumann && m == 0) {
            // Constants solve the homogeneous problem; border with a zero-mean
            // constraint and a multiplier column on the interior rows.
            impl_->bordered_m0 = true;
            MatrixXd B = MatrixXd::Zero(n_r + 1, n_r + 1);
            B.topLeftCorner(n_r, n_r) = A;
            for (int j = 1; j < n_r; ++j) B(j, n_r) = 1.0;
            for (int jp = 0; jp < n_r; ++jp) B(n_r, jp) = disk.radial_weights()[jp];
            impl_->lu.emplace_back(B);
        } else {
            impl_->lu.emplace_back(A);
        }
    }
}

ArrayXXd FlatDiskSolver::solve(const ArrayXXd& rhs, const ArrayXd& bdata) const {
    const ReferenceDisk& disk = *impl_->disk;
    const int n_r = disk.n_r();
    const int n_theta = disk.n_theta();
    const int n_modes = n_theta / 2 + 1;

    MatrixXcd fhat = disk.fourier_analysis(rhs);
    VectorXcd bhat = VectorXcd::Zero(n_modes);
    for (int m = 0; m < n_modes; ++m)
        for (int i = 0; i < n_theta; ++i) {
            double ang = -m * disk.theta(i);
            bhat[m] += std::complex<double>(std::cos(ang), std::sin(ang)) * bdata[i] /
                       double(n_theta);
        }

    MatrixXcd qhat = MatrixXcd::Zero(n_r, n_modes);
    for (int m = 0; m < n_modes; ++m) {
        bool bordered = impl_->bordered_m0 && m == 0;
        int dim = bordered ? n_r + 1 : n_r;
        MatrixXd rhs_parts = MatrixXd::Zero(dim, 2);
        rhs_parts(0, 0) = bhat[m].real();
        rhs_parts(0, 1) = bhat[m].imag();
        for (int j = 1; j < n_r; ++j) {
            rhs_parts(j, 0) = fhat(j, m).real();
            rhs_parts(j, 1) = fhat(j, m).imag();
        }
        MatrixXd sol = impl_->lu[m].solve(rhs_parts);
        for (int j = 0; j < n_r; ++j) qhat(j, m) = {sol(j, 0), sol(j, 1)};
    }
    return disk.fourier_synthesis(qhat);
}

namespace {

// Rows of the discrete system: boundary condition on ring 0, div-form
// Laplacian on the interior rings.
ArrayXXd curved_apply(const ArrayXXd& q, const GeometryCache& geo, BoundaryCondition bc) {
    Field lap = laplace_beltrami(Field::scalar(q), geo);
    ArrayXXd out = lap.comp(0);
    if (bc == BoundaryCondition::Dirichlet) {
        out.row(0) = q.row(0);
    } else {
        Field g = eulerian_gradient(Field::scalar(q), geo);
        for (int i = 0; i < int(q.cols()); ++i)
            out(0, i) = geo.bn1[i] * g.comp(0)(0, i) + geo.bn2[i] * g.comp(1)(0, i);
    }
    return out;
}

double grid_dot(const ArrayXXd& a, const ArrayXXd& b) { return (a * b).sum(); }

} // namespace

EllipticSolution solve(const EllipticProblem& problem, const GeometryCache& geo) {
    const ReferenceDisk& disk = *geo.disk;
    problem.rhs.require(0, Frame::Eulerian, "elliptic solve rhs");

    ArrayXXd rhs = problem.rhs.comp(0);
    ArrayXd bdata = problem.boundary_data;
    if (bdata.size() == 0) bdata = ArrayXd::Zero(disk.n_theta());

    EllipticSolution out;
    double volume = geo.integrate_phys(ArrayXXd::Ones(disk.n_r(), disk.n_theta()));
    if (problem.bc == BoundaryCondition::Neumann) {
        // Divergence theorem requires int rhs dmu = boundary flux integral;
        // absorb any defect into a uniform shift and record it.
        double defect = geo.integrate_phys(rhs) - geo.boundary_integrate_phys(bdata);
        out.neumann_defect = defect;
        rhs -= defect / volume;
    }

    FlatDiskSolver flat(disk, problem.bc);

    // System vector: boundary data on ring 0, source elsewhere.
    ArrayXXd b = rhs;
    b.row(0) = bdata.transpose();

    auto precond = [&](const ArrayXXd& v) {
        ArrayXXd interior = v;
        ArrayXd brow = v.row(0).transpose();
        interior.row(0).setZero();
        return flat.solve(interior, brow);
    };

    ArrayXXd x = precond(b);
    double bnorm = std::sqrt(grid_dot(b, b));

    // GMRES without restart on the left-preconditioned system.
    const int max_it = problem.max_iterations;
    ArrayXXd r0 = b - curved_apply(x, geo, problem.bc);
    ArrayXXd z0 = precond(r0);
    double beta = std::sqrt(grid_dot(z0, z0));
    ArrayXXd zb = precond(b);
    double zbnorm = std::sqrt(grid_dot(zb, zb));
    // Convergence is judged in the preconditioned norm (solution units); the
    // absolute floor keeps roundoff-level sources from demanding an
    // unreachable relative reduction.
    double target = std::max(problem.tolerance * std::max(zbnorm, 1e-300),
                             problem.absolute_floor);

    int iterations = 0;
    if (beta > target) {
        std::vector<ArrayXXd> V;
        V.push_back(z0 / beta);
        std::vector<std::vector<double>> H; // H[k] holds column k, length k+2
        std::vector<double> cs, sn, g;
        g.push_back(beta);

        for (int k = 0; k < max_it; ++k) {
            ArrayXXd w = precond(curved_apply(V[k], geo, problem.bc));
            std::vector<double> h(k + 2, 0.0);
            for (int i = 0; i <= k; ++i) {
                h[i] = grid_dot(w, V[i]);
                w -= h[i] * V[i];
            }
            h[k + 1] = std::sqrt(grid_dot(w, w));
            double wnorm = h[k + 1]; // subdiagonal entry before the rotations zero it
            // Givens rotations to keep the least-squares system triangular.
            for (int i = 0; i < k; ++i) {
                double t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            double denom = std::hypot(h[k], h[k + 1]);
            double c = denom > 0 ? h[k] / denom : 1.0;
            double s = denom > 0 ? h[k + 1] / denom : 0.0;
            cs.push_back(c);
            sn.push_back(s);
            h[k] = denom;
            h[k + 1] = 0.0;
            g.push_back(-s * g[k]);
            g[k] = c * g[k];
            H.push_back(h);
            iterations = k + 1;

            double res = std::abs(g[k + 1]);
            bool stagnated = h[k] == 0.0 || wnorm == 0.0;
            if (res <= target || k == max_it - 1 || stagnated ||
                !(std::isfinite(res))) {
                // Back substitution for the Krylov coefficients.
                int dim = k + 1;
                std::vector<double> y(dim, 0.0);
                for (int i = dim - 1; i >= 0; --i) {
                    double sum = g[i];
                    for (int j = i + 1; j < dim; ++j) sum -= H[j][i] * y[j];
                    y[i] = sum / H[i][i];
                }
                for (int i = 0; i < dim; ++i) x += y[i] * V[i];
                break;
            }
            V.push_back(w / wnorm);
        }
    }

    ArrayXXd final_res = b - curved_apply(x, geo, problem.bc);
    ArrayXXd z_final = precond(final_res);
    double z_final_norm = std::sqrt(grid_dot(z_final, z_final));
    out.residual = z_final_norm / std::max(zbnorm, 1e-300);
    out.iterations = iterations;
    if (bnorm > 0 && z_final_norm > 100.0 * target)
        throw NoConvergence("elliptic solve stalled above tolerance", iterations, out.residual);

    if (problem.bc == BoundaryCondition::Neumann) {
        double mean = geo.integrate_phys(x) / volume;
        x -= mean;
    }
    out.q = Field::scalar(x);
    return out;
}

PoincareReport poincare_check(const Field& q, const GeometryCache& geo) {
    q.require(0, Frame::Eulerian, "poincare_check");
    PoincareReport rep;
    double nq = l2_norm(q, geo);
    double ng = l2_norm(eulerian_gradient(q, geo), geo);
    double nl = l2_norm(laplace_beltrami(q, geo), geo);
    rep.ratio_q_grad = ng > 0 ? nq / ng : 0.0;
    rep.ratio_grad_lap = nl > 0 ? ng / nl : 0.0;
    double volume = geo.integrate_phys(ArrayXXd::Ones(q.n_r(), q.n_theta()));
    // Round domain minimizes the first Dirichlet eigenvalue at fixed volume.
    rep.reference_bound = std::sqrt(volume / kPi) / kBesselJ0Root1;
    rep.within_reference = rep.ratio_q_grad <= rep.reference_bound * (1.0 + 1e-8);
    return rep;
}

double projection_formula_residual(const Field& q, const GeometryCache& geo) {
    q.require(0, Frame::Eulerian, "projection_formula_residual");
    Field hess = grad_pow(q, 2, geo);
    BoundaryField proj = boundary_project(boundary_restrict(hess), geo);

    Field grad = eulerian_gradient(q, geo);
    const int n = geo.n_theta();
    ArrayXd dn(n);
    for (int i = 0; i < n; ++i)
        dn[i] = geo.bn1[i] * grad.comp(0)(0, i) + geo.bn2[i] * grad.comp(1)(0, i);

    BoundaryField residual = proj;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            ArrayXd ta = (a == 0) ? geo.bt1 : geo.bt2;
            ArrayXd tb = (b == 0) ? geo.bt1 : geo.bt2;
            residual.comp(Field::flat_index({a, b})) -= geo.curvature * ta * tb * dn;
        }
    return l2_norm_boundary(residual, geo);
}

HodgeReport hodge_check(const Field& u, int r, const GeometryCache& geo) {
    u.require(1, Frame::Eulerian, "hodge_check");
    if (r < 1 || r > 2)
        throw RankMismatch("hodge_check supports derivative orders 1 and 2");

    HodgeReport rep;
    rep.K = geo.max_curvature + (geo.l0 > 0 ? 1.0 / geo.l0 : 0.0);

    Field beta = grad_pow(u, r, geo);      // slots: I (r), component last
    Field dbeta = grad_pow(u, r + 1, geo); // slots: k, I (r), component last

    rep.lhs = geo.integrate_phys(dbeta.norm_squared());

    // Normal-component, tangential-derivative part of the gradient energy.
    const int rank = r + 2;
    ArrayXXd nt = ArrayXXd::Zero(u.n_r(), u.n_theta());
    ArrayXXd eta2 = geo.eta * geo.eta;
    auto qprod = [&](int i, int j) -> const ArrayXXd& {
        if (i == 0 && j == 0) return geo.q11;
        if (i == 1 && j == 1) return geo.q22;
        return geo.q12;
    };
    for (int fa = 0; fa < dbeta.n_components(); ++fa)
        for (int fb = 0; fb < dbeta.n_components(); ++fb) {
            if (Field::slot_of(fa, 0, rank) != Field::slot_of(fb, 0, rank)) continue;
            int ia = Field::slot_of(fa, rank - 1, rank);
            int ib = Field::slot_of(fb, rank - 1, rank);
            ArrayXXd w = eta2 * ((ia == 0 ? geo.en1 : geo.en2) * (ib == 0 ? geo.en1 : geo.en2));
            for (int s = 1; s < rank - 1; ++s)
                w *= qprod(Field::slot_of(fa, s, rank), Field::slot_of(fb, s, rank));
            nt += w * dbeta.comp(fa) * dbeta.comp(fb);
        }

    DivCurl dc = div_curl(u, geo);
    Field div_r = grad_pow(Field::scalar(dc.divergence), r, geo);
    Field curl_r = grad_pow(dc.curl, r, geo);

    ArrayXXd integrand = nt + div_r.norm_squared() + curl_r.norm_squared() +
                         rep.K * rep.K * beta.norm_squared();
    rep.rhs = geo.integrate_phys(integrand);
    rep.constant = (rep.rhs > 0) ? rep.lhs / rep.rhs : (rep.lhs > 0 ? 1e300 : 1.0);
    return rep;
}

TraceReport trace_check(const Field& alpha, const GeometryCache& geo) {
    TraceReport rep;
    rep.boundary_norm = l2_norm_boundary(boundary_restrict(alpha), geo);
    rep.interior_norms = l2_norm(alpha, geo) + l2_norm(eulerian_gradient(alpha, geo), geo);
    rep.ratio = rep.interior_norms > 0 ? rep.boundary_norm / rep.interior_norms
                                       : (rep.boundary_norm > 0 ? 1e300 : 0.0);
    return rep;
}

} // namespace diskflow
