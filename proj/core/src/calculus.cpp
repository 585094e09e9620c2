#include "diskflow/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace diskflow {

Field eulerian_gradient(const Field& f, const GeometryCache& geo) {
    if (f.rank() > 0 && f.frame() != Frame::Eulerian)
        throw FrameMismatch("eulerian_gradient expects Eulerian components");
    if (f.rank() >= 4) throw RankMismatch("gradient would exceed the rank-4 cap");
    const int r = f.rank();
    Field out(r + 1, Frame::Eulerian, f.n_r(), f.n_theta());
    const int stride = 1 << r;
    for (int c = 0; c < f.n_components(); ++c) {
        out.comp(c) = geo.euler_d1(f.comp(c));
        out.comp(stride + c) = geo.euler_d2(f.comp(c));
    }
    return out;
}

Field grad_pow(const Field& f, int s, const GeometryCache& geo) {
    Field cur = f;
    for (int i = 0; i < s; ++i) cur = eulerian_gradient(cur, geo);
    return cur;
}

Field laplace_beltrami(const Field& h, const GeometryCache& geo) {
    h.require(0, Frame::Eulerian, "laplace_beltrami");
    const ReferenceDisk& disk = *geo.disk;
    ArrayXXd f1 = disk.d_y1(h.comp(0));
    ArrayXXd f2 = disk.d_y2(h.comp(0));
    ArrayXXd flux1 = geo.detj * (geo.gi11 * f1 + geo.gi12 * f2);
    ArrayXXd flux2 = geo.detj * (geo.gi12 * f1 + geo.gi22 * f2);
    return Field::scalar((disk.d_y1(flux1) + disk.d_y2(flux2)) / geo.detj);
}

DivCurl div_curl(const Field& v, const GeometryCache& geo) {
    v.require(1, Frame::Eulerian, "div_curl");
    Field dv = eulerian_gradient(v, geo); // dv(i,j) = d_i v_j
    DivCurl out;
    out.divergence = dv.comp({0, 0}) + dv.comp({1, 1});
    out.curl = Field(2, Frame::Eulerian, v.n_r(), v.n_theta());
    ArrayXXd c12 = dv.comp({0, 1}) - dv.comp({1, 0});
    out.curl.comp({0, 1}) = c12;
    out.curl.comp({1, 0}) = -c12;
    return out;
}

Field symmetric_dot(const Field& A, const Field& B) {
    if (A.rank() < 1 || B.rank() < 1)
        throw RankMismatch("symmetric_dot needs at least one slot on each factor");
    const int a = A.rank(), b = B.rank();
    const int r = a + b - 2;
    if (r > 4) throw RankMismatch("symmetric_dot result would exceed the rank-4 cap");
    Field out(r, Frame::Eulerian, A.n_r(), A.n_theta());

    std::array<int, 4> perm{};
    std::iota(perm.begin(), perm.begin() + std::max(r, 1), 0);
    double fact = 1.0;
    for (int i = 2; i <= r; ++i) fact *= i;

    for (int flat = 0; flat < out.n_components(); ++flat) {
        std::array<int, 4> idx{};
        for (int s = 0; s < r; ++s) idx[s] = Field::slot_of(flat, s, r);
        ArrayXXd acc = ArrayXXd::Zero(A.n_r(), A.n_theta());
        std::array<int, 4> p = perm;
        do {
            for (int k = 0; k < 2; ++k) {
                int fa = 0, fb = 0;
                for (int s = 0; s < a - 1; ++s) fa = (fa << 1) | idx[p[s]];
                fa = (fa << 1) | k;
                fb = k;
                for (int s = a - 1; s < r; ++s) fb = (fb << 1) | idx[p[s]];
                acc += A.comp(fa) * B.comp(fb);
            }
        } while (r >= 2 && std::next_permutation(p.begin(), p.begin() + r));
        out.comp(flat) = acc / fact;
    }
    return out;
}

BoundaryField boundary_project(const BoundaryField& S, const GeometryCache& geo) {
    if (S.rank() > 0 && S.frame() != Frame::Eulerian)
        throw FrameMismatch("boundary_project expects Eulerian components");
    const int r = S.rank();
    const int n = S.n_theta();
    BoundaryField out = S;
    // Apply the tangential projector one slot at a time.
    for (int slot = 0; slot < r; ++slot) {
        BoundaryField next(r, S.frame(), n);
        for (int flat = 0; flat < out.n_components(); ++flat) {
            ArrayXd acc = ArrayXd::Zero(n);
            int i = Field::slot_of(flat, slot, r);
            for (int j = 0; j < 2; ++j) {
                int src = Field::with_slot(flat, slot, r, j);
                ArrayXd ni = (i == 0) ? geo.bn1 : geo.bn2;
                ArrayXd nj = (j == 0) ? geo.bn1 : geo.bn2;
                ArrayXd gamma = ((i == j) ? ArrayXd::Ones(n) : ArrayXd::Zero(n)) - ni * nj;
                acc += gamma * out.comp(src);
            }
            next.comp(flat) = acc;
        }
        out = next;
    }
    return out;
}

ArrayXXd q_inner(const Field& a, const Field& b, const GeometryCache& geo, int n_q_slots) {
    if (a.rank() != b.rank()) throw RankMismatch("q_inner operands must have equal rank");
    const int r = a.rank();
    if (n_q_slots < 0) n_q_slots = r;
    if (n_q_slots > r) throw RankMismatch("q_inner: more q slots than tensor slots");
    const int n_r = a.n_r(), n_t = a.n_theta();
    ArrayXXd out = ArrayXXd::Zero(n_r, n_t);
    auto q = [&](int i, int j) -> const ArrayXXd& {
        if (i == 0 && j == 0) return geo.q11;
        if (i == 1 && j == 1) return geo.q22;
        return geo.q12;
    };
    for (int fa = 0; fa < a.n_components(); ++fa) {
        for (int fb = 0; fb < b.n_components(); ++fb) {
            bool delta_ok = true;
            for (int s = n_q_slots; s < r; ++s)
                if (Field::slot_of(fa, s, r) != Field::slot_of(fb, s, r)) delta_ok = false;
            if (!delta_ok) continue;
            ArrayXXd w = ArrayXXd::Ones(n_r, n_t);
            for (int s = 0; s < n_q_slots; ++s)
                w *= q(Field::slot_of(fa, s, r), Field::slot_of(fb, s, r));
            out += w * a.comp(fa) * b.comp(fb);
        }
    }
    return out;
}

double l2_norm(const Field& f, const GeometryCache& geo) {
    return std::sqrt(std::max(0.0, geo.integrate_phys(f.norm_squared())));
}

double l2_norm_boundary(const BoundaryField& f, const GeometryCache& geo) {
    return std::sqrt(std::max(0.0, geo.boundary_integrate_phys(f.norm_squared())));
}

namespace {

// ||d^j w||^2 for scalar w; recurses through components above the rank cap.
double grad_norm2_scalar(const Field& w, int j, const GeometryCache& geo) {
    if (j <= 4) {
        Field d = grad_pow(w, j, geo);
        return geo.integrate_phys(d.norm_squared());
    }
    Field g = eulerian_gradient(w, geo);
    double total = 0.0;
    for (int c = 0; c < 2; ++c) total += grad_norm2_scalar(Field::scalar(g.comp(c)), j - 1, geo);
    return total;
}

} // namespace

double sobolev_norm(const Field& u, int order, const GeometryCache& geo) {
    double total = 0.0;
    for (int c = 0; c < u.n_components(); ++c) {
        Field w = Field::scalar(u.comp(c));
        for (int j = 0; j <= order; ++j) total += grad_norm2_scalar(w, j, geo);
    }
    return std::sqrt(total);
}

namespace {

double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out *= double(n - k + i) / i;
    return out;
}

// D_t of a time-independent Eulerian tensor: v^k d_k T.
Field advect(const Field& v, const Field& T, const GeometryCache& geo) {
    Field gT = eulerian_gradient(T, geo);
    Field out = Field::zeros_like(T);
    const int r = T.rank();
    for (int c = 0; c < T.n_components(); ++c)
        for (int k = 0; k < 2; ++k) out.comp(c) += v.comp(k) * gT.comp((k << r) | c);
    return out;
}

} // namespace

double commutator_residual(CommutatorKind kind, int order, const Field& v, const Field& f,
                           const GeometryCache& geo) {
    v.require(1, Frame::Eulerian, "commutator_residual");
    f.require(0, Frame::Eulerian, "commutator_residual");

    Field gf = eulerian_gradient(f, geo);
    Field dtf = advect(v, f, geo); // scalar D_t f

    switch (kind) {
    case CommutatorKind::DtGrad: {
        Field lhs = advect(v, gf, geo);
        lhs -= eulerian_gradient(dtf, geo);
        Field gv = eulerian_gradient(v, geo);
        Field correction(1, Frame::Eulerian, f.n_r(), f.n_theta());
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                correction.comp(i) += gv.comp({i, k}) * gf.comp(k);
        lhs += correction;
        return l2_norm(lhs, geo);
    }
    case CommutatorKind::LaplaceDt: {
        Field lhs = laplace_beltrami(dtf, geo);
        lhs -= advect(v, laplace_beltrami(f, geo), geo);
        // (Lap v^j) d_j f + 2 d^i v^j d_i d_j f
        Field hess = grad_pow(f, 2, geo);
        Field gv = eulerian_gradient(v, geo);
        ArrayXXd rhs = ArrayXXd::Zero(f.n_r(), f.n_theta());
        for (int j = 0; j < 2; ++j) {
            Field lv = laplace_beltrami(Field::scalar(v.comp(j)), geo);
            rhs += lv.comp(0) * gf.comp(j);
            for (int i = 0; i < 2; ++i) rhs += 2.0 * gv.comp({i, j}) * hess.comp({i, j});
        }
        lhs -= Field::scalar(rhs);
        return l2_norm(lhs, geo);
    }
    case CommutatorKind::DtGradR: {
        const int r = order;
        Field drf = grad_pow(f, r, geo);
        Field lhs = advect(v, drf, geo);
        lhs -= grad_pow(dtf, r, geo);
        for (int s = 0; s < r; ++s) {
            Field dv = grad_pow(v, s + 1, geo);
            Field df = grad_pow(f, r - s, geo);
            lhs += binomial(r, s + 1) * symmetric_dot(dv, df);
        }
        return l2_norm(lhs, geo);
    }
    }
    throw DiskflowError("unknown commutator kind");
}

} // namespace diskflow
