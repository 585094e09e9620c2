#include "diskflow/grid.hpp"

#include <cmath>

namespace diskflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Standard Chebyshev-Gauss-Lobatto differentiation matrix on nodes
// x_j = cos(j*pi/N), j = 0..N.
MatrixXd cheb_matrix(int N) {
    MatrixXd D = MatrixXd::Zero(N + 1, N + 1);
    VectorXd x(N + 1), c(N + 1);
    for (int j = 0; j <= N; ++j) {
        x[j] = std::cos(j * kPi / N);
        c[j] = (j == 0 || j == N) ? 2.0 : 1.0;
    }
    for (int i = 0; i <= N; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            D(i, j) = (c[i] / c[j]) * sign / (x[i] - x[j]);
            row_sum += D(i, j);
        }
        D(i, i) = -row_sum; // negative sum trick keeps rows consistent
    }
    return D;
}

// Moments m_k = int_{-1}^{1} T_k(x) |x| dx.  Zero for odd k and for
// k = 2 mod 4; m_0 = 1 and m_k = -4/(k^2-4) for k = 0 mod 4, k >= 4.
double abs_weight_moment(int k) {
    if (k == 0) return 1.0;
    if (k % 2 == 1) return 0.0;
    if (k % 4 == 2) return 0.0;
    return -4.0 / (double(k) * k - 4.0);
}

} // namespace

ReferenceDisk::ReferenceDisk(int n_r, int n_theta) : n_r_(n_r), n_theta_(n_theta) {
    if (n_r < 9) throw ConfigError("radial node count must be at least 9");
    if (n_theta < 8 || n_theta % 2 != 0)
        throw ConfigError("angular node count must be even and at least 8");

    const int N = 2 * n_r - 1; // doubled-grid polynomial degree, odd
    dtheta_ = 2.0 * kPi / n_theta;

    r_.resize(n_r);
    for (int j = 0; j < n_r; ++j) r_[j] = std::cos(j * kPi / N);

    theta_.resize(n_theta);
    cos_t_.resize(n_theta);
    sin_t_.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        theta_[i] = dtheta_ * i;
        cos_t_[i] = std::cos(theta_[i]);
        sin_t_[i] = std::sin(theta_[i]);
    }

    y1_.resize(n_r, n_theta);
    y2_.resize(n_r, n_theta);
    inv_r_.resize(n_r, n_theta);
    for (int j = 0; j < n_r; ++j)
        for (int i = 0; i < n_theta; ++i) {
            y1_(j, i) = r_[j] * cos_t_[i];
            y2_(j, i) = r_[j] * sin_t_[i];
            inv_r_(j, i) = 1.0 / r_[j];
        }

    cheb_D_ = cheb_matrix(N);
    // Split into the block acting on stored rings and the mirror block.
    // Doubled row j >= n_r holds the ring N-j sampled half a turn away.
    dr_self_ = cheb_D_.topLeftCorner(n_r, n_r);
    dr_mirror_.resize(n_r, n_r);
    for (int j = 0; j < n_r; ++j)
        for (int jp = 0; jp < n_r; ++jp)
            dr_mirror_(j, jp) = cheb_D_(j, N - jp);

    // Fourier differentiation matrix for an even number of points.
    fourier_D_ = MatrixXd::Zero(n_theta, n_theta);
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_theta; ++j) {
            if (i == j) continue;
            double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            fourier_D_(i, j) = 0.5 * sign / std::tan(0.5 * (i - j) * dtheta_);
        }

    // Nodal values on the doubled grid -> Chebyshev coefficients.
    cheb_analysis_.resize(N + 1, N + 1);
    for (int k = 0; k <= N; ++k) {
        double ck = (k == 0 || k == N) ? 2.0 : 1.0;
        for (int j = 0; j <= N; ++j) {
            double cj = (j == 0 || j == N) ? 2.0 : 1.0;
            cheb_analysis_(k, j) = 2.0 / (N * ck * cj) * std::cos(k * j * kPi / N);
        }
    }

    // Interpolatory quadrature for int_{-1}^1 G(x)|x| dx on the doubled grid,
    // folded onto the positive rings.  Together with the angular factor this
    // integrates over the flat disk: sum_j w_j f(r_j, t_i) ~ int f dy.
    VectorXd moments(N + 1);
    for (int k = 0; k <= N; ++k) moments[k] = abs_weight_moment(k);
    VectorXd w_doubled = cheb_analysis_.transpose() * moments;
    area_w_.resize(n_r);
    for (int j = 0; j < n_r; ++j) area_w_[j] = dtheta_ * w_doubled[j];
}

ArrayXXd ReferenceDisk::d_r(const ArrayXXd& f) const {
    // Mirror contribution needs columns shifted by half a turn.
    ArrayXXd shifted(n_r_, n_theta_);
    const int half = n_theta_ / 2;
    shifted.leftCols(n_theta_ - half) = f.rightCols(n_theta_ - half);
    shifted.rightCols(half) = f.leftCols(half);
    return (dr_self_ * f.matrix() + dr_mirror_ * shifted.matrix()).array();
}

ArrayXXd ReferenceDisk::d_theta(const ArrayXXd& f) const {
    return (f.matrix() * fourier_D_.transpose()).array();
}

ArrayXXd ReferenceDisk::d_y1(const ArrayXXd& f) const {
    ArrayXXd fr = d_r(f);
    ArrayXXd ft = d_theta(f);
    ArrayXXd out(n_r_, n_theta_);
    for (int j = 0; j < n_r_; ++j)
        for (int i = 0; i < n_theta_; ++i)
            out(j, i) = cos_t_[i] * fr(j, i) - sin_t_[i] * inv_r_(j, i) * ft(j, i);
    return out;
}

ArrayXXd ReferenceDisk::d_y2(const ArrayXXd& f) const {
    ArrayXXd fr = d_r(f);
    ArrayXXd ft = d_theta(f);
    ArrayXXd out(n_r_, n_theta_);
    for (int j = 0; j < n_r_; ++j)
        for (int i = 0; i < n_theta_; ++i)
            out(j, i) = sin_t_[i] * fr(j, i) + cos_t_[i] * inv_r_(j, i) * ft(j, i);
    return out;
}

double ReferenceDisk::integrate(const ArrayXXd& f) const {
    double total = 0.0;
    for (int j = 0; j < n_r_; ++j) total += area_w_[j] * f.row(j).sum();
    return total;
}

double ReferenceDisk::boundary_integrate(const ArrayXd& f) const {
    return dtheta_ * f.sum();
}

MatrixXcd ReferenceDisk::fourier_analysis(const ArrayXXd& f) const {
    const int n_modes = n_theta_ / 2 + 1;
    MatrixXcd fhat = MatrixXcd::Zero(n_r_, n_modes);
    for (int m = 0; m < n_modes; ++m) {
        for (int i = 0; i < n_theta_; ++i) {
            std::complex<double> w(std::cos(m * theta_[i]), -std::sin(m * theta_[i]));
            fhat.col(m) += w / double(n_theta_) * f.col(i).matrix();
        }
    }
    return fhat;
}

ArrayXXd ReferenceDisk::fourier_synthesis(const MatrixXcd& fhat) const {
    const int n_modes = n_theta_ / 2 + 1;
    ArrayXXd f = ArrayXXd::Zero(n_r_, n_theta_);
    for (int i = 0; i < n_theta_; ++i) {
        for (int m = 0; m < n_modes; ++m) {
            std::complex<double> w(std::cos(m * theta_[i]), std::sin(m * theta_[i]));
            double scale = (m == 0 || m == n_theta_ / 2) ? 1.0 : 2.0;
            f.col(i) += scale * (fhat.col(m) * w).real().array();
        }
    }
    return f;
}

VectorXcd ReferenceDisk::cheb_coeffs_doubled(const VectorXcd& mode_values, int m) const {
    const int N = 2 * n_r_ - 1;
    // Extend by parity (-1)^m: mode m picks up that factor half a turn away.
    VectorXcd doubled(N + 1);
    double parity = (m % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < n_r_; ++j) {
        doubled[j] = mode_values[j];
        doubled[N - j] = parity * mode_values[j];
    }
    return cheb_analysis_.cast<std::complex<double>>() * doubled;
}

double ReferenceDisk::tail_fraction(const ArrayXXd& f) const {
    MatrixXcd fhat = fourier_analysis(f);
    const int n_modes = fhat.cols();
    const int N = 2 * n_r_ - 1;
    double total = 0.0, tail = 0.0;
    const int k_cut = (3 * N) / 4;
    const int m_cut = (3 * (n_modes - 1)) / 4;
    for (int m = 0; m < n_modes; ++m) {
        VectorXcd coeffs = cheb_coeffs_doubled(fhat.col(m), m);
        double mode_scale = (m == 0 || m == n_theta_ / 2) ? 1.0 : 2.0;
        for (int k = 0; k <= N; ++k) {
            double e = mode_scale * std::norm(coeffs[k]);
            total += e;
            if (k > k_cut || m > m_cut) tail += e;
        }
    }
    if (total == 0.0) return 0.0;
    return tail / total;
}

} // namespace diskflow
