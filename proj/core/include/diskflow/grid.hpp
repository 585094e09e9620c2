#pragma once

#include <Eigen/Dense>

#include "diskflow/errors.hpp"

namespace diskflow {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Tensor-product collocation grid on the unit disk: uniform angles times the
// positive half of a Chebyshev-Gauss-Lobatto grid on [-1,1] with an odd
// polynomial degree, so no node sits at r = 0 and the nodes pair up under
// (r,theta) -> (-r,theta+pi).  A smooth function on the disk satisfies
// f(-r,theta) = f(r,theta+pi), which lets radial derivatives act on the
// doubled grid where the Chebyshev differentiation matrix is standard.
//
// Scalar samples are stored as ArrayXXd with shape (n_r, n_theta); row 0 is
// the boundary ring r = 1, row n_r-1 the innermost ring.
class ReferenceDisk {
  public:
    ReferenceDisk(int n_r, int n_theta);

    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    int n_nodes() const { return n_r_ * n_theta_; }

    double r(int j) const { return r_[j]; }
    double theta(int i) const { return theta_[i]; }
    const ArrayXd& radii() const { return r_; }
    const ArrayXd& angles() const { return theta_; }

    // Node position in reference coordinates y = (r cos t, r sin t).
    double y1(int j, int i) const { return r_[j] * cos_t_[i]; }
    double y2(int j, int i) const { return r_[j] * sin_t_[i]; }
    const ArrayXXd& y1_grid() const { return y1_; }
    const ArrayXXd& y2_grid() const { return y2_; }

    // Spectral derivatives in grid coordinates.
    ArrayXXd d_r(const ArrayXXd& f) const;
    ArrayXXd d_theta(const ArrayXXd& f) const;

    // Derivatives with respect to the reference Cartesian coordinates y1, y2.
    ArrayXXd d_y1(const ArrayXXd& f) const;
    ArrayXXd d_y2(const ArrayXXd& f) const;

    // Quadrature against the flat reference measures dy and ds.
    // integrate(1) = pi, boundary_integrate(1) = 2*pi to spectral accuracy.
    double integrate(const ArrayXXd& f) const;
    double boundary_integrate(const ArrayXd& f) const;
    const ArrayXd& radial_weights() const { return area_w_; } // includes dtheta
    double boundary_weight() const { return dtheta_; }

    // Angular Fourier transform of each radial ring; modes m = 0..n_theta/2.
    // Real input is assumed, so only the non-negative half is kept.
    MatrixXcd fourier_analysis(const ArrayXXd& f) const;
    ArrayXXd fourier_synthesis(const MatrixXcd& fhat) const;

    // Chebyshev coefficients of one angular mode on the doubled radial grid.
    // Column m of the analysis output is passed in as a complex vector.
    VectorXcd cheb_coeffs_doubled(const VectorXcd& mode_values, int m) const;

    // Fraction of coefficient energy carried by the top quarter of radial
    // degrees and top quarter of angular modes.  Rough resolution monitor.
    double tail_fraction(const ArrayXXd& f) const;

    // Doubled-grid Chebyshev differentiation matrix (2*n_r square).
    const MatrixXd& cheb_D() const { return cheb_D_; }
    // Row j of the doubled grid maps to ring fold_row(j) with a half-turn
    // column shift when j >= n_r.
    int doubled_size() const { return 2 * n_r_; }

    const ArrayXd& cos_theta() const { return cos_t_; }
    const ArrayXd& sin_theta() const { return sin_t_; }

  private:
    int n_r_, n_theta_;
    double dtheta_;
    ArrayXd r_, theta_, cos_t_, sin_t_;
    ArrayXXd y1_, y2_;
    ArrayXd area_w_;        // per-ring weight, angular factor included
    MatrixXd cheb_D_;       // doubled grid
    MatrixXd dr_self_;      // action of cheb_D on the stored half ...
    MatrixXd dr_mirror_;    // ... plus the half-turn shifted mirror
    MatrixXd fourier_D_;
    MatrixXd cheb_analysis_; // doubled nodal values -> Chebyshev coefficients
    ArrayXXd inv_r_;         // 1/r broadcast over the grid
};

} // namespace diskflow
