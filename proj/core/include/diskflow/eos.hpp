#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "diskflow/errors.hpp"

namespace diskflow {

// Equation of state expressed through the enthalpy: the density is
// rho(h) = exp(e(h)) with rho(0) = 1 at the free surface.  The default family
// e(h) = h/kappa has sound speed sqrt(kappa) at the surface; the degenerate
// member e = 0 models the incompressible liquid.
class EosFamily {
  public:
    static EosFamily linear(double kappa);
    static EosFamily incompressible();
    // Derivative table e, e', .., e^(6) as callables.
    static EosFamily custom(std::array<std::function<double(double)>, 7> derivs,
                            const std::string& name);

    double e(double h) const { return derivs_[0](h); }
    double e_deriv(int k, double h) const;
    double rho(double h) const { return incompressible_ ? 1.0 : std::exp(e(h)); }

    // p(h) and the specific internal energy Q(h) entering the conserved
    // energy integral of rho Q over the volume.  Closed form for the linear
    // family, quadrature otherwise; identically zero when incompressible.
    double pressure(double h) const;
    double internal_energy(double h) const;

    bool is_incompressible() const { return incompressible_; }
    // Stiffness scale 1/e'(0); drives the acoustic CFL limit.
    double kappa() const { return kappa_; }
    const std::string& name() const { return name_; }

  private:
    EosFamily() = default;
    std::array<std::function<double(double)>, 7> derivs_;
    bool linear_ = false;
    bool incompressible_ = false;
    double kappa_ = 0.0;
    std::string name_;
};

EosFamily default_family(double kappa);

// Checks |e^(k)(h)| <= c0 and <= c0 sqrt(e'(h)) for k = 1..6 over a sampled
// enthalpy range.  worst_ratio <= 1 means the family passes; for the linear
// family the worst ratio is 1/sqrt(kappa c0^2).
struct EosReport {
    bool passed = false;
    double worst_ratio = 0.0;
    int worst_k = 0;
    double worst_h = 0.0;
};

EosReport verify_structural_conditions(const EosFamily& eos, double c0, double h_min,
                                       double h_max, int samples = 201);

} // namespace diskflow
