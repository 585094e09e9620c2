#include "diskflow/eos.hpp"

#include <cmath>
#include <limits>

namespace diskflow {

namespace {

// 16-point Gauss-Legendre rule on [0,1].
constexpr int kGaussN = 16;
const double kGaussX[kGaussN] = {
    0.0052995325041750, 0.0277124884633837, 0.0671843988060841, 0.1222977958224985,
    0.1910618777986781, 0.2709916111713863, 0.3591982246103705, 0.4524937450811813,
    0.5475062549188187, 0.6408017753896295, 0.7290083888286137, 0.8089381222013219,
    0.8777022041775015, 0.9328156011939159, 0.9722875115366163, 0.9947004674958250};
const double kGaussW[kGaussN] = {
    0.0135762297058770, 0.0311267619693239, 0.0475792558412464, 0.0623144856277669,
    0.0747979944082884, 0.0845782596975012, 0.0913017075224618, 0.0947253052275343,
    0.0947253052275343, 0.0913017075224618, 0.0845782596975012, 0.0747979944082884,
    0.0623144856277669, 0.0475792558412464, 0.0311267619693239, 0.0135762297058770};

template <typename F>
double gauss_integrate(double a, double b, F&& f) {
    double total = 0.0;
    for (int i = 0; i < kGaussN; ++i) total += kGaussW[i] * f(a + (b - a) * kGaussX[i]);
    return (b - a) * total;
}

} // namespace

EosFamily EosFamily::linear(double kappa) {
    if (kappa <= 0.0) throw NonpositiveKappa("linear eos family requires kappa > 0");
    EosFamily eos;
    eos.linear_ = true;
    eos.kappa_ = kappa;
    eos.name_ = "linear";
    eos.derivs_[0] = [kappa](double h) { return h / kappa; };
    eos.derivs_[1] = [kappa](double) { return 1.0 / kappa; };
    for (int k = 2; k <= 6; ++k) eos.derivs_[k] = [](double) { return 0.0; };
    return eos;
}

EosFamily EosFamily::incompressible() {
    EosFamily eos;
    eos.incompressible_ = true;
    eos.kappa_ = std::numeric_limits<double>::infinity();
    eos.name_ = "incompressible";
    for (int k = 0; k <= 6; ++k) eos.derivs_[k] = [](double) { return 0.0; };
    return eos;
}

EosFamily EosFamily::custom(std::array<std::function<double(double)>, 7> derivs,
                            const std::string& name) {
    EosFamily eos;
    eos.derivs_ = std::move(derivs);
    eos.name_ = name;
    double ep0 = eos.derivs_[1](0.0);
    if (ep0 <= 0.0) throw DegenerateEos("custom eos family has e'(0) <= 0");
    eos.kappa_ = 1.0 / ep0;
    return eos;
}

double EosFamily::e_deriv(int k, double h) const {
    if (k < 0 || k > 6) throw DiskflowError("eos derivative order out of range");
    return derivs_[k](h);
}

double EosFamily::pressure(double h) const {
    if (incompressible_) return 0.0;
    if (linear_) return kappa_ * (std::exp(h / kappa_) - 1.0);
    // dp/dh = rho(h), p(0) = 0.
    return gauss_integrate(0.0, h, [this](double s) { return rho(s); });
}

double EosFamily::internal_energy(double h) const {
    if (incompressible_) return 0.0;
    if (linear_) return kappa_ * (h / kappa_ + std::exp(-h / kappa_) - 1.0);
    // dQ/dh = p(h) e'(h) / rho(h), Q(0) = 0.
    return gauss_integrate(0.0, h, [this](double s) {
        return pressure(s) * e_deriv(1, s) / rho(s);
    });
}

EosFamily default_family(double kappa) { return EosFamily::linear(kappa); }

EosReport verify_structural_conditions(const EosFamily& eos, double c0, double h_min,
                                       double h_max, int samples) {
    EosReport rep;
    for (int s = 0; s < samples; ++s) {
        double h = h_min + (h_max - h_min) * s / (samples - 1);
        double ep = eos.e_deriv(1, h);
        if (ep < 0.0) {
            rep.passed = false;
            rep.worst_ratio = std::numeric_limits<double>::infinity();
            rep.worst_k = 1;
            rep.worst_h = h;
            return rep;
        }
        double root = std::sqrt(ep);
        for (int k = 1; k <= 6; ++k) {
            double mag = std::abs(eos.e_deriv(k, h));
            double ratio = mag / c0;
            double ratio2 = root > 0.0 ? mag / (c0 * root)
                                       : (mag > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            double worst = std::max(ratio, ratio2);
            if (worst > rep.worst_ratio) {
                rep.worst_ratio = worst;
                rep.worst_k = k;
                rep.worst_h = h;
            }
        }
    }
    rep.passed = rep.worst_ratio <= 1.0 + 1e-12;
    return rep;
}

} // namespace diskflow
