#pragma once

#include <functional>
#include <limits>
#include <string>

#include "ridgekit/types.hpp"

namespace ridgekit {

// Pointwise activation sigma with its Fourier transform away from omega = 0.
// Distributional activations (relu, step, tanh) carry point terms at 0 that
// are never evaluated.
struct Activation {
    std::string name;
    std::function<double(double)> eval;
    std::function<cplx(double)> hat;
    bool distributional = false;
    // eval is below 1e-16 for |b| beyond this (infinite for non-decaying sigma)
    double support = std::numeric_limits<double>::infinity();
};

// "gauss": e^{-b^2/2}/sqrt(2 pi), hat e^{-w^2/2}
// "relu":  max(b, 0),  hat -1/w^2
// "step":  1[b > 0] (1/2 at 0), hat 1/(i w)
// "tanh":  tanh(b),    hat -i pi / sinh(pi w / 2)
Activation make_activation(const std::string& name);

// rho = n-th derivative of the unit Gaussian, rho#(w) = (i w)^n e^{-w^2/2}.
struct Mollifier {
    unsigned order = 0;
    double eval(double b) const;
    cplx hat(double w) const;
    // |rho(b)| < 1e-16 past this radius; sums skip terms beyond it.
    double support_radius() const;
};

Mollifier gaussian_mollifier(unsigned order);

// \int sigma#(w) conj(rho#(w)) |w|^{-p} dw by composite Gauss-Legendre on
// (0, W] and [-W, 0); never touches w = 0.
cplx frequency_pairing(const Activation& sigma, const Mollifier& rho, double p);

// (2 pi)^{m-1} \int sigma# conj(rho#) |w|^{-m} dw. Throws InadmissibleError
// for too few vanishing moments or when the value cancels to zero.
cplx admissibility(const Activation& sigma, const Mollifier& rho, unsigned m);

}  // namespace ridgekit
