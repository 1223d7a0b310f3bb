#include "ridgekit/activation.hpp"

#include <cmath>

#include "ridgekit/errors.hpp"
#include "ridgekit/special.hpp"

namespace ridgekit {

namespace {
const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);
}

Activation make_activation(const std::string& name) {
    Activation a;
    a.name = name;
    if (name == "gauss" || name == "gaussian") {
        a.name = "gauss";
        a.eval = [](double b) { return kInvSqrt2Pi * std::exp(-0.5 * b * b); };
        a.hat = [](double w) { return cplx(std::exp(-0.5 * w * w), 0.0); };
        a.support = 9.0;
    } else if (name == "relu") {
        a.eval = [](double b) { return b > 0 ? b : 0.0; };
        a.hat = [](double w) { return cplx(-1.0 / (w * w), 0.0); };
        a.distributional = true;
    } else if (name == "step") {
        a.eval = [](double b) { return b > 0 ? 1.0 : (b < 0 ? 0.0 : 0.5); };
        a.hat = [](double w) { return cplx(0.0, -1.0 / w); };
        a.distributional = true;
    } else if (name == "tanh") {
        a.eval = [](double b) { return std::tanh(b); };
        a.hat = [](double w) { return cplx(0.0, -kPi / std::sinh(0.5 * kPi * w)); };
        a.distributional = true;
    } else {
        throw InvalidArgument("unknown activation '" + name + "'");
    }
    return a;
}

double Mollifier::eval(double b) const {
    double g = kInvSqrt2Pi * std::exp(-0.5 * b * b);
    double s = (order % 2 == 0) ? 1.0 : -1.0;
    return s * hermite_he(order, b) * g;
}

cplx Mollifier::hat(double w) const {
    // (i w)^n
    cplx p(1.0, 0.0);
    for (unsigned j = 0; j < order; ++j) p *= cplx(0.0, w);
    return p * std::exp(-0.5 * w * w);
}

double Mollifier::support_radius() const { return 9.0 + 0.5 * order; }

Mollifier gaussian_mollifier(unsigned order) { return Mollifier{order}; }

cplx frequency_pairing(const Activation& sigma, const Mollifier& rho, double p) {
    if (!sigma.hat) throw InvalidArgument("activation has no frequency form");
    const double W = 40.0, panel = 0.5;
    const int npanel = static_cast<int>(W / panel);
    auto [x, w] = gauss_legendre(16, 0.0, panel);
    cplx total(0.0, 0.0);
    for (int side = 0; side < 2; ++side) {
        double sgn = side == 0 ? 1.0 : -1.0;
        for (int j = 0; j < npanel; ++j) {
            cplx acc(0.0, 0.0);
            for (std::size_t q = 0; q < x.size(); ++q) {
                double om = sgn * (j * panel + x[q]);
                acc += w[q] * sigma.hat(om) * std::conj(rho.hat(om)) * std::pow(std::abs(om), -p);
            }
            total += acc;
        }
    }
    return total;
}

cplx admissibility(const Activation& sigma, const Mollifier& rho, unsigned m) {
    unsigned need = sigma.distributional ? m + 2 : m;
    if (rho.order < need)
        throw InadmissibleError("mollifier order " + std::to_string(rho.order) + " below required " +
                                std::to_string(need) + " for " + sigma.name + " at m=" + std::to_string(m));
    cplx c = std::pow(kTwoPi, m - 1.0) * frequency_pairing(sigma, rho, m);
    // magnitude scale for the cancellation test
    double scale = 0.0;
    auto [x, w] = gauss_legendre(400, 1e-6, 40.0);
    for (std::size_t q = 0; q < x.size(); ++q)
        scale += 2.0 * w[q] * std::abs(sigma.hat(x[q])) * std::abs(rho.hat(x[q])) * std::pow(x[q], -double(m));
    scale *= std::pow(kTwoPi, m - 1.0);
    if (std::abs(c) < 1e-10 * scale)
        throw InadmissibleError("pairing of " + sigma.name + " with order-" + std::to_string(rho.order) +
                                " mollifier vanishes at m=" + std::to_string(m));
    return c;
}

}  // namespace ridgekit
