#include "ridgekit/special.hpp"

#include <cmath>

#include "ridgekit/errors.hpp"

namespace ridgekit {

std::pair<RVec, RVec> gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw InvalidArgument("gauss_legendre: n must be positive");
    RVec x(n), w(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = w[n - 1 - i] = half * wi;
    }
    return {x, w};
}

RVec midpoint_nodes(std::size_t n, double half) {
    RVec x(n);
    const double h = 2.0 * half / n;
    for (std::size_t i = 0; i < n; ++i) x[i] = -half + (i + 0.5) * h;
    return x;
}

double hermite_he(unsigned n, double x) {
    if (n == 0) return 1.0;
    double h0 = 1.0, h1 = x;
    for (unsigned j = 1; j < n; ++j) {
        double h2 = x * h1 - j * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

double multigamma(unsigned k, double a) {
    double lg = 0.25 * k * (k - 1.0) * std::log(kPi);
    for (unsigned j = 0; j < k; ++j) lg += std::lgamma(a - 0.5 * j);
    return std::exp(lg);
}

double sphere_area(unsigned n) {
    if (n == 0) throw InvalidArgument("sphere_area: dimension must be positive");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double stiefel_volume(unsigned m, unsigned k) {
    if (k == 0) return 1.0;
    if (k > m) throw InvalidArgument("stiefel_volume: need k <= m");
    return std::pow(2.0, k) * std::pow(kPi, 0.5 * m * k) / multigamma(k, 0.5 * m);
}

double polar_constant(unsigned m, unsigned k) {
    if (k == 0 || k > m) throw InvalidArgument("polar_constant: need 1 <= k <= m");
    return sphere_area(k) * stiefel_volume(m - 1, k - 1);
}

double polar_constant_literal(unsigned m, unsigned k) {
    if (k == 0 || k > m) throw InvalidArgument("polar_constant: need 1 <= k <= m");
    return sphere_area(k) * stiefel_volume(m, k - 1);
}

}  // namespace ridgekit
