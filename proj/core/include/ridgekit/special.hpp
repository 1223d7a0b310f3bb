#pragma once

#include <utility>

#include "ridgekit/types.hpp"

namespace ridgekit {

// Gauss-Legendre nodes and weights on [a, b].
std::pair<RVec, RVec> gauss_legendre(std::size_t n, double a, double b);

// Cell-centred uniform nodes on [-half, half): -half + (i + 1/2) * 2 half / n.
RVec midpoint_nodes(std::size_t n, double half);

// Probabilists' Hermite polynomial He_n(x).
double hermite_he(unsigned n, double x);

// Multivariate gamma Gamma_k(a) = pi^{k(k-1)/4} prod_{j<k} Gamma(a - j/2).
double multigamma(unsigned k, double a);

// Surface area |S^{n-1}| of the unit sphere in R^n.
double sphere_area(unsigned n);

// Total mass of the invariant measure on the Stiefel manifold V_{m,k}:
// sigma_{m,k} = 2^k pi^{mk/2} / Gamma_k(m/2). sigma_{m,0} = 1.
double stiefel_volume(unsigned m, unsigned k);

// Polar-integration constant c_{m,k} = |S^{k-1}| sigma_{m-1,k-1}, the value
// that makes c \int f = \int f(Ub)|b|^{m-k} dU db hold.
double polar_constant(unsigned m, unsigned k);
// Same expression with sigma_{m,k-1} in place of sigma_{m-1,k-1}.
double polar_constant_literal(unsigned m, unsigned k);

}  // namespace ridgekit
