#pragma once

#include <string>
#include <vector>

#include "ridgekit/activation.hpp"
#include "ridgekit/fft.hpp"
#include "ridgekit/types.hpp"

namespace ridgekit {

// gamma(a, b) sampled on cell-centred nodes a in [-A, A)^m, b in [-B, B).
// Index = a_flat * nb + b.
struct ParamGrid {
    unsigned m = 1;
    std::size_t na = 0;
    double a_half = 0.0;
    std::size_t nb = 0;
    double b_half = 0.0;
    CVec values;
    bool b_truncated = false;

    ParamGrid() = default;
    ParamGrid(unsigned m_, std::size_t na_, double a_half_, std::size_t nb_, double b_half_);
    std::size_t a_count() const;
    RVec a_point(std::size_t a_flat) const;
    double b_node(std::size_t j) const;
    double da() const { return 2.0 * a_half / na; }
    double db() const { return 2.0 * b_half / nb; }
    double cell() const;  // da^m db
};

// Grid recipe (X, Nx, A, Na, B, Nb): x in [-X, X)^m with Nx points per axis,
// parameter grid as above.
struct EuclidGrid {
    unsigned m = 1;
    double x_half = 6.0;
    std::size_t nx = 128;
    double a_half = 6.0;
    std::size_t na = 96;
    double b_half = 10.0;
    std::size_t nb = 128;

    EuclidGrid halved() const;  // every spacing halved, boxes fixed
    std::string describe() const;
};

GridFunction gaussian_target(unsigned m, std::size_t nx, double x_half, double width = 1.0);

// R[f; rho](a, b) = \int f(x) conj(rho(a.x - b)) dx by Riemann sum on f's grid.
ParamGrid ridgelet(const GridFunction& f, const Mollifier& rho, ParamGrid pg);

// Fourier-slice path: (1/2 pi) \int f^(w a) conj(rho#(w)) e^{i w b} dw, with
// f^ by direct quadrature of f's grid and Gauss-Legendre in w.
cplx ridgelet_slice(const GridFunction& f, const Mollifier& rho, const RVec& a, double b,
                    std::size_t n_omega = 512, double omega_max = 14.0);

// S[gamma](x) = sum over nodes of gamma(a,b) sigma(a.x - b) da^m db, at
// arbitrary points (row-major, m coordinates each).
CVec network(const ParamGrid& gamma, const Activation& sigma, const RVec& points);
GridFunction network_on(const ParamGrid& gamma, const Activation& sigma, const GridFunction& geometry);

struct EuclidResult {
    GridFunction g;
    cplx c_empirical;
    double residual;
    cplx c_frequency;  // admissibility() value, NaN if it threw
    bool admissible;
    std::vector<std::string> warnings;
};

EuclidResult reconstruct(const GridFunction& f, const Activation& sigma, const Mollifier& rho, const ParamGrid& pg);
EuclidResult reconstruct(const EuclidGrid& grid, const Activation& sigma, const Mollifier& rho);

}  // namespace ridgekit
