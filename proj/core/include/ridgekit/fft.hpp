#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ridgekit/types.hpp"

namespace ridgekit {

// Samples of a function on a uniform box grid in R^m. Index 0 sits at
// `origin`, values are row-major (last axis fastest).
struct GridFunction {
    std::vector<std::size_t> dims;
    RVec spacing;
    RVec origin;
    CVec values;

    GridFunction() = default;
    GridFunction(std::vector<std::size_t> d, RVec h, RVec o);

    // Symmetric box [-half_width, half_width)^m with n points per axis.
    static GridFunction box(std::size_t m, std::size_t n, double half_width);

    std::size_t ndim() const { return dims.size(); }
    std::size_t size() const;
    double cell_volume() const;
    RVec point(std::size_t flat) const;
    double coord(std::size_t axis, std::size_t idx) const { return origin[axis] + idx * spacing[axis]; }
    void validate() const;
};

// Centered dual grid: xi_k = -floor(N/2)*dxi + k*dxi with dxi*dx*N = 2*pi.
// The spatial geometry is kept so the inverse lands on the original grid.
struct FreqGrid {
    std::vector<std::size_t> dims;
    RVec spacing;
    RVec origin;
    RVec x_spacing;
    RVec x_origin;
    CVec values;

    std::size_t size() const;
    double cell_volume() const;
    RVec point(std::size_t flat) const;
};

// Riemann-sum approximation of f^(xi) = \int f(x) e^{-i x.xi} dx.
FreqGrid dft(const GridFunction& g);
// Inverse including the (2 pi)^{-m} factor; exact inverse of dft().
GridFunction idft(const FreqGrid& F);

// f^(xi) at one arbitrary frequency by direct quadrature over the grid,
// contracted one axis at a time.
cplx fourier_at(const GridFunction& g, const RVec& xi);

// Fourier multiplier |xi|^s. For s < 0 the xi = 0 mode is zeroed.
GridFunction fractional_laplacian(const GridFunction& g, double s);

// General Fourier multiplier m(xi) applied through dft/idft.
GridFunction apply_multiplier(const GridFunction& g, const std::function<cplx(const RVec&)>& mult);

// Text dump: header line then one "re im" pair per line.
void write_grid(std::ostream& os, const GridFunction& g);
GridFunction read_grid(std::istream& is);

double l2_norm(const CVec& v, double weight = 1.0);

}  // namespace ridgekit
