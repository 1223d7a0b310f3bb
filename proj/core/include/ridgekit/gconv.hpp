#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ridgekit/activation.hpp"
#include "ridgekit/euclid.hpp"
#include "ridgekit/numeric.hpp"

namespace ridgekit {

// Cyclic group Z_n acting on R^n by (T_g x)(i) = x(i - g).
RVec cyclic_shift(const RVec& x, long g);

// (a * x)(g) = <T_{g^{-1}} x, a> = sum_i a(i) x(i + g mod n).
RVec gconvolve(const RVec& a, const RVec& x);

// Orthonormal filter frame h_1..h_m in R^n (columns of an n x m matrix).
struct FilterSubspace {
    std::size_t n = 1;
    Mat frame;
    static FilterSubspace standard(std::size_t n, std::size_t m);
    std::size_t dim() const { return frame.cols; }
    RVec embed(const RVec& coords) const;   // sum_i c_i h_i
    RVec coords(const RVec& x) const;       // <h_i, x>
};

// f : R^n -> C^n with a declared equivariance flag.
struct EquivariantTarget {
    std::function<CVec(const RVec&)> eval;
    bool equivariant = true;
    std::string name;
};

// f(x)(g) = Phi((h_1 * x)(g), ..., (h_m * x)(g)), Phi = exp(-|y|^2/2).
EquivariantTarget gaussian_equivariant_target(const FilterSubspace& H);
// f(x)(g) = Phi(<h, x>) for every g; deliberately ignores the group index.
EquivariantTarget invariant_control_target(const FilterSubspace& H);

// Max over g, h in Z_n and the supplied signals of |f(T_g x)(h) - f(x)(h - g)|.
double equivariance_defect(const EquivariantTarget& f, std::size_t n, const std::vector<RVec>& signals);

// S[gamma](x)(g) = sum gamma(a, b) sigma((a * x)(g) - b) da db, a ranging over
// the coordinate grid of H.
CVec gconv_network(const ParamGrid& gamma, const Activation& sigma, const FilterSubspace& H, const RVec& x);

// R[f; rho](a, b) = \int_{H} f(x)(e) conj(rho(<a, x> - b)) dx on a coordinate
// grid over H.
ParamGrid gconv_ridgelet(const EquivariantTarget& f, const Mollifier& rho, const FilterSubspace& H,
                         const GridFunction& coord_grid, ParamGrid pg);

struct GconvResult {
    cplx c_empirical;
    cplx c_frequency;
    double residual;           // over all signals and all g
    double residual_off_identity;  // restricted to g != e
    std::vector<CVec> outputs;
    std::vector<CVec> targets;
};

GconvResult gconv_reconstruct(const EquivariantTarget& f, const Activation& sigma, const Mollifier& rho,
                              const FilterSubspace& H, const EuclidGrid& grid, const std::vector<RVec>& signals);

// Random signals in H with standard normal coordinates scaled by `scale`.
std::vector<RVec> random_signals_in(const FilterSubspace& H, std::size_t count, double scale, Rng& rng);

}  // namespace ridgekit
