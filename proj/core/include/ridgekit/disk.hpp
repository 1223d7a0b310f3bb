#pragma once

#include <string>
#include <vector>

#include "ridgekit/activation.hpp"
#include "ridgekit/types.hpp"

namespace ridgekit {

// Candidate (|W|, varrho) pairs for the disk.
struct DiskConstants {
    double W = 1.0;
    double varrho = 1.0;
    std::string label = "W=1,rho=1";
};
DiskConstants disk_constants_a();  // |W| = 1, varrho = 1
DiskConstants disk_constants_b();  // |W| = 1, varrho = 1/2

// Extra factor applied by helgason_inverse on top of (1/|W|) \int ... du dl /|c|^2
// with du the uniform probability on the circle. The bare printed formula
// overshoots the identity by 2 pi^2 under that measure.
inline constexpr double kDiskInverseNormalisation = 1.0 / (2.0 * kPi * kPi);

// |c(l)|^{-2} on the disk.
double plancherel_density(double lambda);

// <z, u> = (1/2) log((1 - |z|^2) / |z - u|^2).
double composite_distance(cplx z, cplx u);

// (1/2) log of the diagonal of lambda in u^T x u = nu lambda nu^T, nu unit
// upper triangular.
RVec spd_composite_distance(const Mat& x, const Mat& u);

// Points on the horocycle {<z, u> = t}: the circle through tanh(t) u tangent
// to the boundary at u.
std::vector<cplx> horocycle_points(cplx u, double t, std::size_t count);

// Gauss-Legendre in r on (0, r_max), trapezoid in theta; weights include the
// volume element (1 - r^2)^{-2} r dr dtheta.
struct DiskGrid {
    double r_max = 0.9;
    std::size_t nr = 0;
    std::size_t ntheta = 0;
    std::vector<cplx> z;
    RVec w;
    CVec values;

    static DiskGrid make(double r_max, std::size_t nr, std::size_t ntheta);
    std::size_t size() const { return z.size(); }
};

// Radial bump exp(-(d(0,z)/s)^2 / 2) with d the hyperbolic distance.
DiskGrid radial_bump(double r_max, std::size_t nr, std::size_t ntheta, double s);

struct DiskSpectrum {
    RVec lambda;            // midpoint nodes on [-L, L)
    std::vector<cplx> u;    // e^{2 pi i k / nu}
    CVec values;            // index il * nu + k
    double lambda_max = 0.0;
    bool truncated = false; // edge |F| exceeds 1e-6 max
};

DiskSpectrum helgason_forward(const DiskGrid& f, std::size_t nlambda, double lambda_max, std::size_t nu,
                              const DiskConstants& k);
DiskGrid helgason_inverse(const DiskSpectrum& F, const DiskGrid& geom, const DiskConstants& k,
                          double normalisation = kDiskInverseNormalisation);

// Relative L2 (hyperbolic measure) between two functions on the same grid.
double disk_relative_l2(const DiskGrid& a, const DiskGrid& b);

struct CalibrationEntry {
    DiskConstants constants;
    double error;          // with the inverse normalisation
    double error_printed;  // bare printed inverse
};
struct Calibration {
    std::vector<CalibrationEntry> entries;
    DiskConstants winner;
    double winner_error = 0.0;
};
// Round trip on f for both candidate pairs; the winner minimises the error.
Calibration calibrate_disk(const DiskGrid& f, std::size_t nlambda, double lambda_max, std::size_t nu);

// Lambda[f] at a single point by direct quadrature of the spectral definition
// (Gauss-Legendre in lambda, trapezoid in u). Slow path used for spot checks.
cplx lambda_multiplier_at(const DiskGrid& f, cplx x, const DiskConstants& k, std::size_t nlambda,
                          double lambda_max, std::size_t nu);

// gamma(a, u, b): a and b on midpoint grids, u uniform on the circle.
struct HoroParamGrid {
    double a_half = 0.0;
    std::size_t na = 0;
    std::size_t nu = 0;
    double b_half = 0.0;
    std::size_t nb = 0;
    CVec values;  // ((ia * nu) + k) * nb + jb

    HoroParamGrid() = default;
    HoroParamGrid(double a_half, std::size_t na, std::size_t nu, double b_half, std::size_t nb);
    double a_node(std::size_t i) const { return -a_half + (i + 0.5) * 2.0 * a_half / na; }
    double b_node(std::size_t j) const { return -b_half + (j + 0.5) * 2.0 * b_half / nb; }
    cplx u_node(std::size_t k) const;
    double da() const { return 2.0 * a_half / na; }
    double db() const { return 2.0 * b_half / nb; }
    double du() const { return 1.0 / nu; }
};

// S[gamma](x) = \int gamma sigma(a <x,u> - b) e^{varrho <x,u>} da du db.
DiskGrid horo_network(const HoroParamGrid& gamma, const Activation& sigma, const DiskGrid& geom,
                      const DiskConstants& k);

enum class HoroMethod {
    Slice,    // b-Fourier slice of R from f^ evaluated by direct quadrature
    Spatial,  // Lambda[f] on the grid, then the defining integral
};

struct SpectrumSpec {
    std::size_t nlambda = 128;
    double lambda_max = 20.0;
    std::size_t nu = 64;
};

struct HoroOptions {
    HoroMethod method = HoroMethod::Slice;
    std::size_t n_omega = 64;     // slice path: omega nodes for the b transform
    double omega_max = 8.0;
    SpectrumSpec spectrum;        // spatial path: grid used for Lambda[f]
};

HoroParamGrid horo_ridgelet(const DiskGrid& f, const Mollifier& rho, HoroParamGrid pg, const DiskConstants& k,
                            const HoroOptions& opt = {});

struct HoroResult {
    DiskGrid g;
    cplx c_empirical;
    double residual;
    cplx c_printed;    // (|W| / 2 pi) \int sigma# conj(rho#) |w|^{-1}
    cplx c_predicted;  // c_printed / kDiskInverseNormalisation
    bool matches_printed;
    bool matches_predicted;
};

HoroResult horo_reconstruct(const DiskGrid& f, const Activation& sigma, const Mollifier& rho,
                            const HoroParamGrid& pg, const DiskConstants& k, const HoroOptions& opt = {});

// Spread max - min of a single neuron sigma(a0 <z,u0> - b0) e^{varrho <z,u0>}
// along the horocycle <z,u0> = t, relative to its mean magnitude.
double horocycle_spread(const Activation& sigma, double a0, cplx u0, double b0, double t, const DiskConstants& k,
                        std::size_t count = 64);

}  // namespace ridgekit
