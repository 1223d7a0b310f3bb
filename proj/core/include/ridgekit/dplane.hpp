#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ridgekit/activation.hpp"
#include "ridgekit/fft.hpp"
#include "ridgekit/types.hpp"

namespace ridgekit {

// Tensor-product Lagrange interpolation with `points` nodes per axis
// (2 = multilinear). Nodes outside the grid count as zero.
cplx interpolate(const GridFunction& g, const RVec& x, unsigned points = 6);

// Direction frames for V_{m,k}.
//   Equispaced: angles 2 pi j / n (m = 2, k = 1 only).
//   Lattice: m = 3 only. A Fibonacci lattice of axes (k = 1) or plane
//     normals (k = 2) under one Haar-random rotation, so the frame average is
//     still an unbiased estimate of the invariant integral.
//   Iid: independent draws from the invariant measure.
//   Auto picks Equispaced for (2,1), Lattice for m = 3 and Iid otherwise.
enum class FrameDesign { Auto, Equispaced, Lattice, Iid };
FrameDesign parse_frame_design(const std::string& name);
std::string frame_design_name(FrameDesign d);

struct FrameSet {
    unsigned m = 2;
    unsigned k = 1;
    std::vector<Mat> U;
    FrameDesign design = FrameDesign::Iid;
    std::uint64_t seed = 0;
};
FrameSet make_frames(unsigned m, unsigned k, std::size_t count, std::uint64_t seed = 0,
                     FrameDesign design = FrameDesign::Auto);

struct DPlaneOptions {
    double y_step = 0.5;    // ker U quadrature spacing
    double y_half = 8.0;    // ker U quadrature covers [-y_half, y_half]^d
    unsigned lagrange = 6;  // interpolation order for f
};

// P(U, b) for every frame; slices[i] is a k-dimensional box grid in b.
struct DPlaneField {
    unsigned m = 0;
    unsigned k = 0;
    std::vector<Mat> frames;
    std::vector<GridFunction> slices;

    unsigned d() const { return m - k; }
};

// P_d[f](U, b) = \int_{ker U} f(U b + y) dy.
DPlaneField dplane_transform(const GridFunction& f, const FrameSet& frames, std::size_t nb, double b_half,
                             const DPlaneOptions& opt = {});

// Applies the multiplier mult(w) in b to every slice after zero padding by
// `pad` per axis.
DPlaneField b_multiplier(const DPlaneField& P, const std::function<cplx(const RVec&)>& mult, unsigned pad = 2);
// |w|^s in b.
DPlaneField b_fractional_laplacian(const DPlaneField& P, double s, unsigned pad = 2);

struct SliceCheck {
    double discrepancy = 0.0;     // max |P#(U,w) - f^(Uw)| / max |f^(Uw)|
    double zero_frequency = 0.0;  // max relative gap of P#(U,0) and \int f
    std::size_t nodes = 0;        // nodes above the 1e-6 threshold
};
// Compares the b-Fourier transform of P with f^ on the same (U, w) nodes,
// optionally only for |w| <= omega_cut.
SliceCheck fourier_slice(const DPlaneField& P, const GridFunction& f, double omega_cut = 1e300);

// Frame-measure calibration: kappa estimates sigma_{m,k} / c_{m,k} from the
// discrete w grid of the slices and the unit Gaussian.
struct FrameCalibration {
    double kappa = 0.0;
    double frame_mass = 0.0;      // kappa * c_{m,k}; the total dU mass used by the networks
    double stiefel_volume = 0.0;  // sigma_{m,k} for comparison
    std::size_t frames = 0;
};
FrameCalibration calibrate_frames(unsigned m, unsigned k, std::size_t frames, std::size_t nb, double b_half);
FrameCalibration calibrate_frames(const DPlaneField& P);

// Filtered backprojection onto geom (values are overwritten).
GridFunction dplane_invert(const DPlaneField& P, const GridFunction& geom, const FrameCalibration& cal,
                           unsigned lagrange = 6);

struct InversionProbe {
    GridFunction g;
    double error = 0.0;
    FrameCalibration calibration;
};
// Gaussian probe e^{-|x|^2/2}: transform, invert on [-eval_half, eval_half)^m
// with n_eval points per axis, compare. Throws UnderResolvedError when the
// error exceeds max_error.
struct ProbeSetup {
    unsigned m = 2;
    unsigned k = 1;
    std::size_t frames = 64;
    FrameDesign frame_design = FrameDesign::Auto;
    std::uint64_t seed = 0;
    std::size_t nx = 128;   // probe grid points per axis on [-x_half, x_half)
    double x_half = 8.0;
    std::size_t nb = 128;
    double b_half = 8.0;
    std::size_t n_eval = 40;
    double eval_half = 4.0;
    double max_error = 0.05;
    DPlaneOptions transform;
};
InversionProbe dplane_inversion_probe(const ProbeSetup& setup);

// delta(D) = 2^{-k} |det D|^d prod_{i<j} (d_i^2 - d_j^2) for descending D.
double delta_weight(const RVec& D, unsigned m);

// Probe target on a box grid: e^{-|x - shift|^2 / (2 width^2)}.
GridFunction gaussian_probe(unsigned m, std::size_t n, double half, double width = 1.0, const RVec& shift = {});

// ---- pooling-layer ridgelet transforms (k = 1) ----

enum class PoolingVariant { Affine, Similitude, Stiefel };
PoolingVariant parse_variant(const std::string& name);
std::string variant_name(PoolingVariant v);

// Node set for k = 1. Affine: A = v d u with u a frame, d on a log grid,
// v = +-1. Similitude: A = a u with a on a midpoint grid of (0, a_max].
// Stiefel: A = u. The b grid is a midpoint grid on [-b_half, b_half).
struct MatrixParamGrid {
    PoolingVariant variant = PoolingVariant::Stiefel;
    unsigned m = 2;
    FrameSet frames;
    RVec scales;      // d (affine) or a (similitude); {1} for stiefel
    RVec scale_w;     // quadrature weight of each scale node
    RVec signs;       // {+1, -1} for affine, {+1} otherwise
    double b_half = 0.0;
    std::size_t nb = 0;
    CVec values;      // ((iu * scales + is) * signs + iv) * nb + jb

    std::size_t index(std::size_t iu, std::size_t is, std::size_t iv, std::size_t jb) const {
        return ((iu * scales.size() + is) * signs.size() + iv) * nb + jb;
    }
    double b_node(std::size_t j) const { return -b_half + (j + 0.5) * 2.0 * b_half / nb; }
    double db() const { return 2.0 * b_half / nb; }
    // weight-matrix column A = sign * scale * U(:, 0)
    double amplitude(std::size_t is, std::size_t iv) const { return signs[iv] * scales[is]; }
};

MatrixParamGrid affine_grid(const FrameSet& frames, std::size_t nd, double d_min, double d_max, std::size_t nb,
                            double b_half);
MatrixParamGrid similitude_grid(const FrameSet& frames, std::size_t na, double a_max, std::size_t nb,
                                double b_half);

// R[f; rho](A, b) = delta(A)^{-1} \int Lap^{d/2} f conj(rho(A^T x - b)) dx.
MatrixParamGrid ridgelet_affine(const GridFunction& f, const Mollifier& rho, MatrixParamGrid pg,
                                const DPlaneOptions& opt = {});
// R_s[f; rho](a u, b) = a^{m-s-1} \int Lap^{s/2} f conj(rho(a u.x - b)) dx.
MatrixParamGrid ridgelet_similitude(const GridFunction& f, const Mollifier& rho, double s, MatrixParamGrid pg,
                                    const DPlaneOptions& opt = {});
// Direct spot value of the similitude/affine integral \int g(x) rho(a u.x - b) dx
// over the grid (no d-plane shortcut).
cplx pooling_integral(const GridFunction& g, const Mollifier& rho, const RVec& a, double b);

// Stiefel ridgelet Lap_b^{(d-t)/2} P_d[f] for sigma#(w) = |w|^t.
DPlaneField ridgelet_stiefel(const DPlaneField& P, double t);
// Stiefel ridgelet for the step (d/db Lap^{d/2} P) and relu (d^2/db^2 Lap^{d/2} P)
// activations, whose transforms are 1/(iw) and -1/w^2. "delta" is t = 0.
DPlaneField ridgelet_stiefel(const DPlaneField& P, const std::string& activation);

// Networks evaluated on geom (values overwritten). dU carries the calibrated
// frame mass.
GridFunction pooling_network(const MatrixParamGrid& gamma, const Activation& sigma, const GridFunction& geom,
                             double frame_mass);
GridFunction stiefel_network(const DPlaneField& R, const std::string& activation, const GridFunction& geom,
                             double frame_mass);

struct PoolingConstant {
    std::string label;
    cplx value;
    bool match = false;
};

struct DPlaneResult {
    GridFunction g;
    cplx c_empirical;
    double residual = 0.0;
    std::vector<PoolingConstant> candidates;  // first entry is the printed one
    FrameCalibration calibration;
    std::vector<std::string> warnings;
};

struct PoolingSetup {
    PoolingVariant variant = PoolingVariant::Stiefel;
    unsigned m = 2;
    unsigned k = 1;
    std::size_t frames = 64;
    FrameDesign frame_design = FrameDesign::Auto;
    std::uint64_t seed = 0;
    // target
    std::size_t nx = 128;
    double x_half = 8.0;
    // evaluation box
    std::size_t n_eval = 40;
    double eval_half = 5.0;
    // stiefel
    std::string stiefel_activation = "step";
    std::size_t nb = 256;
    double b_half = 32.0;
    // affine / similitude
    std::string sigma = "gauss";
    unsigned rho_order = 2;
    double s = 0.0;
    std::size_t n_scale = 30;
    double scale_min = 0.05;
    double scale_max = 10.0;
    std::size_t nb_param = 60;
    double b_half_param = 30.0;
    DPlaneOptions transform;
};

// S[R[f]] on a Gaussian target, least-squares constant and residual.
DPlaneResult dplane_reconstruct(const PoolingSetup& setup);

}  // namespace ridgekit
