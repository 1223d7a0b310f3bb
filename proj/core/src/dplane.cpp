#include "ridgekit/dplane.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>

#include "ridgekit/errors.hpp"
#include "ridgekit/numeric.hpp"
#include "ridgekit/parallel.hpp"
#include "ridgekit/special.hpp"

namespace ridgekit {

namespace {

struct AxisStencil {
    long first = 0;
    double w[16];
};

// Lagrange weights on nodes first..first+p-1 at fractional index u
void stencil(double u, unsigned p, AxisStencil& s) {
    s.first = static_cast<long>(std::floor(u)) - static_cast<long>(p / 2) + 1;
    for (unsigned j = 0; j < p; ++j) {
        double wj = 1.0;
        const double tj = static_cast<double>(s.first + j);
        for (unsigned l = 0; l < p; ++l)
            if (l != j) wj *= (u - static_cast<double>(s.first + l)) / (tj - static_cast<double>(s.first + l));
        s.w[j] = wj;
    }
}

double norm2(const RVec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// flat index -> point of the tensor grid {-half + i*step}^d
void lattice_point(std::size_t flat, std::size_t n, double half, double step, unsigned d, RVec& y) {
    y.resize(d);
    for (unsigned a = d; a-- > 0;) {
        y[a] = -half + static_cast<double>(flat % n) * step;
        flat /= n;
    }
}

std::size_t ipow(std::size_t b, unsigned e) {
    std::size_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

RVec column0(const Mat& U) {
    RVec u(U.rows);
    for (std::size_t i = 0; i < U.rows; ++i) u[i] = U(i, 0);
    return u;
}

}  // namespace

cplx interpolate(const GridFunction& g, const RVec& x, unsigned points) {
    const std::size_t m = g.ndim();
    if (x.size() != m) throw InvalidArgument("interpolate: point rank mismatch");
    if (points < 2 || points > 16) throw InvalidArgument("interpolate: 2 to 16 points per axis");
    if (m > 8) throw InvalidArgument("interpolate: at most 8 axes");
    // per axis: valid node offsets (already multiplied by the stride) and weights
    std::size_t count[8], off[8][16];
    double wt[8][16];
    std::size_t stride = 1;
    for (std::size_t a = m; a-- > 0;) {
        AxisStencil st;
        stencil((x[a] - g.origin[a]) / g.spacing[a], points, st);
        count[a] = 0;
        for (unsigned j = 0; j < points; ++j) {
            long idx = st.first + static_cast<long>(j);
            if (idx < 0 || idx >= static_cast<long>(g.dims[a])) continue;
            off[a][count[a]] = static_cast<std::size_t>(idx) * stride;
            wt[a][count[a]] = st.w[j];
            ++count[a];
        }
        if (count[a] == 0) return cplx(0.0, 0.0);
        stride *= g.dims[a];
    }
    std::size_t pos[8] = {0};
    cplx s(0.0, 0.0);
    for (;;) {
        std::size_t flat = 0;
        double w = 1.0;
        for (std::size_t a = 0; a < m; ++a) {
            flat += off[a][pos[a]];
            w *= wt[a][pos[a]];
        }
        s += w * g.values[flat];
        std::size_t a = m;
        while (a-- > 0) {
            if (++pos[a] < count[a]) break;
            pos[a] = 0;
        }
        if (a == static_cast<std::size_t>(-1)) break;
    }
    return s;
}

FrameDesign parse_frame_design(const std::string& name) {
    if (name == "auto") return FrameDesign::Auto;
    if (name == "equispaced") return FrameDesign::Equispaced;
    if (name == "lattice") return FrameDesign::Lattice;
    if (name == "iid") return FrameDesign::Iid;
    throw InvalidArgument("unknown frame design: " + name);
}

std::string frame_design_name(FrameDesign d) {
    switch (d) {
        case FrameDesign::Equispaced: return "equispaced";
        case FrameDesign::Lattice: return "lattice";
        case FrameDesign::Iid: return "iid";
        default: return "auto";
    }
}

FrameSet make_frames(unsigned m, unsigned k, std::size_t count, std::uint64_t seed, FrameDesign design) {
    if (k == 0 || k >= m) throw InvalidArgument("frames need 1 <= k < m");
    if (count == 0) throw InvalidArgument("frames: count must be positive");
    if (design == FrameDesign::Auto)
        design = (m == 2 && k == 1) ? FrameDesign::Equispaced : m == 3 ? FrameDesign::Lattice : FrameDesign::Iid;
    if (design == FrameDesign::Equispaced && !(m == 2 && k == 1))
        throw InvalidArgument("equispaced frames exist for m = 2, k = 1 only");
    if (design == FrameDesign::Lattice && m != 3) throw InvalidArgument("lattice frames exist for m = 3 only");
    FrameSet fs;
    fs.m = m;
    fs.k = k;
    fs.seed = seed;
    fs.design = design;
    Rng rng(seed);
    if (design == FrameDesign::Equispaced) {
        for (std::size_t j = 0; j < count; ++j) {
            Mat U(2, 1);
            double th = kTwoPi * static_cast<double>(j) / count;
            U(0, 0) = std::cos(th);
            U(1, 0) = std::sin(th);
            fs.U.push_back(U);
        }
    } else if (design == FrameDesign::Lattice) {
        const Mat rot = sample_stiefel(3, 3, rng);
        std::uniform_real_distribution<double> spin(0.0, kTwoPi);
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (std::size_t j = 0; j < count; ++j) {
            double z = 1.0 - (2.0 * j + 1.0) / count, r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double ph = golden * static_cast<double>(j);
            Mat n(3, 1);
            n(0, 0) = r * std::cos(ph);
            n(1, 0) = r * std::sin(ph);
            n(2, 0) = z;
            n = rot * n;
            if (k == 1) {
                fs.U.push_back(n);
                continue;
            }
            Mat C = orthonormal_completion(n), R(2, 2);
            double th = spin(rng);
            R(0, 0) = std::cos(th);
            R(0, 1) = -std::sin(th);
            R(1, 0) = std::sin(th);
            R(1, 1) = std::cos(th);
            fs.U.push_back(C * R);
        }
    } else {
        for (std::size_t j = 0; j < count; ++j) fs.U.push_back(sample_stiefel(m, k, rng));
    }
    return fs;
}

DPlaneField dplane_transform(const GridFunction& f, const FrameSet& frames, std::size_t nb, double b_half,
                             const DPlaneOptions& opt) {
    const unsigned m = static_cast<unsigned>(f.ndim());
    if (m != frames.m) throw InvalidArgument("dplane_transform: frame dimension differs from f");
    const unsigned k = frames.k, d = m - k;
    if (!(opt.y_step > 0 && opt.y_half > 0)) throw InvalidArgument("dplane_transform: bad ker U quadrature");
    DPlaneField P;
    P.m = m;
    P.k = k;
    P.frames = frames.U;
    const std::size_t ny = static_cast<std::size_t>(std::llround(2.0 * opt.y_half / opt.y_step)) + 1;
    const std::size_t ycount = ipow(ny, d);
    const double yvol = std::pow(opt.y_step, d);
    std::vector<Mat> comp;
    for (const auto& U : frames.U) {
        if (orthonormality_error(U) > 1e-12) throw InvalidArgument("dplane_transform: frame is not orthonormal");
        comp.push_back(orthonormal_completion(U));
        P.slices.push_back(GridFunction::box(k, nb, b_half));
    }
    const std::size_t nslice = P.slices[0].size();
    parallel_for(frames.U.size() * nslice, [&](std::size_t idx) {
        const std::size_t iu = idx / nslice, jb = idx % nslice;
        const Mat& U = frames.U[iu];
        const Mat& V = comp[iu];
        RVec b = P.slices[iu].point(jb);
        RVec base = U.apply(b), y, x(m);
        cplx s(0.0, 0.0);
        for (std::size_t iy = 0; iy < ycount; ++iy) {
            lattice_point(iy, ny, opt.y_half, opt.y_step, d, y);
            RVec vy = V.apply(y);
            for (unsigned a = 0; a < m; ++a) x[a] = base[a] + vy[a];
            s += interpolate(f, x, opt.lagrange);
        }
        P.slices[iu].values[jb] = s * yvol;
    });
    return P;
}

DPlaneField b_multiplier(const DPlaneField& P, const std::function<cplx(const RVec&)>& mult, unsigned pad) {
    if (pad == 0) throw InvalidArgument("b_multiplier: pad must be >= 1");
    DPlaneField out = P;
    parallel_for(P.slices.size(), [&](std::size_t iu) {
        const GridFunction& s = P.slices[iu];
        const std::size_t k = s.ndim();
        std::vector<std::size_t> dims(k);
        RVec origin(k);
        std::vector<std::size_t> off(k);
        for (std::size_t a = 0; a < k; ++a) {
            dims[a] = s.dims[a] * pad;
            off[a] = (dims[a] - s.dims[a]) / 2;
            origin[a] = s.origin[a] - off[a] * s.spacing[a];
        }
        GridFunction big(dims, s.spacing, origin);
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::size_t r = i, flat = 0;
            for (std::size_t a = k; a-- > 0;) {
                idx[a] = r % s.dims[a];
                r /= s.dims[a];
            }
            for (std::size_t a = 0; a < k; ++a) flat = flat * dims[a] + idx[a] + off[a];
            big.values[flat] = s.values[i];
        }
        GridFunction res = apply_multiplier(big, mult);
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::size_t r = i, flat = 0;
            for (std::size_t a = k; a-- > 0;) {
                idx[a] = r % s.dims[a];
                r /= s.dims[a];
            }
            for (std::size_t a = 0; a < k; ++a) flat = flat * dims[a] + idx[a] + off[a];
            out.slices[iu].values[i] = res.values[flat];
        }
    });
    return out;
}

DPlaneField b_fractional_laplacian(const DPlaneField& P, double s, unsigned pad) {
    if (s == 0.0) return P;
    return b_multiplier(
        P,
        [s](const RVec& w) {
            double r2 = norm2(w);
            return r2 == 0.0 ? cplx(0.0, 0.0) : cplx(std::pow(r2, 0.5 * s), 0.0);
        },
        pad);
}

SliceCheck fourier_slice(const DPlaneField& P, const GridFunction& f, double omega_cut) {
    if (f.ndim() != P.m) throw InvalidArgument("fourier_slice: geometry mismatch");
    struct Node {
        std::size_t frame;
        RVec w;
        cplx left;
        bool zero;
    };
    std::vector<Node> nodes;
    for (std::size_t iu = 0; iu < P.slices.size(); ++iu) {
        FreqGrid F = dft(P.slices[iu]);
        for (std::size_t i = 0; i < F.size(); ++i) {
            RVec w = F.point(i);
            if (std::sqrt(norm2(w)) > omega_cut) continue;
            nodes.push_back({iu, w, F.values[i], norm2(w) == 0.0});
        }
    }
    CVec right(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        right[i] = fourier_at(f, P.frames[nodes[i].frame].apply(nodes[i].w));
    });
    cplx mass(0.0, 0.0);
    for (const auto& v : f.values) mass += v;
    mass *= f.cell_volume();
    SliceCheck out;
    double rmax = 0.0;
    for (const auto& r : right) rmax = std::max(rmax, std::abs(r));
    double worst = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(right[i]) < 1e-6 * rmax) continue;
        ++out.nodes;
        worst = std::max(worst, std::abs(nodes[i].left - right[i]));
        if (nodes[i].zero)
            out.zero_frequency = std::max(out.zero_frequency, std::abs(nodes[i].left - mass) / std::abs(mass));
    }
    out.discrepancy = rmax > 0 ? worst / rmax : worst;
    return out;
}

FrameCalibration calibrate_frames(unsigned m, unsigned k, std::size_t frames, std::size_t nb, double b_half) {
    if (k == 0 || k >= m) throw InvalidArgument("calibrate_frames: need 1 <= k < m");
    const unsigned d = m - k;
    GridFunction s = GridFunction::box(k, nb, b_half);
    FreqGrid F = dft(s);
    double sum = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        double r2 = norm2(F.point(i));
        sum += std::exp(-0.5 * r2) * std::pow(r2, 0.5 * d);
    }
    sum *= F.cell_volume();
    FrameCalibration cal;
    cal.kappa = std::pow(kTwoPi, 0.5 * m) / sum;
    cal.frame_mass = cal.kappa * polar_constant(m, k);
    cal.stiefel_volume = stiefel_volume(m, k);
    cal.frames = frames;
    return cal;
}

FrameCalibration calibrate_frames(const DPlaneField& P) {
    if (P.slices.empty()) throw InvalidArgument("calibrate_frames: no frames");
    const GridFunction& s = P.slices[0];
    return calibrate_frames(P.m, P.k, P.slices.size(), s.dims[0], -s.origin[0]);
}

GridFunction dplane_invert(const DPlaneField& P, const GridFunction& geom, const FrameCalibration& cal,
                           unsigned lagrange) {
    if (geom.ndim() != P.m) throw InvalidArgument("dplane_invert: geometry rank mismatch");
    if (P.slices.empty()) throw InvalidArgument("dplane_invert: no frames");
    DPlaneField Q = b_fractional_laplacian(P, P.d());
    GridFunction g = geom;
    g.values.assign(geom.size(), cplx(0.0, 0.0));
    const double scale = std::pow(kTwoPi, static_cast<double>(P.k) - P.m) * cal.kappa / P.slices.size();
    parallel_for(geom.size(), [&](std::size_t i) {
        RVec x = geom.point(i);
        cplx s(0.0, 0.0);
        for (std::size_t iu = 0; iu < Q.slices.size(); ++iu)
            s += interpolate(Q.slices[iu], P.frames[iu].apply_transpose(x), lagrange);
        g.values[i] = s * scale;
    });
    return g;
}

GridFunction gaussian_probe(unsigned m, std::size_t n, double half, double width, const RVec& shift) {
    GridFunction f = GridFunction::box(m, n, half);
    for (std::size_t i = 0; i < f.size(); ++i) {
        RVec x = f.point(i);
        double r2 = 0.0;
        for (unsigned a = 0; a < m; ++a) {
            double v = x[a] - (shift.empty() ? 0.0 : shift[a]);
            r2 += v * v;
        }
        f.values[i] = std::exp(-0.5 * r2 / (width * width));
    }
    return f;
}

namespace {
void fill_gaussian(GridFunction& g) {
    for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = std::exp(-0.5 * norm2(g.point(i)));
}
}  // namespace

InversionProbe dplane_inversion_probe(const ProbeSetup& cfg) {
    GridFunction f = gaussian_probe(cfg.m, cfg.nx, cfg.x_half);
    FrameSet fs = make_frames(cfg.m, cfg.k, cfg.frames, cfg.seed, cfg.frame_design);
    DPlaneField P = dplane_transform(f, fs, cfg.nb, cfg.b_half, cfg.transform);
    InversionProbe out;
    out.calibration = calibrate_frames(P);
    GridFunction geom = GridFunction::box(cfg.m, cfg.n_eval, cfg.eval_half);
    out.g = dplane_invert(P, geom, out.calibration, cfg.transform.lagrange);
    fill_gaussian(geom);
    out.error = relative_l2(out.g.values, geom.values);
    if (out.error > cfg.max_error) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "d-plane inversion under-resolved: probe error %.3g > %.3g with %zu frames",
                      out.error, cfg.max_error, cfg.frames);
        throw UnderResolvedError(buf);
    }
    return out;
}

double delta_weight(const RVec& D, unsigned m) {
    const std::size_t k = D.size();
    if (k == 0 || k >= m) throw InvalidArgument("delta_weight: need 1 <= k < m");
    const double scale = D[0];
    for (std::size_t i = 0; i < k; ++i) {
        if (!(D[i] > 1e-12 * std::max(scale, 1.0)))
            throw DegenerateError("delta_weight: zero singular value");
        if (i + 1 < k && !(D[i] - D[i + 1] > 1e-12 * scale))
            throw DegenerateError("delta_weight: singular values must be strictly decreasing");
    }
    const unsigned d = m - static_cast<unsigned>(k);
    double det = 1.0, vd = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        det *= D[i];
        for (std::size_t j = i + 1; j < k; ++j) vd *= D[i] * D[i] - D[j] * D[j];
    }
    return std::pow(0.5, static_cast<double>(k)) * std::pow(det, d) * vd;
}

PoolingVariant parse_variant(const std::string& name) {
    if (name == "affine") return PoolingVariant::Affine;
    if (name == "similitude") return PoolingVariant::Similitude;
    if (name == "stiefel") return PoolingVariant::Stiefel;
    throw InvalidArgument("unknown d-plane variant: " + name);
}

std::string variant_name(PoolingVariant v) {
    switch (v) {
        case PoolingVariant::Affine: return "affine";
        case PoolingVariant::Similitude: return "similitude";
        default: return "stiefel";
    }
}

MatrixParamGrid affine_grid(const FrameSet& frames, std::size_t nd, double d_min, double d_max, std::size_t nb,
                            double b_half) {
    if (frames.k != 1) throw InvalidArgument("affine node set is implemented for k = 1");
    if (!(d_min > 0 && d_max > d_min) || nd == 0 || nb == 0 || !(b_half > 0))
        throw InvalidArgument("affine grid: bad scale or b range");
    MatrixParamGrid pg;
    pg.variant = PoolingVariant::Affine;
    pg.m = frames.m;
    pg.frames = frames;
    const double h = std::log(d_max / d_min) / nd;
    for (std::size_t i = 0; i < nd; ++i) {
        double d = d_min * std::exp((i + 0.5) * h);
        pg.scales.push_back(d);
        pg.scale_w.push_back(d * h);
    }
    pg.signs = {1.0, -1.0};
    pg.nb = nb;
    pg.b_half = b_half;
    pg.values.assign(frames.U.size() * nd * 2 * nb, cplx(0.0, 0.0));
    return pg;
}

MatrixParamGrid similitude_grid(const FrameSet& frames, std::size_t na, double a_max, std::size_t nb,
                                double b_half) {
    if (frames.k != 1) throw InvalidArgument("similitude node set is implemented for k = 1");
    if (!(a_max > 0) || na == 0 || nb == 0 || !(b_half > 0)) throw InvalidArgument("similitude grid: bad ranges");
    MatrixParamGrid pg;
    pg.variant = PoolingVariant::Similitude;
    pg.m = frames.m;
    pg.frames = frames;
    for (std::size_t i = 0; i < na; ++i) {
        pg.scales.push_back((i + 0.5) * a_max / na);
        pg.scale_w.push_back(a_max / na);
    }
    pg.signs = {1.0};
    pg.nb = nb;
    pg.b_half = b_half;
    pg.values.assign(frames.U.size() * na * nb, cplx(0.0, 0.0));
    return pg;
}

namespace {

// \int P(y) rho(a y - b) dy by midpoint quadrature over the window where rho
// is non-negligible, with P interpolated from its slice grid
cplx profile_integral(const GridFunction& P, const Mollifier& rho, double a, double b, unsigned lagrange) {
    const double rc = rho.support_radius();
    const double ylo = P.origin[0], yhi = P.origin[0] + P.dims[0] * P.spacing[0];
    double lo = (b - rc) / a, hi = (b + rc) / a;
    if (lo > hi) std::swap(lo, hi);
    lo = std::max(lo, ylo);
    hi = std::min(hi, yhi);
    if (!(hi > lo)) return cplx(0.0, 0.0);
    const double h = std::min(P.spacing[0], 0.25 / std::abs(a));
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    const double step = (hi - lo) / n;
    cplx s(0.0, 0.0);
    RVec y(1);
    for (std::size_t i = 0; i < n; ++i) {
        y[0] = lo + (i + 0.5) * step;
        s += interpolate(P, y, lagrange) * rho.eval(a * y[0] - b);
    }
    return s * step;
}

void fill_pooling_ridgelet(const DPlaneField& Pg, const Mollifier& rho, MatrixParamGrid& pg, double exponent,
                           bool affine, unsigned lagrange) {
    const unsigned m = pg.m;
    const std::size_t ns = pg.scales.size(), nv = pg.signs.size();
    parallel_for(pg.frames.U.size() * ns * nv, [&](std::size_t idx) {
        const std::size_t iu = idx / (ns * nv), is = (idx / nv) % ns, iv = idx % nv;
        const double a = pg.amplitude(is, iv);
        const double pre = affine ? 1.0 / delta_weight({pg.scales[is]}, m) : std::pow(pg.scales[is], exponent);
        for (std::size_t jb = 0; jb < pg.nb; ++jb)
            pg.values[pg.index(iu, is, iv, jb)] = pre * profile_integral(Pg.slices[iu], rho, a, pg.b_node(jb), lagrange);
    });
}

std::size_t slice_nodes(const GridFunction& f) { return f.dims[0]; }
double slice_half(const GridFunction& f) { return -f.origin[0]; }

// Lap^{s/2} f decays only polynomially, so the ker U lines must reach the box
// corners or the profile loses the tail mass the direct integral keeps.
DPlaneOptions reach_corners(const GridFunction& f, DPlaneOptions opt) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < f.ndim(); ++i) {
        const double far = std::max(std::abs(f.origin[i]), std::abs(f.origin[i] + f.dims[i] * f.spacing[i]));
        r2 += far * far;
    }
    opt.y_half = std::max(opt.y_half, std::sqrt(r2));
    return opt;
}

}  // namespace

MatrixParamGrid ridgelet_affine(const GridFunction& f, const Mollifier& rho, MatrixParamGrid pg,
                                const DPlaneOptions& opt) {
    if (pg.variant != PoolingVariant::Affine) throw InvalidArgument("ridgelet_affine: node set is not affine");
    if (f.ndim() != pg.m) throw InvalidArgument("ridgelet_affine: dimension mismatch");
    GridFunction g = fractional_laplacian(f, pg.m - 1.0);
    const DPlaneOptions o = reach_corners(f, opt);
    const std::size_t nb = static_cast<std::size_t>(std::ceil(slice_nodes(f) * o.y_half / slice_half(f)));
    DPlaneField Pg = dplane_transform(g, pg.frames, nb, nb * (slice_half(f) / slice_nodes(f)), o);
    fill_pooling_ridgelet(Pg, rho, pg, 0.0, true, opt.lagrange);
    return pg;
}

MatrixParamGrid ridgelet_similitude(const GridFunction& f, const Mollifier& rho, double s, MatrixParamGrid pg,
                                    const DPlaneOptions& opt) {
    if (pg.variant != PoolingVariant::Similitude) throw InvalidArgument("ridgelet_similitude: node set is not similitude");
    if (f.ndim() != pg.m) throw InvalidArgument("ridgelet_similitude: dimension mismatch");
    GridFunction g = fractional_laplacian(f, s);
    const DPlaneOptions o = reach_corners(f, opt);
    const std::size_t nb = static_cast<std::size_t>(std::ceil(slice_nodes(f) * o.y_half / slice_half(f)));
    DPlaneField Pg = dplane_transform(g, pg.frames, nb, nb * (slice_half(f) / slice_nodes(f)), o);
    fill_pooling_ridgelet(Pg, rho, pg, pg.m - s - 1.0, false, opt.lagrange);
    return pg;
}

cplx pooling_integral(const GridFunction& g, const Mollifier& rho, const RVec& a, double b) {
    if (a.size() != g.ndim()) throw InvalidArgument("pooling_integral: dimension mismatch");
    const double rc = rho.support_radius();
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        RVec x = g.point(i);
        double t = -b;
        for (std::size_t j = 0; j < a.size(); ++j) t += a[j] * x[j];
        if (std::abs(t) > rc) continue;
        s += g.values[i] * rho.eval(t);
    }
    return s * g.cell_volume();
}

DPlaneField ridgelet_stiefel(const DPlaneField& P, double t) { return b_fractional_laplacian(P, P.d() - t); }

DPlaneField ridgelet_stiefel(const DPlaneField& P, const std::string& activation) {
    const double d = P.d();
    if (activation == "delta") return ridgelet_stiefel(P, 0.0);
    if (P.k != 1) throw InvalidArgument("stiefel step/relu ridgelet needs k = 1");
    if (activation == "step")
        return b_multiplier(P, [d](const RVec& w) { return cplx(0.0, w[0]) * std::pow(std::abs(w[0]), d); });
    if (activation == "relu")
        return b_multiplier(P, [d](const RVec& w) { return cplx(-w[0] * w[0] * std::pow(std::abs(w[0]), d), 0.0); });
    throw InvalidArgument("stiefel activation must be step, relu or delta: " + activation);
}

GridFunction pooling_network(const MatrixParamGrid& gamma, const Activation& sigma, const GridFunction& geom,
                             double frame_mass) {
    if (geom.ndim() != gamma.m) throw InvalidArgument("pooling_network: geometry rank mismatch");
    GridFunction g = geom;
    g.values.assign(geom.size(), cplx(0.0, 0.0));
    const std::size_t nu = gamma.frames.U.size(), ns = gamma.scales.size(), nv = gamma.signs.size();
    RVec wscale(ns);
    for (std::size_t is = 0; is < ns; ++is)
        wscale[is] = gamma.scale_w[is] *
                     (gamma.variant == PoolingVariant::Affine ? delta_weight({gamma.scales[is]}, gamma.m) : 1.0);
    std::vector<RVec> u(nu);
    for (std::size_t iu = 0; iu < nu; ++iu) u[iu] = column0(gamma.frames.U[iu]);
    const double db = gamma.db(), b0 = gamma.b_node(0), cut = sigma.support;
    const double du = frame_mass / nu;
    parallel_for(geom.size(), [&](std::size_t i) {
        RVec x = geom.point(i);
        cplx total(0.0, 0.0);
        for (std::size_t iu = 0; iu < nu; ++iu) {
            double proj = 0.0;
            for (std::size_t a = 0; a < x.size(); ++a) proj += u[iu][a] * x[a];
            for (std::size_t is = 0; is < ns; ++is)
                for (std::size_t iv = 0; iv < nv; ++iv) {
                    const double t = gamma.amplitude(is, iv) * proj;
                    std::size_t jlo = 0, jhi = gamma.nb;
                    if (std::isfinite(cut)) {
                        double lo = std::ceil((t - cut - b0) / db), hi = std::floor((t + cut - b0) / db);
                        if (hi < 0 || lo >= static_cast<double>(gamma.nb)) continue;
                        jlo = static_cast<std::size_t>(std::max(0.0, lo));
                        jhi = static_cast<std::size_t>(std::min<double>(gamma.nb - 1, hi)) + 1;
                    }
                    const cplx* row = &gamma.values[gamma.index(iu, is, iv, 0)];
                    cplx s(0.0, 0.0);
                    for (std::size_t jb = jlo; jb < jhi; ++jb) s += row[jb] * sigma.eval(t - (b0 + jb * db));
                    total += s * wscale[is];
                }
        }
        g.values[i] = total * (du * db);
    });
    return g;
}

GridFunction stiefel_network(const DPlaneField& R, const std::string& activation, const GridFunction& geom,
                             double frame_mass) {
    if (geom.ndim() != R.m) throw InvalidArgument("stiefel_network: geometry rank mismatch");
    if (activation != "delta" && R.k != 1) throw InvalidArgument("stiefel step/relu network needs k = 1");
    if (activation != "delta" && activation != "step" && activation != "relu")
        throw InvalidArgument("stiefel activation must be step, relu or delta: " + activation);
    // b-integral against sigma: delta samples R, step integrates once and relu
    // twice (trapezoid cumulative sums from the left edge)
    std::vector<GridFunction> prof = R.slices;
    const int passes = activation == "step" ? 1 : activation == "relu" ? 2 : 0;
    for (auto& p : prof)
        for (int pass = 0; pass < passes; ++pass) {
            const double h = p.spacing[0];
            cplx acc(0.0, 0.0), prev = p.values[0];
            p.values[0] = cplx(0.0, 0.0);
            for (std::size_t j = 1; j < p.size(); ++j) {
                cplx cur = p.values[j];
                acc += 0.5 * h * (prev + cur);
                prev = cur;
                p.values[j] = acc;
            }
        }
    GridFunction g = geom;
    g.values.assign(geom.size(), cplx(0.0, 0.0));
    const double du = frame_mass / R.slices.size();
    parallel_for(geom.size(), [&](std::size_t i) {
        RVec x = geom.point(i);
        cplx s(0.0, 0.0);
        for (std::size_t iu = 0; iu < prof.size(); ++iu) s += interpolate(prof[iu], R.frames[iu].apply_transpose(x));
        g.values[i] = s * du;
    });
    return g;
}

DPlaneResult dplane_reconstruct(const PoolingSetup& cfg) {
    if (cfg.k == 0 || cfg.k >= cfg.m) throw InvalidArgument("dplane: need 1 <= k < m");
    const unsigned m = cfg.m, k = cfg.k, d = m - k;
    GridFunction f = gaussian_probe(m, cfg.nx, cfg.x_half);
    GridFunction geom = GridFunction::box(m, cfg.n_eval, cfg.eval_half);
    GridFunction target = geom;
    fill_gaussian(target);
    FrameSet fs = make_frames(m, k, cfg.frames, cfg.seed, cfg.frame_design);
    DPlaneResult out;
    const double c_lit = polar_constant_literal(m, k), c_mk = polar_constant(m, k);
    auto within = [](cplx a, cplx b) { return std::abs(a - b) <= 0.1 * std::abs(b); };

    if (cfg.variant == PoolingVariant::Stiefel) {
        if (cfg.b_half < cfg.eval_half * std::sqrt(double(m)) + 0.5)
            out.warnings.push_back("b_range_truncated");
        DPlaneField P = dplane_transform(f, fs, cfg.nb, cfg.b_half, cfg.transform);
        out.calibration = calibrate_frames(P);
        DPlaneField R = ridgelet_stiefel(P, cfg.stiefel_activation);
        out.g = stiefel_network(R, cfg.stiefel_activation, geom, out.calibration.frame_mass);
        ConstantFit fit = fit_constant(out.g.values, target.values);
        out.c_empirical = fit.c;
        out.residual = fit.residual;
        out.candidates.push_back({"1/((2pi)^d c_mk)", 1.0 / (std::pow(kTwoPi, d) * c_lit), false});
        out.candidates.push_back({"(2pi)^d c_mk", std::pow(kTwoPi, d) * c_mk, false});
        if (k == 1 && cfg.stiefel_activation == "step")
            out.candidates.push_back({"radon 2(2pi)^{m-1}", 2.0 * std::pow(kTwoPi, m - 1.0), false});
    } else {
        if (k != 1) throw InvalidArgument("affine and similitude reconstruction are implemented for k = 1");
        Activation sigma = make_activation(cfg.sigma);
        Mollifier rho = gaussian_mollifier(cfg.rho_order);
        out.calibration = calibrate_frames(m, k, cfg.frames, cfg.nx, cfg.x_half);
        MatrixParamGrid pg;
        double p_weight = 0.0, prefactor_printed = std::pow(kTwoPi, d) / (2.0 * c_lit), prefactor = 0.0;
        if (cfg.variant == PoolingVariant::Affine) {
            pg = affine_grid(fs, cfg.n_scale, cfg.scale_min, cfg.scale_max, cfg.nb_param, cfg.b_half_param);
            pg = ridgelet_affine(f, rho, std::move(pg), cfg.transform);
            p_weight = 1.0;
            prefactor = 2.0 * std::pow(kTwoPi, m - 1.0);
        } else {
            pg = similitude_grid(fs, cfg.n_scale, cfg.scale_max, cfg.nb_param, cfg.b_half_param);
            pg = ridgelet_similitude(f, rho, cfg.s, std::move(pg), cfg.transform);
            p_weight = m - cfg.s;
            prefactor = std::pow(kTwoPi, m - 1.0);
        }
        if (cfg.b_half_param < cfg.scale_max * cfg.eval_half) out.warnings.push_back("b_range_truncated");
        cplx pairing(std::numeric_limits<double>::quiet_NaN(), 0.0);
        try {
            pairing = frequency_pairing(sigma, rho, p_weight);
            if (std::abs(pairing) < 1e-10) out.warnings.push_back("inadmissible_pair");
        } catch (const Error&) {
            out.warnings.push_back("inadmissible_pair");
        }
        out.g = pooling_network(pg, sigma, geom, out.calibration.frame_mass);
        ConstantFit fit = fit_constant(out.g.values, target.values);
        out.c_empirical = fit.c;
        out.residual = fit.residual;
        out.candidates.push_back({"(2pi)^d/(2^k c_mk) pairing", prefactor_printed * pairing, false});
        out.candidates.push_back({"change-of-variables pairing", prefactor * pairing, false});
    }
    for (auto& c : out.candidates) c.match = within(out.c_empirical, c.value);
    if (!std::isfinite(out.residual) || !std::isfinite(std::abs(out.c_empirical)))
        throw Error("dplane reconstruction produced a non-finite result");
    return out;
}

}  // namespace ridgekit
