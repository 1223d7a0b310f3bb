#include "ridgekit/euclid.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ridgekit/errors.hpp"
#include "ridgekit/numeric.hpp"
#include "ridgekit/parallel.hpp"
#include "ridgekit/special.hpp"

namespace ridgekit {

ParamGrid::ParamGrid(unsigned m_, std::size_t na_, double a_half_, std::size_t nb_, double b_half_)
    : m(m_), na(na_), a_half(a_half_), nb(nb_), b_half(b_half_) {
    if (m == 0 || na == 0 || nb == 0 || !(a_half > 0) || !(b_half > 0))
        throw InvalidArgument("parameter grid needs positive sizes and radii");
    values.assign(a_count() * nb, cplx(0.0, 0.0));
}

std::size_t ParamGrid::a_count() const {
    std::size_t n = 1;
    for (unsigned i = 0; i < m; ++i) n *= na;
    return n;
}

RVec ParamGrid::a_point(std::size_t a_flat) const {
    RVec a(m);
    const double h = da();
    for (unsigned i = m; i-- > 0;) {
        a[i] = -a_half + (static_cast<double>(a_flat % na) + 0.5) * h;
        a_flat /= na;
    }
    return a;
}

double ParamGrid::b_node(std::size_t j) const { return -b_half + (static_cast<double>(j) + 0.5) * db(); }

double ParamGrid::cell() const { return std::pow(da(), m) * db(); }

EuclidGrid EuclidGrid::halved() const {
    EuclidGrid g = *this;
    g.nx *= 2;
    g.na *= 2;
    g.nb *= 2;
    return g;
}

std::string EuclidGrid::describe() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "m=%u x=%g/%zu a=%g/%zu b=%g/%zu", m, x_half, nx, a_half, na, b_half, nb);
    return buf;
}

GridFunction gaussian_target(unsigned m, std::size_t nx, double x_half, double width) {
    GridFunction f = GridFunction::box(m, nx, x_half);
    for (std::size_t i = 0; i < f.size(); ++i) {
        RVec x = f.point(i);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        f.values[i] = std::exp(-0.5 * r2 / (width * width));
    }
    return f;
}

namespace {

// projections t_i = a . x_i for every grid point
void project(const RVec& a, const RVec& pts, unsigned m, RVec& t) {
    const std::size_t n = pts.size() / m;
    t.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (unsigned j = 0; j < m; ++j) s += a[j] * pts[i * m + j];
        t[i] = s;
    }
}

RVec grid_points(const GridFunction& g) {
    RVec pts(g.size() * g.ndim());
    for (std::size_t i = 0; i < g.size(); ++i) {
        RVec x = g.point(i);
        for (std::size_t j = 0; j < x.size(); ++j) pts[i * x.size() + j] = x[j];
    }
    return pts;
}

}  // namespace

ParamGrid ridgelet(const GridFunction& f, const Mollifier& rho, ParamGrid pg) {
    if (f.ndim() != pg.m) throw InvalidArgument("ridgelet: dimension mismatch");
    const unsigned m = pg.m;
    const RVec pts = grid_points(f);
    const double vol = f.cell_volume();
    const double rcut = rho.support_radius();
    // b-range must cover sup |a.x| over the boxes
    double sup = 0.0;
    for (unsigned j = 0; j < m; ++j) sup += pg.a_half * std::max(std::abs(f.origin[j]), std::abs(f.origin[j] + f.dims[j] * f.spacing[j]));
    pg.b_truncated = pg.b_half < sup;
    parallel_for(pg.a_count(), [&](std::size_t ia) {
        RVec a = pg.a_point(ia), t;
        project(a, pts, m, t);
        for (std::size_t jb = 0; jb < pg.nb; ++jb) {
            const double b = pg.b_node(jb);
            cplx s(0.0, 0.0);
            for (std::size_t i = 0; i < t.size(); ++i) {
                double arg = t[i] - b;
                if (std::abs(arg) > rcut) continue;
                s += f.values[i] * rho.eval(arg);  // rho is real
            }
            pg.values[ia * pg.nb + jb] = s * vol;
        }
    });
    return pg;
}

cplx ridgelet_slice(const GridFunction& f, const Mollifier& rho, const RVec& a, double b, std::size_t n_omega,
                    double omega_max) {
    if (a.size() != f.ndim()) throw InvalidArgument("ridgelet_slice: dimension mismatch");
    const RVec pts = grid_points(f);
    const unsigned m = static_cast<unsigned>(a.size());
    RVec t;
    project(a, pts, m, t);
    const double vol = f.cell_volume();
    auto [w, wq] = gauss_legendre(n_omega, -omega_max, omega_max);
    cplx total(0.0, 0.0);
    for (std::size_t q = 0; q < w.size(); ++q) {
        // f^(w a) by direct quadrature
        cplx fh(0.0, 0.0);
        for (std::size_t i = 0; i < t.size(); ++i) fh += f.values[i] * std::polar(1.0, -w[q] * t[i]);
        fh *= vol;
        total += wq[q] * fh * std::conj(rho.hat(w[q])) * std::polar(1.0, w[q] * b);
    }
    return total / kTwoPi;
}

CVec network(const ParamGrid& gamma, const Activation& sigma, const RVec& points) {
    const unsigned m = gamma.m;
    if (points.size() % m != 0) throw InvalidArgument("network: point array not a multiple of m");
    const std::size_t np = points.size() / m;
    const std::size_t na = gamma.a_count();
    std::vector<RVec> anodes(na);
    for (std::size_t ia = 0; ia < na; ++ia) anodes[ia] = gamma.a_point(ia);
    const double cell = gamma.cell();
    const double cut = sigma.support;
    const double db = gamma.db(), b0 = gamma.b_node(0);
    CVec out(np);
    parallel_for(np, [&](std::size_t ip) {
        cplx s(0.0, 0.0);
        for (std::size_t ia = 0; ia < na; ++ia) {
            double t = 0.0;
            for (unsigned j = 0; j < m; ++j) t += anodes[ia][j] * points[ip * m + j];
            std::size_t jlo = 0, jhi = gamma.nb;
            if (std::isfinite(cut)) {
                // nodes with |t - b| <= cut
                double lo = std::ceil((t - cut - b0) / db), hi = std::floor((t + cut - b0) / db);
                if (hi < 0 || lo >= static_cast<double>(gamma.nb)) continue;
                jlo = static_cast<std::size_t>(std::max(0.0, lo));
                jhi = static_cast<std::size_t>(std::min<double>(gamma.nb - 1, hi)) + 1;
            }
            const cplx* row = &gamma.values[ia * gamma.nb];
            for (std::size_t jb = jlo; jb < jhi; ++jb) s += row[jb] * sigma.eval(t - (b0 + jb * db));
        }
        out[ip] = s * cell;
    });
    return out;
}

GridFunction network_on(const ParamGrid& gamma, const Activation& sigma, const GridFunction& geometry) {
    GridFunction g = geometry;
    g.values = network(gamma, sigma, grid_points(geometry));
    return g;
}

EuclidResult reconstruct(const GridFunction& f, const Activation& sigma, const Mollifier& rho, const ParamGrid& pg) {
    EuclidResult out;
    out.admissible = true;
    try {
        out.c_frequency = admissibility(sigma, rho, pg.m);
    } catch (const InadmissibleError&) {
        out.admissible = false;
        out.c_frequency = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
        out.warnings.push_back("inadmissible_pair");
    }
    ParamGrid R = ridgelet(f, rho, pg);
    if (R.b_truncated) out.warnings.push_back("b_range_truncated");
    out.g = network_on(R, sigma, f);
    ConstantFit fit = fit_constant(out.g.values, f.values);
    out.c_empirical = fit.c;
    out.residual = fit.residual;
    return out;
}

EuclidResult reconstruct(const EuclidGrid& grid, const Activation& sigma, const Mollifier& rho) {
    GridFunction f = gaussian_target(grid.m, grid.nx, grid.x_half);
    ParamGrid pg(grid.m, grid.na, grid.a_half, grid.nb, grid.b_half);
    return reconstruct(f, sigma, rho, pg);
}

}  // namespace ridgekit
