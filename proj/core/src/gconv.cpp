#include "ridgekit/gconv.hpp"

#include <cmath>

#include "ridgekit/errors.hpp"
#include "ridgekit/parallel.hpp"

namespace ridgekit {

namespace {
std::size_t wrap(long i, std::size_t n) {
    long r = i % static_cast<long>(n);
    return static_cast<std::size_t>(r < 0 ? r + static_cast<long>(n) : r);
}
}  // namespace

RVec cyclic_shift(const RVec& x, long g) {
    const std::size_t n = x.size();
    RVec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[wrap(static_cast<long>(i) - g, n)];
    return y;
}

RVec gconvolve(const RVec& a, const RVec& x) {
    if (a.size() != x.size() || a.empty()) throw InvalidArgument("gconvolve: size mismatch");
    const std::size_t n = x.size();
    RVec out(n);
    for (std::size_t g = 0; g < n; ++g) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i] * x[(i + g) % n];
        out[g] = s;
    }
    return out;
}

FilterSubspace FilterSubspace::standard(std::size_t n, std::size_t m) {
    if (m == 0 || m > n) throw InvalidArgument("filter subspace needs 1 <= m <= n");
    return FilterSubspace{n, Mat::identity(n, m)};
}

RVec FilterSubspace::embed(const RVec& c) const { return frame.apply(c); }

RVec FilterSubspace::coords(const RVec& x) const { return frame.apply_transpose(x); }

namespace {
RVec column(const Mat& M, std::size_t j) {
    RVec v(M.rows);
    for (std::size_t i = 0; i < M.rows; ++i) v[i] = M(i, j);
    return v;
}

// responses u(g) = ((h_1 * x)(g), ..., (h_m * x)(g)), row-major n x m
RVec filter_responses(const FilterSubspace& H, const RVec& x) {
    const std::size_t n = H.n, m = H.dim();
    if (x.size() != n) throw InvalidArgument("signal length does not match group order");
    RVec u(n * m);
    for (std::size_t j = 0; j < m; ++j) {
        RVec r = gconvolve(column(H.frame, j), x);
        for (std::size_t g = 0; g < n; ++g) u[g * m + j] = r[g];
    }
    return u;
}
}  // namespace

EquivariantTarget gaussian_equivariant_target(const FilterSubspace& H) {
    EquivariantTarget f;
    f.name = "gauss-equivariant";
    f.equivariant = true;
    f.eval = [H](const RVec& x) {
        RVec u = filter_responses(H, x);
        const std::size_t m = H.dim();
        CVec out(H.n);
        for (std::size_t g = 0; g < H.n; ++g) {
            double r2 = 0.0;
            for (std::size_t j = 0; j < m; ++j) r2 += u[g * m + j] * u[g * m + j];
            out[g] = std::exp(-0.5 * r2);
        }
        return out;
    };
    return f;
}

EquivariantTarget invariant_control_target(const FilterSubspace& H) {
    EquivariantTarget f;
    f.name = "non-equivariant";
    f.equivariant = false;
    f.eval = [H](const RVec& x) {
        RVec c = H.coords(x);
        double r2 = 0.0;
        for (double v : c) r2 += v * v;
        return CVec(H.n, cplx(std::exp(-0.5 * r2), 0.0));
    };
    return f;
}

double equivariance_defect(const EquivariantTarget& f, std::size_t n, const std::vector<RVec>& signals) {
    double worst = 0.0;
    for (const auto& x : signals) {
        CVec base = f.eval(x);
        for (std::size_t g = 0; g < n; ++g) {
            CVec shifted = f.eval(cyclic_shift(x, static_cast<long>(g)));
            for (std::size_t h = 0; h < n; ++h)
                worst = std::max(worst, std::abs(shifted[h] - base[wrap(long(h) - long(g), n)]));
        }
    }
    return worst;
}

CVec gconv_network(const ParamGrid& gamma, const Activation& sigma, const FilterSubspace& H, const RVec& x) {
    if (gamma.m != H.dim()) throw InvalidArgument("gconv_network: parameter grid dimension differs from subspace");
    return network(gamma, sigma, filter_responses(H, x));
}

ParamGrid gconv_ridgelet(const EquivariantTarget& f, const Mollifier& rho, const FilterSubspace& H,
                         const GridFunction& coord_grid, ParamGrid pg) {
    if (coord_grid.ndim() != H.dim()) throw InvalidArgument("gconv_ridgelet: coordinate grid rank");
    GridFunction fe = coord_grid;
    fe.values.assign(fe.size(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < fe.size(); ++i) fe.values[i] = f.eval(H.embed(fe.point(i)))[0];
    return ridgelet(fe, rho, std::move(pg));
}

GconvResult gconv_reconstruct(const EquivariantTarget& f, const Activation& sigma, const Mollifier& rho,
                              const FilterSubspace& H, const EuclidGrid& grid, const std::vector<RVec>& signals) {
    if (grid.m != H.dim()) throw InvalidArgument("gconv_reconstruct: grid dimension differs from subspace");
    GconvResult out;
    try {
        out.c_frequency = admissibility(sigma, rho, grid.m);
    } catch (const InadmissibleError&) {
        out.c_frequency = cplx(std::nan(""), 0.0);
    }
    GridFunction coords = GridFunction::box(grid.m, grid.nx, grid.x_half);
    ParamGrid R = gconv_ridgelet(f, rho, H, coords, ParamGrid(grid.m, grid.na, grid.a_half, grid.nb, grid.b_half));
    CVec all_out, all_tgt;
    for (const auto& x : signals) {
        CVec o = gconv_network(R, sigma, H, x), t = f.eval(x);
        all_out.insert(all_out.end(), o.begin(), o.end());
        all_tgt.insert(all_tgt.end(), t.begin(), t.end());
        out.outputs.push_back(std::move(o));
        out.targets.push_back(std::move(t));
    }
    ConstantFit fit = fit_constant(all_out, all_tgt);
    out.c_empirical = fit.c;
    out.residual = fit.residual;
    CVec off_o, off_t;
    for (std::size_t s = 0; s < signals.size(); ++s)
        for (std::size_t g = 1; g < H.n; ++g) {
            off_o.push_back(out.outputs[s][g]);
            off_t.push_back(fit.c * out.targets[s][g]);
        }
    out.residual_off_identity = off_o.empty() ? 0.0 : relative_l2(off_o, off_t);
    return out;
}

std::vector<RVec> random_signals_in(const FilterSubspace& H, std::size_t count, double scale, Rng& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<RVec> out;
    for (std::size_t s = 0; s < count; ++s) {
        RVec c(H.dim());
        for (auto& v : c) v = scale * N(rng);
        out.push_back(H.embed(c));
    }
    return out;
}

}  // namespace ridgekit
