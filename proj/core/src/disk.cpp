#include "ridgekit/disk.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ridgekit/errors.hpp"
#include "ridgekit/numeric.hpp"
#include "ridgekit/parallel.hpp"
#include "ridgekit/special.hpp"

namespace ridgekit {

DiskConstants disk_constants_a() { return {1.0, 1.0, "W=1,rho=1"}; }
DiskConstants disk_constants_b() { return {1.0, 0.5, "W=1,rho=1/2"}; }

double plancherel_density(double lambda) {
    double t = 0.5 * kPi * lambda;
    return t * std::tanh(t);
}

double composite_distance(cplx z, cplx u) {
    double r2 = std::norm(z);
    if (!(r2 < 1.0)) throw DomainError("composite_distance: point outside the open disk");
    return 0.5 * std::log((1.0 - r2) / std::norm(z - u));
}

RVec spd_composite_distance(const Mat& x, const Mat& u) {
    const std::size_t k = x.rows;
    if (x.cols != k || u.rows != k || u.cols != k) throw InvalidArgument("spd_composite_distance: shape mismatch");
    if ((u.transpose() * u).max_abs_diff(Mat::identity(k, k)) > 1e-10)
        throw InvalidArgument("spd_composite_distance: u is not orthogonal");
    Mat y = u.transpose() * x * u;
    // reversing the index order turns the unit-upper decomposition into LDL^T
    Eigen::MatrixXd R(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) R(i, j) = 0.5 * (y(k - 1 - i, k - 1 - j) + y(k - 1 - j, k - 1 - i));
    Eigen::LLT<Eigen::MatrixXd> llt(R);
    if (llt.info() != Eigen::Success) throw DomainError("spd_composite_distance: x is not positive definite");
    Eigen::MatrixXd L = llt.matrixL();
    RVec out(k);
    for (std::size_t i = 0; i < k; ++i) {
        double d = L(k - 1 - i, k - 1 - i);
        out[i] = 0.5 * std::log(d * d);
    }
    return out;
}

std::vector<cplx> horocycle_points(cplx u, double t, std::size_t count) {
    const double tau = std::tanh(t);
    const cplx c = 0.5 * (1.0 + tau) * u;
    const double rad = 0.5 * (1.0 - tau);
    std::vector<cplx> pts(count);
    // stay on the arc facing the origin; near u both log arguments underflow
    for (std::size_t j = 0; j < count; ++j) {
        double phi = kPi - 2.0 + 4.0 * (j + 0.5) / count;
        pts[j] = c + rad * u * std::polar(1.0, phi);
    }
    return pts;
}

DiskGrid DiskGrid::make(double r_max, std::size_t nr, std::size_t ntheta) {
    if (!(r_max > 0 && r_max <= 0.995)) throw InvalidArgument("disk grid: r_max must lie in (0, 0.995]");
    if (nr == 0 || ntheta == 0) throw InvalidArgument("disk grid: empty");
    DiskGrid g;
    g.r_max = r_max;
    g.nr = nr;
    g.ntheta = ntheta;
    auto [r, wr] = gauss_legendre(nr, 0.0, r_max);
    const double dth = kTwoPi / ntheta;
    g.z.reserve(nr * ntheta);
    g.w.reserve(nr * ntheta);
    for (std::size_t i = 0; i < nr; ++i) {
        double vol = wr[i] * r[i] / ((1.0 - r[i] * r[i]) * (1.0 - r[i] * r[i])) * dth;
        for (std::size_t j = 0; j < ntheta; ++j) {
            g.z.push_back(std::polar(r[i], j * dth));
            g.w.push_back(vol);
        }
    }
    g.values.assign(g.z.size(), cplx(0.0, 0.0));
    return g;
}

DiskGrid radial_bump(double r_max, std::size_t nr, std::size_t ntheta, double s) {
    DiskGrid g = DiskGrid::make(r_max, nr, ntheta);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double d = std::atanh(std::abs(g.z[i]));
        g.values[i] = std::exp(-0.5 * (d / s) * (d / s));
    }
    return g;
}

namespace {

// q[k * n + i] = <z_i, u_k>
RVec distance_table(const std::vector<cplx>& z, const std::vector<cplx>& u) {
    RVec q(u.size() * z.size());
    for (std::size_t k = 0; k < u.size(); ++k)
        for (std::size_t i = 0; i < z.size(); ++i) q[k * z.size() + i] = composite_distance(z[i], u[k]);
    return q;
}

std::vector<cplx> circle_nodes(std::size_t nu) {
    std::vector<cplx> u(nu);
    for (std::size_t k = 0; k < nu; ++k) u[k] = std::polar(1.0, kTwoPi * k / nu);
    return u;
}

}  // namespace

DiskSpectrum helgason_forward(const DiskGrid& f, std::size_t nlambda, double lambda_max, std::size_t nu,
                              const DiskConstants& k) {
    DiskSpectrum F;
    F.lambda = midpoint_nodes(nlambda, lambda_max);
    F.lambda_max = lambda_max;
    F.u = circle_nodes(nu);
    F.values.assign(nlambda * nu, cplx(0.0, 0.0));
    const RVec q = distance_table(f.z, F.u);
    const std::size_t n = f.size();
    parallel_for(nlambda * nu, [&](std::size_t idx) {
        std::size_t il = idx / nu, ku = idx % nu;
        const double lam = F.lambda[il];
        const double* qk = &q[ku * n];
        cplx s(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            s += f.values[i] * f.w[i] * std::exp(k.varrho * qk[i]) * std::polar(1.0, -lam * qk[i]);
        F.values[idx] = s;
    });
    double mx = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i) mx = std::max(mx, std::abs(F.values[i]));
    for (std::size_t ku = 0; ku < nu; ++ku)
        edge = std::max({edge, std::abs(F.values[ku]), std::abs(F.values[(nlambda - 1) * nu + ku])});
    F.truncated = edge > 1e-6 * mx;
    return F;
}

DiskGrid helgason_inverse(const DiskSpectrum& F, const DiskGrid& geom, const DiskConstants& k, double normalisation) {
    DiskGrid g = geom;
    const std::size_t nl = F.lambda.size(), nu = F.u.size(), n = geom.size();
    const double dl = 2.0 * F.lambda_max / nl, du = 1.0 / nu;
    const RVec q = distance_table(geom.z, F.u);
    RVec dens(nl);
    for (std::size_t il = 0; il < nl; ++il) dens[il] = plancherel_density(F.lambda[il]);
    const double scale = normalisation / k.W * dl * du;
    parallel_for(n, [&](std::size_t i) {
        cplx s(0.0, 0.0);
        for (std::size_t ku = 0; ku < nu; ++ku) {
            const double qi = q[ku * n + i];
            cplx acc(0.0, 0.0);
            for (std::size_t il = 0; il < nl; ++il)
                acc += F.values[il * nu + ku] * dens[il] * std::polar(1.0, F.lambda[il] * qi);
            s += acc * std::exp(k.varrho * qi);
        }
        g.values[i] = s * scale;
    });
    return g;
}

double disk_relative_l2(const DiskGrid& a, const DiskGrid& b) { return relative_l2(a.values, b.values, b.w); }

Calibration calibrate_disk(const DiskGrid& f, std::size_t nlambda, double lambda_max, std::size_t nu) {
    Calibration cal;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& k : {disk_constants_a(), disk_constants_b()}) {
        DiskSpectrum F = helgason_forward(f, nlambda, lambda_max, nu, k);
        CalibrationEntry e{k, disk_relative_l2(helgason_inverse(F, f, k), f),
                           disk_relative_l2(helgason_inverse(F, f, k, 1.0), f)};
        if (e.error < best) {
            best = e.error;
            cal.winner = k;
            cal.winner_error = e.error;
        }
        cal.entries.push_back(e);
    }
    return cal;
}

cplx lambda_multiplier_at(const DiskGrid& f, cplx x, const DiskConstants& k, std::size_t nlambda,
                          double lambda_max, std::size_t nu) {
    auto [lam, wl] = gauss_legendre(nlambda, -lambda_max, lambda_max);
    const auto u = circle_nodes(nu);
    const RVec q = distance_table(f.z, u);
    const std::size_t n = f.size();
    cplx total(0.0, 0.0);
    for (std::size_t ku = 0; ku < nu; ++ku) {
        const double qx = composite_distance(x, u[ku]);
        for (std::size_t il = 0; il < nlambda; ++il) {
            cplx fh(0.0, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                fh += f.values[i] * f.w[i] * std::exp(k.varrho * q[ku * n + i]) * std::polar(1.0, -lam[il] * q[ku * n + i]);
            double d = plancherel_density(lam[il]);
            total += wl[il] * fh * d * d * std::exp(k.varrho * qx) * std::polar(1.0, lam[il] * qx);
        }
    }
    return total * (kDiskInverseNormalisation / k.W / nu);
}

HoroParamGrid::HoroParamGrid(double a_half_, std::size_t na_, std::size_t nu_, double b_half_, std::size_t nb_)
    : a_half(a_half_), na(na_), nu(nu_), b_half(b_half_), nb(nb_) {
    if (!(a_half > 0 && b_half > 0) || na == 0 || nu == 0 || nb == 0)
        throw InvalidArgument("horospherical parameter grid needs positive sizes");
    values.assign(na * nu * nb, cplx(0.0, 0.0));
}

cplx HoroParamGrid::u_node(std::size_t k) const { return std::polar(1.0, kTwoPi * k / nu); }

DiskGrid horo_network(const HoroParamGrid& gamma, const Activation& sigma, const DiskGrid& geom,
                      const DiskConstants& k) {
    DiskGrid g = geom;
    const std::size_t n = geom.size();
    std::vector<cplx> u(gamma.nu);
    for (std::size_t ku = 0; ku < gamma.nu; ++ku) u[ku] = gamma.u_node(ku);
    const RVec q = distance_table(geom.z, u);
    const double cell = gamma.da() * gamma.du() * gamma.db();
    const double db = gamma.db(), b0 = gamma.b_node(0), cut = sigma.support;
    parallel_for(n, [&](std::size_t i) {
        cplx s(0.0, 0.0);
        for (std::size_t ku = 0; ku < gamma.nu; ++ku) {
            const double qi = q[ku * n + i];
            cplx acc(0.0, 0.0);
            for (std::size_t ia = 0; ia < gamma.na; ++ia) {
                const double t = gamma.a_node(ia) * qi;
                std::size_t jlo = 0, jhi = gamma.nb;
                if (std::isfinite(cut)) {
                    double lo = std::ceil((t - cut - b0) / db), hi = std::floor((t + cut - b0) / db);
                    if (hi < 0 || lo >= static_cast<double>(gamma.nb)) continue;
                    jlo = static_cast<std::size_t>(std::max(0.0, lo));
                    jhi = static_cast<std::size_t>(std::min<double>(gamma.nb - 1, hi)) + 1;
                }
                const cplx* row = &gamma.values[(ia * gamma.nu + ku) * gamma.nb];
                for (std::size_t jb = jlo; jb < jhi; ++jb) acc += row[jb] * sigma.eval(t - (b0 + jb * db));
            }
            s += acc * std::exp(k.varrho * qi);
        }
        g.values[i] = s * cell;
    });
    return g;
}

namespace {

void ridgelet_slice_path(const DiskGrid& f, const Mollifier& rho, HoroParamGrid& pg, const DiskConstants& k,
                         const HoroOptions& opt) {
    const std::size_t n = f.size(), nw = opt.n_omega;
    const RVec om = midpoint_nodes(nw, opt.omega_max);
    const double dw = 2.0 * opt.omega_max / nw;
    std::vector<cplx> u(pg.nu);
    for (std::size_t ku = 0; ku < pg.nu; ++ku) u[ku] = pg.u_node(ku);
    const RVec q = distance_table(f.z, u);
    CVec rho_conj(nw);
    for (std::size_t j = 0; j < nw; ++j) rho_conj[j] = std::conj(rho.hat(om[j]));
    parallel_for(pg.na * pg.nu, [&](std::size_t idx) {
        const std::size_t ia = idx / pg.nu, ku = idx % pg.nu;
        const double a = pg.a_node(ia);
        const double* qk = &q[ku * n];
        // f^(a w_j, u) for all j via a phase recurrence in j
        CVec cur(n), step(n);
        for (std::size_t i = 0; i < n; ++i) {
            cur[i] = f.values[i] * f.w[i] * std::exp(k.varrho * qk[i]) * std::polar(1.0, -a * om[0] * qk[i]);
            step[i] = std::polar(1.0, -a * dw * qk[i]);
        }
        CVec gh(nw);
        for (std::size_t j = 0; j < nw; ++j) {
            cplx s(0.0, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                s += cur[i];
                cur[i] *= step[i];
            }
            gh[j] = s * plancherel_density(a * om[j]) * rho_conj[j];
        }
        cplx* row = &pg.values[idx * pg.nb];
        for (std::size_t jb = 0; jb < pg.nb; ++jb) {
            const double b = pg.b_node(jb);
            cplx s(0.0, 0.0);
            for (std::size_t j = 0; j < nw; ++j) s += gh[j] * std::polar(1.0, om[j] * b);
            row[jb] = s * (dw / kTwoPi);
        }
    });
}

void ridgelet_spatial_path(const DiskGrid& f, const Mollifier& rho, HoroParamGrid& pg, const DiskConstants& k,
                           const HoroOptions& opt) {
    DiskSpectrum F = helgason_forward(f, opt.spectrum.nlambda, opt.spectrum.lambda_max, opt.spectrum.nu, k);
    for (std::size_t il = 0; il < F.lambda.size(); ++il)
        for (std::size_t ku = 0; ku < F.u.size(); ++ku) F.values[il * F.u.size() + ku] *= plancherel_density(F.lambda[il]);
    DiskGrid lam = helgason_inverse(F, f, k);
    const std::size_t n = f.size();
    std::vector<cplx> u(pg.nu);
    for (std::size_t ku = 0; ku < pg.nu; ++ku) u[ku] = pg.u_node(ku);
    const RVec q = distance_table(f.z, u);
    const double rcut = rho.support_radius();
    parallel_for(pg.na * pg.nu, [&](std::size_t idx) {
        const std::size_t ia = idx / pg.nu, ku = idx % pg.nu;
        const double a = pg.a_node(ia);
        const double* qk = &q[ku * n];
        CVec wgt(n);
        for (std::size_t i = 0; i < n; ++i) wgt[i] = lam.values[i] * f.w[i] * std::exp(k.varrho * qk[i]);
        cplx* row = &pg.values[idx * pg.nb];
        for (std::size_t jb = 0; jb < pg.nb; ++jb) {
            const double b = pg.b_node(jb);
            cplx s(0.0, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                double arg = a * qk[i] - b;
                if (std::abs(arg) > rcut) continue;
                s += wgt[i] * rho.eval(arg);
            }
            row[jb] = s;
        }
    });
}

}  // namespace

HoroParamGrid horo_ridgelet(const DiskGrid& f, const Mollifier& rho, HoroParamGrid pg, const DiskConstants& k,
                            const HoroOptions& opt) {
    if (rho.order < 2) throw InadmissibleError("horospherical ridgelet needs a mollifier of order >= 2");
    if (opt.method == HoroMethod::Slice)
        ridgelet_slice_path(f, rho, pg, k, opt);
    else
        ridgelet_spatial_path(f, rho, pg, k, opt);
    return pg;
}

HoroResult horo_reconstruct(const DiskGrid& f, const Activation& sigma, const Mollifier& rho,
                            const HoroParamGrid& pg, const DiskConstants& k, const HoroOptions& opt) {
    HoroResult out;
    HoroParamGrid R = horo_ridgelet(f, rho, pg, k, opt);
    out.g = horo_network(R, sigma, f, k);
    ConstantFit fit = fit_constant(out.g.values, f.values, f.w);
    out.c_empirical = fit.c;
    out.residual = fit.residual;
    out.c_printed = k.W / kTwoPi * frequency_pairing(sigma, rho, 1.0);
    out.c_predicted = out.c_printed / kDiskInverseNormalisation;
    out.matches_printed = std::abs(out.c_empirical - out.c_printed) <= 0.1 * std::abs(out.c_printed);
    out.matches_predicted = std::abs(out.c_empirical - out.c_predicted) <= 0.1 * std::abs(out.c_predicted);
    return out;
}

double horocycle_spread(const Activation& sigma, double a0, cplx u0, double b0, double t, const DiskConstants& k,
                        std::size_t count) {
    auto pts = horocycle_points(u0, t, count);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, mean = 0.0;
    for (cplx z : pts) {
        double q = composite_distance(z, u0);
        double v = sigma.eval(a0 * q - b0) * std::exp(k.varrho * q);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += std::abs(v) / count;
    }
    return mean > 0 ? (hi - lo) / mean : hi - lo;
}

}  // namespace ridgekit
