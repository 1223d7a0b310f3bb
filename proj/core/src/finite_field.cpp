#include "ridgekit/finite_field.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ridgekit/errors.hpp"
#include "ridgekit/parallel.hpp"

namespace ridgekit {

bool is_prime(unsigned long p) {
    if (p < 2) return false;
    for (unsigned long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

namespace {

std::size_t ipow(unsigned p, unsigned m) {
    std::size_t n = 1;
    for (unsigned i = 0; i < m; ++i) n *= p;
    return n;
}

void check_field(unsigned p, unsigned m) {
    if (!is_prime(p)) throw InvalidArgument("p not prime: " + std::to_string(p));
    if (m == 0) throw InvalidArgument("dimension m must be >= 1");
}

// digit table: row i holds the base-p digits of i
std::vector<unsigned> digit_table(unsigned p, unsigned m) {
    std::size_t n = ipow(p, m);
    std::vector<unsigned> t(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t v = i;
        for (unsigned a = m; a-- > 0;) {
            t[i * m + a] = static_cast<unsigned>(v % p);
            v /= p;
        }
    }
    return t;
}

// (a . x) mod p for all pairs
std::vector<unsigned> dot_table(unsigned p, unsigned m) {
    auto d = digit_table(p, m);
    std::size_t n = ipow(p, m);
    std::vector<unsigned> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t x = 0; x < n; ++x) {
            unsigned s = 0;
            for (unsigned j = 0; j < m; ++j) s = (s + d[a * m + j] * d[x * m + j]) % p;
            t[a * n + x] = s;
        }
    return t;
}

double norm2(const CVec& v) {
    RVec s(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) s[i] = std::norm(v[i]);
    return std::sqrt(pairwise_sum(s));
}

}  // namespace

FpFunction::FpFunction(unsigned p_, unsigned m_) : p(p_), m(m_) {
    check_field(p, m);
    values.assign(ipow(p, m), cplx(0.0, 0.0));
}

std::vector<unsigned> FpFunction::digits(std::size_t flat) const {
    std::vector<unsigned> d(m);
    for (unsigned a = m; a-- > 0;) {
        d[a] = static_cast<unsigned>(flat % p);
        flat /= p;
    }
    return d;
}

FpParamDistribution::FpParamDistribution(unsigned p_, unsigned m_) : p(p_), m(m_) {
    check_field(p, m);
    values.assign(ipow(p, m + 1), cplx(0.0, 0.0));
}

FpActivation fp_activation(const std::string& name, unsigned p) {
    check_field(p, 1);
    FpActivation s{p, CVec(p, cplx(0.0, 0.0)), name};
    if (name == "delta0") {
        s.values[0] = 1.0;
    } else if (name == "centered-delta0") {
        for (auto& v : s.values) v = -1.0 / p;
        s.values[0] += 1.0;
    } else if (name == "ramp") {
        for (unsigned b = 0; b < p; ++b) s.values[b] = static_cast<double>(b);
    } else if (name.rfind("char", 0) == 0) {
        long j = 0;
        try {
            j = std::stol(name.substr(4));
        } catch (const std::exception&) {
            throw InvalidArgument("bad character activation '" + name + "'");
        }
        for (unsigned b = 0; b < p; ++b) s.values[b] = std::polar(1.0, kTwoPi * double((j * long(b)) % long(p)) / p);
    } else {
        std::ifstream in(name);
        if (!in) throw InvalidArgument("unknown activation '" + name + "'");
        for (unsigned b = 0; b < p; ++b) {
            double re = 0, im = 0;
            if (!(in >> re >> im)) throw InvalidArgument("activation file '" + name + "' needs p entries");
            s.values[b] = cplx(re, im);
        }
    }
    return s;
}

FpFunction fp_dft(const FpFunction& f) {
    check_field(f.p, f.m);
    auto dt = dot_table(f.p, f.m);
    const std::size_t n = f.size();
    FpFunction F(f.p, f.m);
    CVec roots(f.p);
    for (unsigned j = 0; j < f.p; ++j) roots[j] = std::polar(1.0, -kTwoPi * j / f.p);
    parallel_for(n, [&](std::size_t xi) {
        cplx s(0.0, 0.0);
        for (std::size_t x = 0; x < n; ++x) s += f.values[x] * roots[dt[xi * n + x]];
        F.values[xi] = s;
    });
    return F;
}

FpFunction fp_idft(const FpFunction& F) {
    check_field(F.p, F.m);
    auto dt = dot_table(F.p, F.m);
    const std::size_t n = F.size();
    FpFunction f(F.p, F.m);
    CVec roots(F.p);
    for (unsigned j = 0; j < F.p; ++j) roots[j] = std::polar(1.0, kTwoPi * j / F.p);
    parallel_for(n, [&](std::size_t x) {
        cplx s(0.0, 0.0);
        for (std::size_t xi = 0; xi < n; ++xi) s += F.values[xi] * roots[dt[xi * n + x]];
        f.values[x] = s / static_cast<double>(n);
    });
    return f;
}

CVec fp_dft(const FpActivation& s) {
    FpFunction f(s.p, 1);
    f.values = s.values;
    return fp_dft(f).values;
}

FpFunction fp_network(const FpParamDistribution& gamma, const FpActivation& sigma) {
    if (gamma.p != sigma.p) throw InvalidArgument("fp_network: field size mismatch");
    if (gamma.values.size() != ipow(gamma.p, gamma.m + 1)) throw InvalidArgument("fp_network: bad gamma size");
    const unsigned p = gamma.p;
    auto dt = dot_table(p, gamma.m);
    const std::size_t n = ipow(p, gamma.m);
    FpFunction out(p, gamma.m);
    parallel_for(n, [&](std::size_t x) {
        cplx s(0.0, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            unsigned ax = dt[a * n + x];
            for (unsigned b = 0; b < p; ++b) s += gamma.at(a, b) * sigma.values[(ax + p - b) % p];
        }
        out.values[x] = s;
    });
    return out;
}

FpParamDistribution fp_ridgelet(const FpFunction& f, const FpActivation& rho) {
    if (f.p != rho.p) throw InvalidArgument("fp_ridgelet: field size mismatch");
    const unsigned p = f.p;
    auto dt = dot_table(p, f.m);
    const std::size_t n = f.size();
    FpParamDistribution R(p, f.m);
    parallel_for(n * p, [&](std::size_t ab) {
        std::size_t a = ab / p;
        unsigned b = static_cast<unsigned>(ab % p);
        cplx s(0.0, 0.0);
        for (std::size_t x = 0; x < n; ++x) s += f.values[x] * std::conj(rho.values[(dt[a * n + x] + p - b) % p]);
        R.values[ab] = s;
    });
    return R;
}

FpReconstruction fp_reconstruct(const FpFunction& f, const FpActivation& sigma, const FpActivation& rho) {
    if (f.p != sigma.p || f.p != rho.p) throw InvalidArgument("fp_reconstruct: field size mismatch");
    FpFunction g = fp_network(fp_ridgelet(f, rho), sigma);
    ConstantFit fit = fit_constant(g.values, f.values);
    double fn = norm2(f.values);
    if (fn > 0) {
        double scale = 1e-9 * norm2(sigma.values) * norm2(rho.values) * static_cast<double>(f.size());
        if (std::abs(fit.c) < scale) throw InadmissibleError("fp_reconstruct: constant vanishes for " + sigma.name + "/" + rho.name);
    }
    double spread = 0.0;
    if (fn > 0) {
        for (std::size_t x = 0; x < f.size(); ++x) {
            if (f.values[x] == cplx(0.0, 0.0)) {
                spread = std::numeric_limits<double>::quiet_NaN();
                break;
            }
            spread = std::max(spread, std::abs(g.values[x] / f.values[x] - fit.c) / std::abs(fit.c));
        }
    }
    return {std::move(g), fit.c, fn > 0 ? fit.residual : 0.0, spread};
}

FpConstants fp_constant(const FpActivation& sigma, const FpActivation& rho, unsigned m, std::uint64_t seed) {
    if (sigma.p != rho.p) throw InvalidArgument("fp_constant: field size mismatch");
    const unsigned p = sigma.p;
    CVec sh = fp_dft(sigma), rh = fp_dft(rho);
    cplx sum(0.0, 0.0);
    for (unsigned w = 0; w < p; ++w) sum += sh[w] * std::conj(rh[w]);
    FpConstants out{};
    out.theorem_form = sum * std::pow(double(p), -(double(m) - 1.0));
    out.proof_form = sum * std::pow(double(p), double(m) - 1.0);
    out.zero_mode = sh[0] * std::conj(rh[0]);
    Rng rng(seed);
    FpFunction probe = fp_random(p, m, rng);
    FpFunction g = fp_network(fp_ridgelet(probe, rho), sigma);
    ConstantFit fit = fit_constant(g.values, probe.values);
    out.empirical = fit.c;
    out.probe_residual = fit.residual;
    auto close = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    out.matches_theorem = fit.residual <= 1e-9 && close(out.empirical, out.theorem_form);
    out.matches_proof = fit.residual <= 1e-9 && close(out.empirical, out.proof_form);
    return out;
}

FpFunction fp_random(unsigned p, unsigned m, Rng& rng) {
    FpFunction f(p, m);
    std::uniform_real_distribution<double> U(0.5, 1.5);
    std::uniform_real_distribution<double> V(-1.0, 1.0);
    // modulus bounded below so the pointwise ratio test is well conditioned
    for (auto& v : f.values) v = std::polar(U(rng), kPi * V(rng));
    return f;
}

}  // namespace ridgekit
