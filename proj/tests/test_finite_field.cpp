#include "doctest.h"

#include <cmath>

#include "ridgekit/errors.hpp"
#include "ridgekit/finite_field.hpp"

using namespace ridgekit;

namespace {

std::vector<unsigned> digits_of(std::size_t flat, unsigned p, unsigned m) {
    std::vector<unsigned> d(m);
    for (unsigned i = m; i-- > 0;) {
        d[i] = flat % p;
        flat /= p;
    }
    return d;
}

unsigned dot(const std::vector<unsigned>& a, const std::vector<unsigned>& x, unsigned p) {
    unsigned s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = (s + a[i] * x[i]) % p;
    return s;
}

// S[R[f; rho]](x) by the literal quadruple sum.
CVec brute_force(const FpFunction& f, const FpActivation& sigma, const FpActivation& rho) {
    const unsigned p = f.p, m = f.m;
    CVec g(f.size(), 0.0);
    for (std::size_t x = 0; x < f.size(); ++x)
        for (std::size_t a = 0; a < f.size(); ++a)
            for (unsigned b = 0; b < p; ++b) {
                cplx r(0.0, 0.0);
                for (std::size_t y = 0; y < f.size(); ++y)
                    r += f.values[y] * std::conj(rho.values[(dot(digits_of(a, p, m), digits_of(y, p, m), p) + p - b) % p]);
                g[x] += r * sigma.values[(dot(digits_of(a, p, m), digits_of(x, p, m), p) + p - b) % p];
            }
    return g;
}

CVec literal_dft(const CVec& s, unsigned p) {
    CVec out(p);
    for (unsigned w = 0; w < p; ++w)
        for (unsigned b = 0; b < p; ++b) out[w] += s[b] * std::polar(1.0, -kTwoPi * w * b / p);
    return out;
}

double max_diff(const CVec& a, const CVec& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

}  // namespace

TEST_CASE("primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(7));
    CHECK(is_prime(9973));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(4));
    CHECK_FALSE(is_prime(91));
    CHECK_THROWS_AS(FpFunction(4, 1), InvalidArgument);
}

TEST_CASE("finite-field DFT") {
    SUBCASE("delta and constant") {
        FpFunction d(5, 2), one(5, 2);
        d.values[0] = 1.0;
        for (auto& v : one.values) v = 1.0;
        for (cplx v : fp_dft(d).values) CHECK(std::abs(v - 1.0) <= 1e-12);
        FpFunction O = fp_dft(one);
        CHECK(std::abs(O.values[0] - 25.0) <= 1e-12);
        for (std::size_t i = 1; i < O.size(); ++i) CHECK(std::abs(O.values[i]) <= 1e-12);
    }
    SUBCASE("p = 3 against the literal sum") {
        FpFunction f(3, 1);
        f.values = {1.0, 2.0, 3.0};
        FpFunction F = fp_dft(f);
        CHECK(std::abs(F.values[0] - 6.0) <= 1e-12);
        CHECK(max_diff(F.values, literal_dft(f.values, 3)) <= 1e-12);
    }
    SUBCASE("round trip") {
        Rng rng(1);
        for (unsigned p : {2u, 3u, 5u, 7u})
            for (unsigned m : {1u, 2u}) {
                FpFunction f = fp_random(p, m, rng);
                CHECK(max_diff(fp_idft(fp_dft(f)).values, f.values) <= 1e-12 * std::sqrt(double(f.size())));
            }
    }
}

TEST_CASE("activations") {
    FpActivation c = fp_activation("char2", 5);
    for (unsigned b = 0; b < 5; ++b) CHECK(std::abs(c.values[b] - std::polar(1.0, kTwoPi * 2 * b / 5)) <= 1e-15);
    FpActivation r = fp_activation("ramp", 5);
    CHECK(r.values[4] == cplx(4.0, 0.0));
    FpActivation d = fp_activation("delta0", 3);
    CHECK(d.values == CVec{1.0, 0.0, 0.0});
    CHECK_THROWS_AS(fp_activation("nonsense", 3), InvalidArgument);
}

TEST_CASE("network") {
    const unsigned p = 3;
    FpActivation sigma = fp_activation("ramp", p);
    SUBCASE("zero parameters") {
        FpParamDistribution g(p, 2);
        for (cplx v : fp_network(g, sigma).values) CHECK(v == cplx(0.0, 0.0));
    }
    SUBCASE("single neuron") {
        FpParamDistribution g(p, 2);
        const std::size_t a0 = 5;  // digits (1, 2)
        g.at(a0, 1) = 1.0;
        FpFunction S = fp_network(g, sigma);
        for (std::size_t x = 0; x < S.size(); ++x) {
            const unsigned arg = (dot(digits_of(a0, p, 2), digits_of(x, p, 2), p) + p - 1) % p;
            CHECK(S.values[x] == sigma.values[arg]);
        }
    }
    SUBCASE("linear in the parameters") {
        Rng rng(2);
        std::normal_distribution<double> N;
        FpParamDistribution g1(p, 1), g2(p, 1), mix(p, 1);
        const cplx a(0.5, 1.5), b(-2.0, 0.25);
        for (std::size_t i = 0; i < g1.values.size(); ++i) {
            g1.values[i] = cplx(N(rng), N(rng));
            g2.values[i] = cplx(N(rng), N(rng));
            mix.values[i] = a * g1.values[i] + b * g2.values[i];
        }
        FpFunction S1 = fp_network(g1, sigma), S2 = fp_network(g2, sigma), S = fp_network(mix, sigma);
        for (std::size_t x = 0; x < S.size(); ++x)
            CHECK(std::abs(S.values[x] - (a * S1.values[x] + b * S2.values[x])) <= 1e-12);
    }
    SUBCASE("field size mismatch") {
        CHECK_THROWS_AS(fp_network(FpParamDistribution(5, 1), sigma), InvalidArgument);
    }
}

TEST_CASE("ridgelet transform") {
    FpActivation delta = fp_activation("delta0", 3);
    SUBCASE("delta0 collapses to the marginal sum") {
        FpFunction f(3, 1);
        f.values = {1.0, 0.0, 0.0};
        FpParamDistribution R = fp_ridgelet(f, delta);
        for (unsigned a = 0; a < 3; ++a)
            for (unsigned b = 0; b < 3; ++b) CHECK(R.at(a, b) == cplx(b == 0 ? 1.0 : 0.0, 0.0));
    }
    SUBCASE("m = 2 marginal sums") {
        Rng rng(4);
        FpFunction f = fp_random(3, 2, rng);
        FpParamDistribution R = fp_ridgelet(f, delta);
        for (std::size_t a = 0; a < 9; ++a)
            for (unsigned b = 0; b < 3; ++b) {
                cplx s(0.0, 0.0);
                for (std::size_t x = 0; x < 9; ++x)
                    if (dot(digits_of(a, 3, 2), digits_of(x, 3, 2), 3) == b) s += f.values[x];
                CHECK(std::abs(R.at(a, b) - s) <= 1e-13);
            }
    }
    SUBCASE("zero input") {
        for (cplx v : fp_ridgelet(FpFunction(5, 2), fp_activation("delta0", 5)).values)
            CHECK(v == cplx(0.0, 0.0));
    }
}

TEST_CASE("library composition equals the brute-force sum") {
    Rng rng(9);
    for (unsigned p : {3u, 5u})
        for (unsigned m : {1u, 2u}) {
            FpFunction f = fp_random(p, m, rng);
            FpActivation s = fp_activation("ramp", p), r = fp_activation("char1", p);
            FpFunction g = fp_network(fp_ridgelet(f, r), s);
            CHECK(max_diff(g.values, brute_force(f, s, r)) <= 1e-10);
        }
}

// Summing characters over b and a gives
//   g = p^{m-1} (K f + Z sum_y f(y)),  K = sum_{w != 0} s#(w) conj(r#(w)),  Z = s#(0) conj(r#(0)).
TEST_CASE("exact identity including the zero mode") {
    Rng rng(21);
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"delta0", "delta0"}, {"ramp", "ramp"}, {"char1", "char1"}, {"ramp", "char1"}, {"centered-delta0", "ramp"}};
    for (unsigned p : {3u, 5u})
        for (unsigned m : {1u, 2u})
            for (const auto& [sn, rn] : pairs) {
                FpActivation s = fp_activation(sn, p), r = fp_activation(rn, p);
                CVec S = literal_dft(s.values, p), R = literal_dft(r.values, p);
                cplx K(0.0, 0.0);
                for (unsigned w = 1; w < p; ++w) K += S[w] * std::conj(R[w]);
                const cplx Z = S[0] * std::conj(R[0]);
                FpFunction f = fp_random(p, m, rng);
                cplx total(0.0, 0.0);
                for (cplx v : f.values) total += v;
                const double scale = std::pow(double(p), m - 1.0);
                FpFunction g = fp_network(fp_ridgelet(f, r), s);
                for (std::size_t x = 0; x < f.size(); ++x)
                    CHECK(std::abs(g.values[x] - scale * (K * f.values[x] + Z * total)) <=
                          1e-10 * (1.0 + std::abs(g.values[x])));
            }
}

TEST_CASE("reconstruction constants") {
    SUBCASE("p = 3, m = 1: both printed forms coincide") {
        FpConstants k = fp_constant(fp_activation("char1", 3), fp_activation("char1", 3), 1);
        CHECK(std::abs(k.theorem_form - k.proof_form) <= 1e-12);
        CHECK(k.matches_theorem);
        CHECK(k.matches_proof);
    }
    SUBCASE("sigma = rho gives real nonnegative candidates") {
        for (const char* n : {"ramp", "delta0", "char2"}) {
            FpActivation a = fp_activation(n, 5);
            FpConstants k = fp_constant(a, a, 2);
            CHECK(k.theorem_form.real() >= 0.0);
            CHECK(std::abs(k.theorem_form.imag()) <= 1e-12 * (1.0 + std::abs(k.theorem_form)));
            CHECK(std::abs(k.proof_form.imag()) <= 1e-12 * (1.0 + std::abs(k.proof_form)));
        }
    }
    SUBCASE("admissible pairs at m = 2 follow the proof form") {
        FpActivation s = fp_activation("char1", 5), r = fp_activation("delta0", 5);
        FpConstants k = fp_constant(s, r, 2, 3);
        CHECK(std::abs(k.zero_mode) <= 1e-12);
        CHECK(k.matches_proof);
        CHECK_FALSE(k.matches_theorem);
        // brute-force ratio at one random probe
        Rng rng(3);
        FpFunction f = fp_random(5, 2, rng);
        CVec g = brute_force(f, s, r);
        CHECK(std::abs(g[7] / f.values[7] - k.proof_form) <= 1e-9 * std::abs(k.proof_form));
    }
    SUBCASE("delta0 with delta0 at p = 5, m = 2 is not a multiple of f") {
        FpActivation d = fp_activation("delta0", 5);
        FpConstants k = fp_constant(d, d, 2, 1);
        CHECK(std::abs(k.zero_mode - 1.0) <= 1e-12);
        CHECK(k.probe_residual > 0.1);
    }
}

TEST_CASE("reconstruction over the admissible battery") {
    const std::vector<std::pair<std::string, std::string>> battery = {
        {"char1", "char1"}, {"char1", "delta0"}, {"delta0", "char1"}, {"ramp", "char1"},
        {"char2", "ramp"},  {"centered-delta0", "delta0"}, {"delta0", "centered-delta0"}};
    Rng rng(0);
    for (unsigned p : {3u, 5u, 7u})
        for (unsigned m : {1u, 2u})
            for (const auto& [sn, rn] : battery) {
                FpActivation s = fp_activation(sn, p), r = fp_activation(rn, p);
                for (int t = 0; t < 20; ++t) {
                    FpReconstruction rec = fp_reconstruct(fp_random(p, m, rng), s, r);
                    CHECK(rec.residual <= 1e-9);
                    CHECK(rec.ratio_spread <= 1e-9);
                }
            }
}

TEST_CASE("reconstruction edge cases") {
    FpActivation s = fp_activation("char1", 5), r = fp_activation("char2", 5);
    Rng rng(1);
    SUBCASE("zero target") {
        FpReconstruction rec = fp_reconstruct(FpFunction(5, 1), fp_activation("char1", 5), fp_activation("char1", 5));
        CHECK(rec.residual == 0.0);
        for (cplx v : rec.g.values) CHECK(v == cplx(0.0, 0.0));
    }
    SUBCASE("disjoint spectra are inadmissible") {
        CHECK_THROWS_AS(fp_reconstruct(fp_random(5, 1, rng), s, r), InadmissibleError);
    }
    SUBCASE("character against delta0 at p = 5, m = 2") {
        FpReconstruction rec = fp_reconstruct(fp_random(5, 2, rng), s, fp_activation("delta0", 5));
        CHECK(rec.residual <= 1e-9);
    }
}
