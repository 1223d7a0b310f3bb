#include "doctest.h"

#include <cmath>
#include <sstream>

#include "ridgekit/activation.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/fft.hpp"
#include "ridgekit/numeric.hpp"
#include "ridgekit/parallel.hpp"
#include "ridgekit/special.hpp"

using namespace ridgekit;

namespace {

GridFunction sampled(std::size_t m, std::size_t n, double half, const std::function<cplx(const RVec&)>& f) {
    GridFunction g = GridFunction::box(m, n, half);
    for (std::size_t i = 0; i < g.size(); ++i) g.values[i] = f(g.point(i));
    return g;
}

double max_abs_diff(const CVec& a, const CVec& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

}  // namespace

TEST_CASE("grid geometry") {
    GridFunction g = GridFunction::box(2, 8, 4.0);
    CHECK(g.size() == 64);
    CHECK(g.values.size() == g.size());
    CHECK(g.spacing[0] == doctest::Approx(1.0));
    RVec p = g.point(8 * 3 + 5);
    CHECK(p[0] == g.origin[0] + 3 * g.spacing[0]);
    CHECK(p[1] == g.origin[1] + 5 * g.spacing[1]);
    CHECK_THROWS_AS(GridFunction({4}, {0.0}, {0.0}), InvalidArgument);
    GridFunction empty;
    CHECK_THROWS_AS(dft(empty), InvalidArgument);
}

TEST_CASE("dft of a Gaussian matches the analytic transform") {
    GridFunction g = sampled(1, 128, 8.0, [](const RVec& x) { return std::exp(-0.5 * x[0] * x[0]); });
    FreqGrid F = dft(g);
    CHECK(F.spacing[0] * g.spacing[0] * 128 == doctest::Approx(kTwoPi).epsilon(1e-15));
    double err = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double xi = F.point(i)[0];
        err = std::max(err, std::abs(F.values[i] - std::sqrt(kTwoPi) * std::exp(-0.5 * xi * xi)));
    }
    CHECK(err <= 1e-8);
}

TEST_CASE("dft of zero, inverse, Parseval and linearity") {
    GridFunction z = GridFunction::box(2, 16, 3.0);
    for (cplx v : dft(z).values) CHECK(v == cplx(0.0, 0.0));

    Rng rng(5);
    std::normal_distribution<double> N;
    GridFunction g = GridFunction::box(2, 32, 5.0), h = g;
    for (auto& v : g.values) v = cplx(N(rng), N(rng));
    for (auto& v : h.values) v = cplx(N(rng), N(rng));
    GridFunction back = idft(dft(g));
    CHECK(relative_l2(back.values, g.values) <= 1e-10);

    FreqGrid G = dft(g);
    double lhs = 0.0, rhs = 0.0;
    for (cplx v : g.values) lhs += std::norm(v);
    for (cplx v : G.values) rhs += std::norm(v);
    lhs *= g.cell_volume();
    rhs *= G.cell_volume() / std::pow(kTwoPi, 2);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);

    const cplx a(0.3, -1.2), b(2.0, 0.5);
    GridFunction mix = g;
    for (std::size_t i = 0; i < mix.size(); ++i) mix.values[i] = a * g.values[i] + b * h.values[i];
    FreqGrid M = dft(mix), H = dft(h);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < M.size(); ++i) {
        err = std::max(err, std::abs(M.values[i] - (a * G.values[i] + b * H.values[i])));
        scale = std::max(scale, std::abs(M.values[i]));
    }
    CHECK(err <= 1e-13 * scale);
}

TEST_CASE("dft handles sizes that are not powers of two") {
    GridFunction g = sampled(1, 90, 8.0, [](const RVec& x) { return std::exp(-0.5 * x[0] * x[0]); });
    FreqGrid F = dft(g);
    const RVec xi = {F.point(50)[0]};
    // independent direct sum
    cplx direct(0.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
        direct += g.values[i] * std::exp(cplx(0.0, -g.point(i)[0] * xi[0]));
    direct *= g.cell_volume();
    CHECK(std::abs(F.values[50] - direct) <= 1e-12);
    CHECK(std::abs(fourier_at(g, xi) - direct) <= 1e-12);
}

TEST_CASE("fractional Laplacian") {
    GridFunction g = sampled(1, 256, 10.0, [](const RVec& x) { return std::exp(-0.5 * x[0] * x[0]); });
    SUBCASE("s = 0 is the identity") {
        CHECK(max_abs_diff(fractional_laplacian(g, 0.0).values, g.values) <= 1e-14);
    }
    SUBCASE("s = 2 is minus the second derivative") {
        GridFunction L = fractional_laplacian(g, 2.0);
        const double h = 1e-3;
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); i += 7) {
            const double x = g.point(i)[0];
            auto f = [](double t) { return std::exp(-0.5 * t * t); };
            const double fd = -(f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            err = std::max(err, std::abs(L.values[i] - fd));
        }
        CHECK(err <= 1e-6);
    }
    SUBCASE("multiplier algebra on a mean-zero function") {
        GridFunction d = sampled(1, 256, 10.0, [](const RVec& x) { return x[0] * std::exp(-0.5 * x[0] * x[0]); });
        GridFunction a = fractional_laplacian(fractional_laplacian(d, 0.7), -0.3);
        GridFunction b = fractional_laplacian(d, 0.4);
        CHECK(relative_l2(a.values, b.values) <= 1e-10);
    }
    SUBCASE("negative powers drop the zero mode") {
        GridFunction c = GridFunction::box(1, 64, 4.0);
        for (auto& v : c.values) v = 1.0;
        for (cplx v : fractional_laplacian(c, -1.0).values) CHECK(std::abs(v) <= 1e-12);
    }
}

TEST_CASE("grid dump round trip") {
    GridFunction g = sampled(2, 4, 1.0, [](const RVec& x) { return cplx(x[0], x[1] * x[1]); });
    std::stringstream ss;
    write_grid(ss, g);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    CHECK(header.rfind("ridgekit-grid v1 m=2 dims=4,4", 0) == 0);
    GridFunction r = read_grid(ss);
    CHECK(r.dims == g.dims);
    CHECK(max_abs_diff(r.values, g.values) <= 1e-15);
}

TEST_CASE("small SVD") {
    SUBCASE("identity columns") {
        SVDFactors s = svd_small(Mat::identity(4, 2));
        CHECK(s.D[0] == doctest::Approx(1.0));
        CHECK(s.D[1] == doctest::Approx(1.0));
    }
    SUBCASE("padded diagonal") {
        Mat A(3, 2);
        A(0, 0) = 2.0;
        A(1, 1) = 3.0;
        SVDFactors s = svd_small(A);
        CHECK(s.D[0] == doctest::Approx(3.0));
        CHECK(s.D[1] == doctest::Approx(2.0));
    }
    SUBCASE("random matrices are reproduced") {
        Rng rng(11);
        std::normal_distribution<double> N;
        for (int t = 0; t < 20; ++t) {
            Mat A(4, 2);
            for (double& v : A.data) v = N(rng);
            SVDFactors s = svd_small(A);
            CHECK(orthonormality_error(s.U) <= 1e-12);
            CHECK(orthonormality_error(s.V) <= 1e-12);
            CHECK(s.D[0] >= s.D[1]);
            CHECK(s.D[1] > 0.0);
            Mat UD = s.U;
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < 2; ++j) UD(i, j) *= s.D[j];
            CHECK(UD.operator*(s.V.transpose()).max_abs_diff(A) <= 1e-10 * A.frobenius());
        }
    }
    SUBCASE("rank-deficient input") {
        Mat A(3, 2);
        A(0, 0) = 1.0;
        A(0, 1) = 2.0;
        CHECK_THROWS_AS(svd_small(A), DegenerateError);
    }
}

TEST_CASE("Stiefel sampling") {
    Rng rng(3);
    SUBCASE("orthonormal draws") {
        for (int t = 0; t < 50; ++t) CHECK(orthonormality_error(sample_stiefel(5, 3, rng)) <= 1e-12);
    }
    SUBCASE("k = m = 1 gives a fair sign") {
        int plus = 0;
        const int n = 4000;
        for (int t = 0; t < n; ++t) {
            Mat u = sample_stiefel(1, 1, rng);
            CHECK(std::abs(std::abs(u(0, 0)) - 1.0) <= 1e-15);
            plus += u(0, 0) > 0;
        }
        CHECK(std::abs(plus - n / 2.0) <= 3.0 * std::sqrt(n / 4.0));
    }
    SUBCASE("second moment is isotropic") {
        const int n = 10000;
        double mean[3][3] = {}, sq[3][3] = {};
        for (int t = 0; t < n; ++t) {
            Mat u = sample_stiefel(3, 1, rng);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double v = u(i, 0) * u(j, 0);
                    mean[i][j] += v;
                    sq[i][j] += v * v;
                }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double mu = mean[i][j] / n;
                const double se = std::sqrt((sq[i][j] / n - mu * mu) / n);
                CHECK(std::abs(mu - (i == j ? 1.0 / 3.0 : 0.0)) <= 3.0 * se);
            }
    }
    SUBCASE("orthonormal completion") {
        Mat U = sample_stiefel(4, 2, rng);
        Mat C = orthonormal_completion(U);
        CHECK(C.cols == 2);
        CHECK(orthonormality_error(C) <= 1e-12);
        CHECK((U.transpose() * C).frobenius() <= 1e-12);
    }
}

TEST_CASE("Gaussian mollifier") {
    Mollifier r0 = gaussian_mollifier(0);
    CHECK(r0.eval(0.0) == doctest::Approx(1.0 / std::sqrt(kTwoPi)));
    CHECK(std::abs(r0.hat(1.0) - std::exp(-0.5)) <= 1e-15);
    Mollifier r2 = gaussian_mollifier(2);
    CHECK(std::abs(r2.hat(0.0)) == 0.0);
    CHECK(std::abs((r2.hat(1e-4) - r2.hat(-1e-4)) / 2e-4) <= 1e-6);
    for (unsigned order : {0u, 1u, 2u, 3u}) {
        Mollifier r = gaussian_mollifier(order);
        GridFunction g = sampled(1, 256, 8.0, [&](const RVec& x) { return r.eval(x[0]); });
        FreqGrid F = dft(g);
        double err = 0.0;
        for (std::size_t i = 0; i < F.size(); ++i) err = std::max(err, std::abs(F.values[i] - r.hat(F.point(i)[0])));
        CHECK(err <= 1e-8);
    }
}

TEST_CASE("special functions") {
    auto [x, w] = gauss_legendre(8, -1.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 15);
    CHECK(s == doctest::Approx((std::pow(2.0, 16) - 1.0) / 16.0).epsilon(1e-13));
    CHECK(sphere_area(2) == doctest::Approx(kTwoPi));
    CHECK(sphere_area(3) == doctest::Approx(4.0 * kPi));
    CHECK(stiefel_volume(2, 1) == doctest::Approx(kTwoPi));
    CHECK(stiefel_volume(3, 1) == doctest::Approx(4.0 * kPi));
    // V_{3,2} = SO(3) double covered: 8 pi^2
    CHECK(stiefel_volume(3, 2) == doctest::Approx(8.0 * kPi * kPi));
    CHECK(polar_constant(2, 1) == doctest::Approx(2.0));
    CHECK(hermite_he(3, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("parallel reductions do not depend on the thread count") {
    RVec x(100003);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.37 * i) * 1e-3 + 1.0 / (1.0 + i);
    const double ref = pairwise_sum(x);
    std::vector<double> out1(5000), out4(5000);
    set_thread_count(1);
    parallel_for(out1.size(), [&](std::size_t i) { out1[i] = pairwise_sum(x.data() + i, 20); });
    set_thread_count(4);
    parallel_for(out4.size(), [&](std::size_t i) { out4[i] = pairwise_sum(x.data() + i, 20); });
    set_thread_count(0);
    CHECK(out1 == out4);
    CHECK(pairwise_sum(x) == ref);
}

TEST_CASE("least-squares constant") {
    CVec f = {1.0, cplx(0.0, 2.0), -3.0};
    CVec g;
    for (cplx v : f) g.push_back(cplx(2.0, -1.0) * v);
    ConstantFit fit = fit_constant(g, f);
    CHECK(std::abs(fit.c - cplx(2.0, -1.0)) <= 1e-15);
    CHECK(fit.residual <= 1e-15);
}
