#include "doctest.h"

#include <cmath>

#include "ridgekit/disk.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/numeric.hpp"

using namespace ridgekit;

TEST_CASE("composite distance") {
    CHECK(composite_distance(0.5, 1.0) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
    CHECK(composite_distance(0.0, cplx(0.0, 1.0)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(composite_distance(cplx(1.0, 0.0), 1.0), DomainError);
    CHECK_THROWS_AS(composite_distance(cplx(0.8, 0.8), 1.0), DomainError);
    const cplx z(0.3, -0.4), u = std::polar(1.0, 2.0);
    for (double th : {0.5, 1.7, -3.0}) {
        const cplx r = std::polar(1.0, th);
        CHECK(composite_distance(r * z, r * u) == doctest::Approx(composite_distance(z, u)).epsilon(1e-13));
    }
}

TEST_CASE("horocycles are level sets") {
    const cplx u = std::polar(1.0, 0.9);
    for (double t : {-1.0, 0.0, 0.6}) {
        const auto pts = horocycle_points(u, t, 16);
        CHECK(pts.size() == 16);
        for (cplx z : pts)
            if (std::norm(z) < 0.999) CHECK(std::abs(composite_distance(z, u) - t) <= 1e-10);
    }
}

TEST_CASE("SPD composite distance") {
    const Mat I = Mat::identity(2, 2);
    for (double v : spd_composite_distance(I, I)) CHECK(std::abs(v) <= 1e-14);
    Mat d(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 1.0;
    RVec h = spd_composite_distance(d, I);
    CHECK(h[0] == doctest::Approx(std::log(2.0)));
    CHECK(std::abs(h[1]) <= 1e-14);
    Mat swap(2, 2);
    swap(0, 1) = swap(1, 0) = 1.0;
    h = spd_composite_distance(d, swap);
    CHECK(std::abs(h[0]) <= 1e-14);
    CHECK(h[1] == doctest::Approx(std::log(2.0)));
    // [[2,1],[1,1]] = nu nu^T with nu = [[1,1],[0,1]]
    Mat x(2, 2);
    x(0, 0) = 2.0;
    x(0, 1) = x(1, 0) = x(1, 1) = 1.0;
    for (double v : spd_composite_distance(x, I)) CHECK(std::abs(v) <= 1e-13);
    Mat bad(2, 2);
    bad(0, 0) = 1.0;
    bad(1, 1) = -1.0;
    CHECK_THROWS_AS(spd_composite_distance(bad, I), DomainError);
    CHECK_THROWS_AS(spd_composite_distance(x, d), InvalidArgument);
}

TEST_CASE("Plancherel density") {
    CHECK(plancherel_density(0.0) == 0.0);
    CHECK(plancherel_density(1.0) == doctest::Approx(0.5 * kPi * std::tanh(0.5 * kPi)));
    CHECK(plancherel_density(-2.0) == doctest::Approx(plancherel_density(2.0)));
    CHECK(plancherel_density(40.0) == doctest::Approx(20.0 * kPi).epsilon(1e-12));
}

TEST_CASE("quadrature weights integrate the hyperbolic area") {
    for (double r : {0.5, 0.9}) {
        DiskGrid g = DiskGrid::make(r, 32, 16);
        double s = 0.0;
        for (double w : g.w) s += w;
        CHECK(std::abs(s - kPi * r * r / (1.0 - r * r)) <= 1e-10 * s);
    }
    CHECK_THROWS(DiskGrid::make(1.0, 8, 8));
}

TEST_CASE("spectrum of a radial bump") {
    DiskGrid f = radial_bump(0.9, 32, 128, 0.243);
    DiskSpectrum F = helgason_forward(f, 32, 20.0, 16, disk_constants_a());
    const std::size_t nl = F.lambda.size(), nu = F.u.size();
    double peak = 0.0;
    for (cplx v : F.values) peak = std::max(peak, std::abs(v));
    double u_spread = 0.0, parity = 0.0;
    for (std::size_t il = 0; il < nl; ++il) {
        for (std::size_t k = 1; k < nu; ++k)
            u_spread = std::max(u_spread, std::abs(F.values[il * nu + k] - F.values[il * nu]));
        parity = std::max(parity, std::abs(F.values[il * nu] - F.values[(nl - 1 - il) * nu]));
    }
    CHECK(u_spread <= 1e-10 * peak);
    // spherical functions are even in lambda; theta needs many nodes once lambda is large
    CHECK(parity <= 1e-7 * peak);
}

TEST_CASE("round trip improves with resolution") {
    DiskConstants k = disk_constants_a();
    double prev = 1e300;
    for (std::size_t n : {16u, 32u, 48u}) {
        DiskGrid f = radial_bump(0.9, n, n, 0.243);
        DiskGrid g = helgason_inverse(helgason_forward(f, 2 * n, 20.0, n, k), f, k);
        const double e = disk_relative_l2(g, f);
        MESSAGE("n=" << n << " round trip " << e);
        CHECK(e < prev);
        prev = e;
    }
    CHECK(prev <= 0.10);
}

TEST_CASE("the multiplier slow path agrees with the spectral grid") {
    DiskConstants k = disk_constants_a();
    DiskGrid f = radial_bump(0.9, 40, 40, 0.243);
    DiskSpectrum F = helgason_forward(f, 96, 20.0, 40, k);
    for (std::size_t il = 0; il < F.lambda.size(); ++il)
        for (std::size_t ku = 0; ku < F.u.size(); ++ku) F.values[il * F.u.size() + ku] *= plancherel_density(F.lambda[il]);
    DiskGrid L = helgason_inverse(F, f, k);
    double peak = 0.0;
    for (cplx v : L.values) peak = std::max(peak, std::abs(v));
    for (std::size_t i : {std::size_t(0), std::size_t(41), std::size_t(400)}) {
        const cplx slow = lambda_multiplier_at(f, f.z[i], k, 96, 20.0, 40);
        CHECK(std::abs(slow - L.values[i]) <= 0.02 * peak);
    }
}

TEST_CASE("horospherical neurons") {
    Activation tanh_a = make_activation("tanh");
    CHECK(horocycle_spread(tanh_a, 1.3, std::polar(1.0, 0.4), 0.2, 0.5, disk_constants_a()) <= 1e-8);
    CHECK(horocycle_spread(make_activation("relu"), -2.0, cplx(0.0, 1.0), -1.0, -0.3, disk_constants_b()) <= 1e-8);

    DiskGrid geom = DiskGrid::make(0.8, 6, 8);
    HoroParamGrid g1(2.0, 3, 4, 2.0, 3), g2 = g1, mix = g1;
    Rng rng(6);
    std::normal_distribution<double> N;
    for (std::size_t i = 0; i < g1.values.size(); ++i) {
        g1.values[i] = N(rng);
        g2.values[i] = cplx(0.0, N(rng));
        mix.values[i] = g1.values[i] + 0.5 * g2.values[i];
    }
    DiskGrid S1 = horo_network(g1, tanh_a, geom, disk_constants_a());
    DiskGrid S2 = horo_network(g2, tanh_a, geom, disk_constants_a());
    DiskGrid S = horo_network(mix, tanh_a, geom, disk_constants_a());
    for (std::size_t i = 0; i < geom.size(); ++i)
        CHECK(std::abs(S.values[i] - (S1.values[i] + 0.5 * S2.values[i])) <= 1e-12);
}

TEST_CASE("ridgelet of a radial function is independent of u") {
    DiskGrid f = radial_bump(0.9, 24, 24, 0.243);
    HoroParamGrid pg(6.0, 6, 8, 6.0, 8);
    HoroParamGrid R = horo_ridgelet(f, gaussian_mollifier(2), pg, disk_constants_a());
    double peak = 0.0, spread = 0.0;
    for (cplx v : R.values) peak = std::max(peak, std::abs(v));
    for (std::size_t ia = 0; ia < pg.na; ++ia)
        for (std::size_t k = 1; k < pg.nu; ++k)
            for (std::size_t j = 0; j < pg.nb; ++j)
                spread = std::max(spread, std::abs(R.values[(ia * pg.nu + k) * pg.nb + j] - R.values[ia * pg.nu * pg.nb + j]));
    CHECK(peak > 0.0);
    CHECK(spread <= 1e-6 * peak);
}
