#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ridgekit {

// Monte-Carlo check of one integration identity: `estimate` +- `se` for the
// sampled side, `reference` for the analytic side, z = (estimate - reference) / se.
struct MeasureReport {
    std::string lemma;
    unsigned m = 0;
    unsigned k = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double se = 0.0;
    double reference = 0.0;
    double z = 0.0;
    // second reading of the reference constant, where one exists
    std::string alt_label;
    double alt_reference = 0.0;
    double z_alt = 0.0;
    bool pass = false;  // |z| <= 3
};

// Integrand for all three checks: exp(-|W - W0|_F^2 / 2) with a fixed shift
// W0, so the analytic side is (2 pi)^{mk/2} (or (2 pi)^{m/2} on R^m).

// \int_{M_{m,k}} f dW = 2^{-k} \int f(U P^{1/2}) |det P|^{(m-k-1)/2} dP dU,
// P sampled with exponential diagonal and a uniform off-diagonal on the
// positive-definite range (k <= 2).
MeasureReport mc_validate_polar(unsigned m, unsigned k, std::size_t trials, std::uint64_t seed);

// c_{m,k} \int f = \int f(U b) |b|^{m-k} dU db; the alternative reading uses
// the literal c_{m,k}.
MeasureReport mc_validate_polar_integration(unsigned m, unsigned k, std::size_t trials, std::uint64_t seed);

// dA = 2^{-k} |det D|^{m-k} prod_{i<j} (d_i^2 - d_j^2) dD dV dU, D from sorted
// iid half-normal draws.
MeasureReport mc_validate_svd_measure(unsigned m, unsigned k, std::size_t trials, std::uint64_t seed);

// Every (lemma, m, k) combination exercised by the acceptance suite.
std::vector<MeasureReport> validate_all_measures(std::size_t trials, std::uint64_t seed);

}  // namespace ridgekit
