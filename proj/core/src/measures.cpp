#include "ridgekit/measures.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <algorithm>
#include <functional>
#include <random>

#include "ridgekit/errors.hpp"
#include "ridgekit/numeric.hpp"
#include "ridgekit/parallel.hpp"
#include "ridgekit/special.hpp"

namespace ridgekit {

namespace {

constexpr std::size_t kChunk = 4096;

struct Moments {
    double s1 = 0.0;
    double s2 = 0.0;
};

// Splits the trials into fixed chunks with their own seeded stream; the sums
// are combined in chunk order so the result does not depend on threading.
template <class Sampler>
std::pair<double, double> sample_mean(std::size_t trials, std::uint64_t seed, unsigned tag, Sampler draw) {
    if (trials < 2) throw InvalidArgument("Monte-Carlo validation needs at least 2 trials");
    const std::size_t nchunks = (trials + kChunk - 1) / kChunk;
    std::vector<Moments> parts(nchunks);
    parallel_for(nchunks, [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), tag};
        Rng rng(seq);
        const std::size_t n = std::min(kChunk, trials - c * kChunk);
        Moments mo;
        for (std::size_t i = 0; i < n; ++i) {
            double w = draw(rng);
            mo.s1 += w;
            mo.s2 += w * w;
        }
        parts[c] = mo;
    });
    RVec s1(nchunks), s2(nchunks);
    for (std::size_t c = 0; c < nchunks; ++c) {
        s1[c] = parts[c].s1;
        s2[c] = parts[c].s2;
    }
    const double n = static_cast<double>(trials);
    const double mean = pairwise_sum(s1) / n;
    const double var = std::max(0.0, (pairwise_sum(s2) / n - mean * mean) * n / (n - 1.0));
    return {mean, std::sqrt(var / n)};
}

Mat shift_matrix(unsigned m, unsigned k) {
    Mat W0(m, k);
    for (unsigned i = 0; i < m; ++i)
        for (unsigned j = 0; j < k; ++j) W0(i, j) = 0.25 + 0.1 * i - 0.15 * j;
    return W0;
}

double shifted_gaussian(const Mat& W, const Mat& W0) {
    double s = 0.0;
    for (std::size_t i = 0; i < W.data.size(); ++i) s += (W.data[i] - W0.data[i]) * (W.data[i] - W0.data[i]);
    return std::exp(-0.5 * s);
}

MeasureReport finish(MeasureReport r, std::pair<double, double> est) {
    r.estimate = est.first;
    r.se = est.second;
    r.z = (r.estimate - r.reference) / r.se;
    if (!r.alt_label.empty()) r.z_alt = (r.estimate - r.alt_reference) / r.se;
    r.pass = std::abs(r.z) <= 3.0;
    return r;
}

void check_mk(unsigned m, unsigned k) {
    if (k == 0 || k > m) throw InvalidArgument("measure validation needs 1 <= k <= m");
}

}  // namespace

MeasureReport mc_validate_polar(unsigned m, unsigned k, std::size_t trials, std::uint64_t seed) {
    check_mk(m, k);
    if (k > 2) throw InvalidArgument("polar-decomposition validator supports k <= 2");
    const Mat W0 = shift_matrix(m, k);
    const double sig = stiefel_volume(m, k);
    const double alpha = 0.5 * (static_cast<double>(m) - k - 1.0);
    const double rate = 0.35;
    auto draw = [&](Rng& rng) {
        std::exponential_distribution<double> ex(rate);
        std::uniform_real_distribution<double> un(-1.0, 1.0);
        Mat U = sample_stiefel(m, k, rng);
        Eigen::MatrixXd P(k, k);
        double q = 1.0;
        for (unsigned i = 0; i < k; ++i) {
            P(i, i) = ex(rng);
            q *= rate * std::exp(-rate * P(i, i));
        }
        if (k == 2) {
            const double lim = std::sqrt(P(0, 0) * P(1, 1));
            P(0, 1) = P(1, 0) = lim * un(rng);
            q /= 2.0 * lim;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
        const Eigen::VectorXd ev = es.eigenvalues();
        if (ev.minCoeff() <= 0.0) return 0.0;
        const Eigen::MatrixXd S = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
        Mat Sh(k, k);
        for (unsigned i = 0; i < k; ++i)
            for (unsigned j = 0; j < k; ++j) Sh(i, j) = S(i, j);
        const double det = ev.prod();
        return std::pow(0.5, k) * sig * shifted_gaussian(U * Sh, W0) * std::pow(det, alpha) / q;
    };
    MeasureReport r;
    r.lemma = "polar-decomposition";
    r.m = m;
    r.k = k;
    r.trials = trials;
    r.seed = seed;
    r.reference = std::pow(kTwoPi, 0.5 * m * k);
    return finish(r, sample_mean(trials, seed, 1, draw));
}

MeasureReport mc_validate_polar_integration(unsigned m, unsigned k, std::size_t trials, std::uint64_t seed) {
    check_mk(m, k);
    const Mat x0 = shift_matrix(m, 1);
    const double sig = stiefel_volume(m, k);
    const double s = 1.3;
    const unsigned d = m - k;
    auto draw = [&](Rng& rng) {
        std::normal_distribution<double> N(0.0, s);
        Mat U = sample_stiefel(m, k, rng);
        Mat b(k, 1);
        double r2 = 0.0;
        for (unsigned i = 0; i < k; ++i) {
            b(i, 0) = N(rng);
            r2 += b(i, 0) * b(i, 0);
        }
        const double q = std::exp(-0.5 * r2 / (s * s)) / std::pow(kTwoPi * s * s, 0.5 * k);
        return sig * shifted_gaussian(U * b, x0) * std::pow(r2, 0.5 * d) / q;
    };
    MeasureReport r;
    r.lemma = "polar-integration";
    r.m = m;
    r.k = k;
    r.trials = trials;
    r.seed = seed;
    const double mass = std::pow(kTwoPi, 0.5 * m);
    r.reference = polar_constant(m, k) * mass;
    r.alt_label = "literal c_mk";
    r.alt_reference = polar_constant_literal(m, k) * mass;
    return finish(r, sample_mean(trials, seed, 2, draw));
}

MeasureReport mc_validate_svd_measure(unsigned m, unsigned k, std::size_t trials, std::uint64_t seed) {
    check_mk(m, k);
    const Mat W0 = shift_matrix(m, k);
    const double mass = stiefel_volume(m, k) * stiefel_volume(k, k);
    const double s = 1.5;
    const unsigned d = m - k;
    double kfact = 1.0;
    for (unsigned i = 2; i <= k; ++i) kfact *= i;
    auto draw = [&](Rng& rng) {
        std::normal_distribution<double> N(0.0, s);
        Mat U = sample_stiefel(m, k, rng);
        Mat V = sample_stiefel(k, k, rng);
        RVec D(k);
        double q = kfact;
        for (unsigned i = 0; i < k; ++i) {
            D[i] = std::abs(N(rng));
            q *= 2.0 * std::exp(-0.5 * D[i] * D[i] / (s * s)) / std::sqrt(kTwoPi * s * s);
        }
        std::sort(D.begin(), D.end(), std::greater<double>());
        double det = 1.0, vd = 1.0;
        for (unsigned i = 0; i < k; ++i) {
            det *= D[i];
            for (unsigned j = i + 1; j < k; ++j) vd *= D[i] * D[i] - D[j] * D[j];
        }
        Mat UD = U;
        for (unsigned i = 0; i < m; ++i)
            for (unsigned j = 0; j < k; ++j) UD(i, j) *= D[j];
        return std::pow(0.5, k) * mass * shifted_gaussian(UD * V.transpose(), W0) * std::pow(det, d) * vd / q;
    };
    MeasureReport r;
    r.lemma = "svd-measure";
    r.m = m;
    r.k = k;
    r.trials = trials;
    r.seed = seed;
    r.reference = std::pow(kTwoPi, 0.5 * m * k);
    return finish(r, sample_mean(trials, seed, 3, draw));
}

std::vector<MeasureReport> validate_all_measures(std::size_t trials, std::uint64_t seed) {
    std::vector<MeasureReport> out;
    for (auto [m, k] : {std::pair{2u, 1u}, {3u, 2u}}) out.push_back(mc_validate_polar(m, k, trials, seed));
    for (auto [m, k] : {std::pair{2u, 1u}, {3u, 1u}, {3u, 2u}})
        out.push_back(mc_validate_polar_integration(m, k, trials, seed));
    for (auto [m, k] : {std::pair{2u, 1u}, {3u, 2u}, {4u, 2u}}) out.push_back(mc_validate_svd_measure(m, k, trials, seed));
    return out;
}

}  // namespace ridgekit
