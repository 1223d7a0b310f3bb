#pragma once

#include <cstdint>
#include <random>

#include "ridgekit/types.hpp"

namespace ridgekit {

using Rng = std::mt19937_64;

struct SVDFactors {
    Mat U;    // m x k, orthonormal columns
    RVec D;   // k singular values, descending
    Mat V;    // k x k orthogonal
};

// Thin SVD of an m x k matrix with m >= k. Throws DegenerateError when
// sigma_k < 1e-12 sigma_1.
SVDFactors svd_small(const Mat& A);

// Orthonormal m x k frame from the invariant measure on V_{m,k}
// (Gram-Schmidt of a standard normal matrix).
Mat sample_stiefel(std::size_t m, std::size_t k, Rng& rng);

// Columns spanning the orthogonal complement of an orthonormal frame U.
// Deterministic: Gram-Schmidt over the standard basis in index order.
Mat orthonormal_completion(const Mat& U);

// max |U^T U - I|.
double orthonormality_error(const Mat& U);

// Least-squares c minimising ||g - c f||_w and the relative residual
// ||g - c f||_w / ||c f||_w. Weights may be empty (all ones).
struct ConstantFit {
    cplx c;
    double residual;
};
ConstantFit fit_constant(const CVec& g, const CVec& f, const RVec& w = {});

// ||a - b||_w / ||b||_w.
double relative_l2(const CVec& a, const CVec& b, const RVec& w = {});

}  // namespace ridgekit
