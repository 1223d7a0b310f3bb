#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ridgekit {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Dense row-major real matrix. Only meant for the small m x k blocks used by
// frames and SVD factors.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    RVec data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Mat identity(std::size_t r, std::size_t c);
    Mat transpose() const;
    Mat operator*(const Mat& o) const;
    RVec apply(const RVec& x) const;             // this * x
    RVec apply_transpose(const RVec& x) const;   // this^T * x
    double max_abs_diff(const Mat& o) const;
    double frobenius() const;
};

}  // namespace ridgekit
