#include "ridgekit/numeric.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "ridgekit/errors.hpp"
#include "ridgekit/parallel.hpp"

namespace ridgekit {

Mat Mat::identity(std::size_t r, std::size_t c) {
    Mat I(r, c);
    for (std::size_t i = 0; i < std::min(r, c); ++i) I(i, i) = 1.0;
    return I;
}

Mat Mat::transpose() const {
    Mat T(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) T(j, i) = (*this)(i, j);
    return T;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols != o.rows) throw InvalidArgument("matrix shape mismatch");
    Mat P(rows, o.cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t l = 0; l < cols; ++l) {
            double a = (*this)(i, l);
            for (std::size_t j = 0; j < o.cols; ++j) P(i, j) += a * o(l, j);
        }
    return P;
}

RVec Mat::apply(const RVec& x) const {
    if (x.size() != cols) throw InvalidArgument("matrix-vector shape mismatch");
    RVec y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

RVec Mat::apply_transpose(const RVec& x) const {
    if (x.size() != rows) throw InvalidArgument("matrix-vector shape mismatch");
    RVec y(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) y[j] += (*this)(i, j) * x[i];
    return y;
}

double Mat::max_abs_diff(const Mat& o) const {
    if (rows != o.rows || cols != o.cols) throw InvalidArgument("matrix shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) m = std::max(m, std::abs(data[i] - o.data[i]));
    return m;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
}

SVDFactors svd_small(const Mat& A) {
    if (A.rows < A.cols || A.cols == 0) throw InvalidArgument("svd_small: need m >= k >= 1");
    Eigen::MatrixXd M(A.rows, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) M(i, j) = A(i, j);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const std::size_t k = A.cols;
    if (!(s(0) > 0.0) || s(k - 1) < 1e-12 * s(0)) throw DegenerateError("svd_small: rank-deficient matrix");
    SVDFactors out{Mat(A.rows, k), RVec(k), Mat(k, k)};
    Eigen::MatrixXd U = svd.matrixU(), V = svd.matrixV();
    for (std::size_t j = 0; j < k; ++j) {
        // fix the sign so the largest-magnitude entry of each U column is positive
        Eigen::Index imax = 0;
        U.col(j).cwiseAbs().maxCoeff(&imax);
        if (U(imax, j) < 0) {
            U.col(j) *= -1.0;
            V.col(j) *= -1.0;
        }
        out.D[j] = s(j);
    }
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < k; ++j) out.U(i, j) = U(i, j);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out.V(i, j) = V(i, j);
    return out;
}

namespace {
// Modified Gram-Schmidt with one re-orthogonalisation pass. Returns false if a
// column collapses.
bool gram_schmidt_column(Mat& Q, std::size_t j, RVec v) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t l = 0; l < j; ++l) {
            double d = 0.0;
            for (std::size_t i = 0; i < Q.rows; ++i) d += Q(i, l) * v[i];
            for (std::size_t i = 0; i < Q.rows; ++i) v[i] -= d * Q(i, l);
        }
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n < 1e-10) return false;
    for (std::size_t i = 0; i < Q.rows; ++i) Q(i, j) = v[i] / n;
    return true;
}
}  // namespace

Mat sample_stiefel(std::size_t m, std::size_t k, Rng& rng) {
    if (k == 0 || k > m) throw InvalidArgument("sample_stiefel: need 1 <= k <= m");
    std::normal_distribution<double> N(0.0, 1.0);
    Mat U(m, k);
    for (std::size_t j = 0; j < k; ++j) {
        for (;;) {
            RVec v(m);
            for (auto& x : v) x = N(rng);
            if (gram_schmidt_column(U, j, v)) break;
        }
    }
    return U;
}

Mat orthonormal_completion(const Mat& U) {
    const std::size_t m = U.rows, k = U.cols;
    Mat Q(m, m);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m; ++i) Q(i, j) = U(i, j);
    std::size_t filled = k;
    for (std::size_t e = 0; e < m && filled < m; ++e) {
        RVec v(m, 0.0);
        v[e] = 1.0;
        if (gram_schmidt_column(Q, filled, v)) ++filled;
    }
    Mat C(m, m - k);
    for (std::size_t j = 0; j < m - k; ++j)
        for (std::size_t i = 0; i < m; ++i) C(i, j) = Q(i, k + j);
    return C;
}

double orthonormality_error(const Mat& U) {
    Mat G = U.transpose() * U;
    return G.max_abs_diff(Mat::identity(U.cols, U.cols));
}

ConstantFit fit_constant(const CVec& g, const CVec& f, const RVec& w) {
    if (g.size() != f.size() || (!w.empty() && w.size() != f.size()))
        throw InvalidArgument("fit_constant: size mismatch");
    const std::size_t n = f.size();
    RVec nr(n), ni(n), dd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        cplx t = std::conj(f[i]) * g[i] * wi;
        nr[i] = t.real();
        ni[i] = t.imag();
        dd[i] = std::norm(f[i]) * wi;
    }
    double den = pairwise_sum(dd);
    if (den == 0.0) return {cplx(0.0, 0.0), 0.0};
    cplx c(pairwise_sum(nr) / den, pairwise_sum(ni) / den);
    RVec e(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        e[i] = std::norm(g[i] - c * f[i]) * wi;
        r[i] = std::norm(c * f[i]) * wi;
    }
    double rn = pairwise_sum(r);
    double res = rn > 0 ? std::sqrt(pairwise_sum(e) / rn) : std::sqrt(pairwise_sum(e));
    return {c, res};
}

double relative_l2(const CVec& a, const CVec& b, const RVec& w) {
    if (a.size() != b.size() || (!w.empty() && w.size() != a.size()))
        throw InvalidArgument("relative_l2: size mismatch");
    RVec e(a.size()), r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        e[i] = std::norm(a[i] - b[i]) * wi;
        r[i] = std::norm(b[i]) * wi;
    }
    double rn = pairwise_sum(r);
    return rn > 0 ? std::sqrt(pairwise_sum(e) / rn) : std::sqrt(pairwise_sum(e));
}

}  // namespace ridgekit
