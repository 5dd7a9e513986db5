#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace denscls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// log(sum(exp(v))) with max-shift. Tolerates -inf entries; exact for a
/// singleton. v must be non-empty.
template <typename Derived>
double logsumexp(const Eigen::DenseBase<Derived>& v) {
    assert(v.size() > 0);
    const double m = v.derived().array().maxCoeff();
    if (std::isinf(m) && m < 0) return m;  // all entries -inf
    if (v.size() == 1) return m;
    const double s = (v.derived().array() - m).exp().sum();
    return m + std::log(s);
}

/// Row-wise logsumexp of an n x k matrix.
template <typename Derived>
Vector logsumexp_rows(const Eigen::DenseBase<Derived>& m) {
    Vector out(m.rows());
    for (Index i = 0; i < m.rows(); ++i) out[i] = logsumexp(m.derived().row(i));
    return out;
}

namespace detail {
inline double pairwise_sum_impl(const double* x, Index n) {
    if (n <= 16) {
        double s = 0.0;
        for (Index i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const Index h = n / 2;
    return pairwise_sum_impl(x, h) + pairwise_sum_impl(x + h, n - h);
}
}  // namespace detail

/// Pairwise (cascade) summation. Order-stable and accurate for long
/// accumulations such as whole-dataset log-likelihoods.
inline double pairwise_sum(const Eigen::Ref<const Vector>& x) {
    if (x.size() == 0) return 0.0;
    if (x.innerStride() == 1) return detail::pairwise_sum_impl(x.data(), x.size());
    Vector tmp = x;
    return detail::pairwise_sum_impl(tmp.data(), tmp.size());
}

/// Column sums of an n x k matrix via pairwise summation per column.
inline Vector pairwise_colwise_sum(const Matrix& m) {
    Vector out(m.cols());
    for (Index j = 0; j < m.cols(); ++j) out[j] = pairwise_sum(m.col(j));
    return out;
}

/// p-th percentile (0..100) with linear interpolation between order
/// statistics, the plotting-position convention h = (n-1) p/100.
inline double percentile(const Eigen::Ref<const Vector>& v, double p) {
    assert(v.size() > 0 && p >= 0.0 && p <= 100.0);
    std::vector<double> s(static_cast<std::size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) s[static_cast<std::size_t>(i)] = v[i];
    std::sort(s.begin(), s.end());
    const double h = static_cast<double>(s.size() - 1) * p / 100.0;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= s.size()) return s.back();
    const double frac = h - static_cast<double>(lo);
    return s[lo] + frac * (s[lo + 1] - s[lo]);
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
/// Throws NotPositiveDefinite when a pivot is not strictly positive,
/// which signals a degenerate covariance needing regularization.
Matrix cholesky_lower(const Matrix& a);

/// log det(A) given the lower Cholesky factor of A.
inline double log_det_from_cholesky(const Matrix& chol_lower) {
    return 2.0 * chol_lower.diagonal().array().log().sum();
}

}  // namespace denscls
