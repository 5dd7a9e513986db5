#pragma once

#include "denscls/linalg.hpp"

namespace denscls {

/// Column-wise standardization to zero mean / unit variance, fitted on
/// training data only. Zero-variance columns keep stddev 1 so they map to
/// a constant 0 instead of dividing by zero.
struct Scaler {
    Vector means;
    Vector stddevs;

    Index dim() const { return means.size(); }

    static Scaler fit(const Matrix& train);
    static Scaler identity(Index d) {
        return Scaler{Vector::Zero(d), Vector::Ones(d)};
    }

    Matrix apply(const Matrix& data) const;
    Vector apply(const Vector& x) const;
    Matrix invert(const Matrix& data) const;
    Vector invert(const Vector& x) const;
};

inline Scaler Scaler::fit(const Matrix& train) {
    assert(train.rows() > 0);
    Scaler s;
    s.means = train.colwise().mean();
    Matrix centered = train.rowwise() - s.means.transpose();
    s.stddevs = (centered.array().square().colwise().sum() /
                 static_cast<double>(train.rows()))
                    .sqrt();
    for (Index j = 0; j < s.stddevs.size(); ++j)
        if (s.stddevs[j] <= 0.0) s.stddevs[j] = 1.0;
    return s;
}

inline Matrix Scaler::apply(const Matrix& data) const {
    if (data.cols() != dim()) throw DimensionMismatch("Scaler::apply: dimension mismatch");
    return (data.rowwise() - means.transpose()).array().rowwise() /
           stddevs.transpose().array();
}

inline Vector Scaler::apply(const Vector& x) const {
    if (x.size() != dim()) throw DimensionMismatch("Scaler::apply: dimension mismatch");
    return (x - means).cwiseQuotient(stddevs);
}

inline Matrix Scaler::invert(const Matrix& data) const {
    if (data.cols() != dim()) throw DimensionMismatch("Scaler::invert: dimension mismatch");
    return (data.array().rowwise() * stddevs.transpose().array()).rowwise() +
           means.transpose().array();
}

inline Vector Scaler::invert(const Vector& x) const {
    if (x.size() != dim()) throw DimensionMismatch("Scaler::invert: dimension mismatch");
    return x.cwiseProduct(stddevs) + means;
}

}  // namespace denscls
