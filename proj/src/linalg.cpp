#include "denscls/linalg.hpp"

#include <Eigen/Cholesky>

namespace denscls {

Matrix cholesky_lower(const Matrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("cholesky_lower: matrix must be square");
    assert(a.isApprox(a.transpose(), 1e-10));

    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("cholesky_lower: matrix is not positive definite");
    Matrix l = llt.matrixL();
    if (!(l.diagonal().minCoeff() > 0.0))
        throw NotPositiveDefinite("cholesky_lower: nonpositive pivot");
    return l;
}

}  // namespace denscls
