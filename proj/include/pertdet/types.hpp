#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pertdet {

using cplx = std::complex<double>;

/// Dense square complex matrix. Every operator handled by the library (A, K,
/// F, L, H) is represented by one of these.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

}  // namespace pertdet
