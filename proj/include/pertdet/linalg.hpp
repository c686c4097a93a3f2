#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pertdet/errors.hpp"
#include "pertdet/types.hpp"

namespace pertdet {

/// Eigenvalues repeated according to algebraic multiplicity.
struct Spectrum {
    std::vector<cplx> eigenvalues;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    cplx sum() const;
    double max_modulus() const;
};

/// Singular values, sorted non-increasing.
struct SingularValues {
    std::vector<double> values;

    double largest() const { return values.empty() ? 0.0 : values.front(); }
    double smallest() const { return values.empty() ? 0.0 : values.back(); }
};

struct ResolventResult {
    ComplexMatrix matrix;  // (lambda - A)^{-1}
    double residual = 0;   // ||(lambda - A) R - I||_inf
    double s_min = 0;      // smallest singular value of lambda - A
    double condition = 0;  // ||lambda - A|| / s_min
};

struct Norms {
    double operator_norm = 0;
    double spectral_radius = 0;
};

/// Throws DomainError unless M is square, non-empty and finite.
void require_valid(const ComplexMatrix& M, const char* what = "matrix");
bool is_finite(const ComplexMatrix& M);

Spectrum eigenvalues(const ComplexMatrix& M);
SingularValues singular_values(const ComplexMatrix& M);

double operator_norm(const ComplexMatrix& M);
double spectral_radius(const ComplexMatrix& M);
double smallest_singular_value(const ComplexMatrix& M);
Norms norms(const ComplexMatrix& M);

/// Determinant by LU with partial pivoting.
cplx lu_determinant(const ComplexMatrix& M);

/// Relative threshold for rejecting lambda as a spectral point:
/// s_min(lambda - A) <= kResolventThreshold * ||A||.
inline constexpr double kResolventThreshold = 1e-12;

ResolventResult resolvent(const ComplexMatrix& A, cplx lambda,
                          double threshold = kResolventThreshold);

/// e^{tH} by scaling and squaring with a Pade approximant.
ComplexMatrix matrix_exponential(const ComplexMatrix& H, double t);

/// Number of entries of `values` within `radius` of `center` (closed disk).
std::size_t count_within(std::span<const cplx> values, cplx center, double radius);

/// Default clustering tolerance for multiplicity comparisons, relative to ||M||.
inline constexpr double kClusterTolerance = 1e-7;

/// Algebraic multiplicity of `lambda` as an eigenvalue, by clustering the
/// computed spectrum at absolute tolerance `tol`.
std::size_t multiplicity(const Spectrum& spectrum, cplx lambda, double tol);

}  // namespace pertdet
