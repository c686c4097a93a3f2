#include "pertdet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace pertdet {

SingularResolvent::SingularResolvent(cplx lambda, double s_min, double threshold)
    : Error("lambda = (" + std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
            ") is in the spectrum: s_min(lambda - A) = " + std::to_string(s_min) +
            " <= " + std::to_string(threshold)),
      lambda_(lambda),
      s_min_(s_min) {}

ContourThroughZero::ContourThroughZero(cplx at, double modulus)
    : Error("perturbation determinant vanishes on the contour at (" + std::to_string(at.real()) +
            ", " + std::to_string(at.imag()) + "), |D| = " + std::to_string(modulus)),
      at_(at) {}

cplx Spectrum::sum() const {
    return std::accumulate(eigenvalues.begin(), eigenvalues.end(), cplx{0.0, 0.0});
}

double Spectrum::max_modulus() const {
    double r = 0.0;
    for (const auto& z : eigenvalues) r = std::max(r, std::abs(z));
    return r;
}

bool is_finite(const ComplexMatrix& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            if (!std::isfinite(M(i, j).real()) || !std::isfinite(M(i, j).imag())) return false;
    return true;
}

void require_valid(const ComplexMatrix& M, const char* what) {
    if (M.rows() < 1 || M.rows() != M.cols())
        throw DomainError(std::string(what) + " must be square with n >= 1 (got " +
                          std::to_string(M.rows()) + "x" + std::to_string(M.cols()) + ")");
    if (!is_finite(M)) throw DomainError(std::string(what) + " has non-finite entries");
}

Spectrum eigenvalues(const ComplexMatrix& M) {
    require_valid(M);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("complex QR iteration did not converge (n = " +
                               std::to_string(M.rows()) + ")");
    const auto& ev = solver.eigenvalues();
    return Spectrum{std::vector<cplx>(ev.data(), ev.data() + ev.size())};
}

SingularValues singular_values(const ComplexMatrix& M) {
    require_valid(M);
    Eigen::JacobiSVD<ComplexMatrix> svd(M);
    const auto& sv = svd.singularValues();
    SingularValues out{std::vector<double>(sv.data(), sv.data() + sv.size())};
    std::sort(out.values.begin(), out.values.end(), std::greater<>());
    for (double v : out.values)
        if (!std::isfinite(v)) throw ConvergenceError("SVD produced non-finite singular values");
    return out;
}

double operator_norm(const ComplexMatrix& M) { return singular_values(M).largest(); }

double spectral_radius(const ComplexMatrix& M) { return eigenvalues(M).max_modulus(); }

double smallest_singular_value(const ComplexMatrix& M) { return singular_values(M).smallest(); }

Norms norms(const ComplexMatrix& M) { return {operator_norm(M), spectral_radius(M)}; }

cplx lu_determinant(const ComplexMatrix& M) {
    require_valid(M);
    return M.partialPivLu().determinant();
}

ResolventResult resolvent(const ComplexMatrix& A, cplx lambda, double threshold) {
    require_valid(A, "A");
    const Eigen::Index n = A.rows();
    const ComplexMatrix shifted = lambda * ComplexMatrix::Identity(n, n) - A;

    const SingularValues sv = singular_values(shifted);
    const double s_min = sv.smallest();
    const double cutoff = threshold * operator_norm(A);
    if (s_min <= cutoff || s_min == 0.0) throw SingularResolvent(lambda, s_min, cutoff);

    ResolventResult out;
    out.matrix = shifted.partialPivLu().inverse();
    out.s_min = s_min;
    out.condition = sv.largest() / s_min;
    out.residual = (shifted * out.matrix - ComplexMatrix::Identity(n, n))
                       .cwiseAbs()
                       .rowwise()
                       .sum()
                       .maxCoeff();
    return out;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& H, double t) {
    require_valid(H, "generator");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("matrix_exponential requires t >= 0");
    const Eigen::Index n = H.rows();
    if (t == 0.0) return ComplexMatrix::Identity(n, n);

    const ComplexMatrix scaled = t * H;
    const double norm1 = scaled.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(norm1) || norm1 > 1e300)
        throw OverflowError("||tH|| too large for the exponential");
    ComplexMatrix E = scaled.exp();
    if (!is_finite(E)) throw OverflowError("e^{tH} overflows double precision");
    return E;
}

std::size_t count_within(std::span<const cplx> values, cplx center, double radius) {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](cplx z) {
        return std::abs(z - center) <= radius;
    }));
}

std::size_t multiplicity(const Spectrum& spectrum, cplx lambda, double tol) {
    return count_within(spectrum.eigenvalues, lambda, tol);
}

}  // namespace pertdet
