#pragma once

#include <string>

#include "pertdet/ideals.hpp"
#include "pertdet/linalg.hpp"
#include "pertdet/report.hpp"

namespace pertdet {

/// Regularization order p > 0 together with ceil(p) = min{n in N : n >= p}.
class RegularizationOrder {
public:
    explicit RegularizationOrder(double p);

    double p() const noexcept { return p_; }
    int ceil_p() const noexcept { return ceil_p_; }
    /// Number of trace corrections, ceil(p) - 1.
    int corrections() const noexcept { return ceil_p_ - 1; }

private:
    double p_;
    int ceil_p_;
};

enum class Provenance { paper, user, heuristic };

std::string to_string(Provenance provenance);

/// Constant Gamma_p in |det_p(I - F)| <= exp(Gamma_p sum_k |lambda_k(F)|^p).
struct GammaConstant {
    double p = 1;
    double value = 1;
    Provenance provenance = Provenance::paper;
};

/// Known values: 1/p for p <= 1, (p-1)/p for integer p >= 2 except p = 3,
/// and 1 for p = 3. Non-integer p > 1 yields 1 marked heuristic.
GammaConstant gamma_constant(double p);
GammaConstant user_gamma(double p, double value);

/// det(I - F) by LU on I - F.
cplx det_I_minus(const ComplexMatrix& F);

/// tr(F^k), k >= 1.
cplx trace_power(const ComplexMatrix& F, int k);

/// Both evaluations of det_p(I - L).
struct RegularizedDetForms {
    cplx trace_form;    // det(I - L) exp(sum_{k<ceil p} tr(L^k)/k)
    cplx product_form;  // prod_j (1 - l_j) exp(sum_{k<ceil p} l_j^k / k)
    double tolerance;   // admissible |trace_form - product_form|
};

RegularizedDetForms regularized_det_forms(const RegularizationOrder& p, const ComplexMatrix& L);

/// det_p(I - L), the trace form. Throws ConsistencyError when the eigenvalue
/// product form disagrees by more than relative 1e-9 (with an absolute floor
/// proportional to the sensitivity of the product to eigenvalue errors).
cplx regularized_det(const RegularizationOrder& p, const ComplexMatrix& L);

/// Threshold below which a scaled determinant modulus is treated as zero.
inline constexpr double kVanishingThreshold = 1e-10;

BoundReport growth_bound_check(const RegularizationOrder& p, const ComplexMatrix& F,
                               const GammaConstant& gamma);

/// Local Lipschitz estimate for det_p(I - .) in the ideal quasi-norm, with
/// p the ideal's eigenvalue exponent and Gamma_p from gamma_constant.
BoundReport lipschitz_check(const RegularizationOrder& p, const IdealSpec& ideal,
                            const ComplexMatrix& K, const ComplexMatrix& L);

/// det_p((I-F)(I-L)) against det(I-F) det_p(I-L) exp(sum_k sum_m
/// tr(F(I-L) L^m H^{k-1-m}) / k), H = F + L - FL. Observed value is the
/// relative discrepancy, bound 1e-8.
BoundReport factorization_check(const ComplexMatrix& F, const ComplexMatrix& L,
                                const RegularizationOrder& p);

/// Relative difference |a - b| / max(|a|, |b|), 0 when both vanish.
double relative_difference(cplx a, cplx b);

}  // namespace pertdet
