#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pertdet/linalg.hpp"
#include "pertdet/report.hpp"

namespace pertdet {

enum class IdealKind {
    schatten,        // (sum s_n^p)^{1/p}; one evaluator for approximation/Gelfand/Weyl numbers
    hille_tamarkin,  // mixed l_q(l_q') kernel norm, dominates the q-summing norm on l_q
    nuclear_upper,   // sum of singular values: an upper bound for the nuclear norm
};

std::string to_string(IdealKind kind);
IdealKind parse_ideal_kind(const std::string& name);

/// Descriptor of a quasi-normed operator ideal together with the constants the
/// determinant and counting bounds need.
///
/// `p` is the eigenvalue-type exponent: ||(lambda_j(L))||_{l_p} <= gamma_p ||L||_I.
/// For hille_tamarkin the underlying space is l_q(mu); its operator norm is the
/// l_q -> l_q norm, not the spectral norm (see ambient_norm_upper/lower).
struct IdealSpec {
    IdealKind kind = IdealKind::schatten;
    double p = 1.0;
    double q = 2.0;  // hille_tamarkin only
    double gamma_p = 1.0;
    double q_triangle = 1.0;
    std::string label;
    std::vector<double> weights;  // hille_tamarkin measure weights; empty = counting measure

    static IdealSpec schatten(double p);
    static IdealSpec hille_tamarkin(double q, std::vector<double> weights = {});
    static IdealSpec nuclear_upper();

    /// Replace gamma_p (e.g. the Hilbert-space value 1 for Schatten classes).
    IdealSpec with_gamma(double gamma) const;

    /// Throws DomainError when the invariants tying kind, p, gamma_p and
    /// q_triangle together are broken.
    void validate() const;
};

/// Eigenvalue constant of the s-number ideals on a general Banach space.
double snumber_eigenvalue_constant(double p);

double ideal_norm(const IdealSpec& spec, const ComplexMatrix& L);

/// (sum_j |lambda_j|^p)^{1/p} over the full multiset.
double eigenvalue_lp(const ComplexMatrix& L, double p);
double eigenvalue_lp(std::span<const cplx> eigenvalues, double p);

/// Upper bound for the operator norm of M on the ideal's underlying space:
/// the spectral norm for schatten/nuclear, the Riesz-Thorin bound
/// ||M||_1^{1/q} ||M||_inf^{1-1/q} on l_q for hille_tamarkin.
double ambient_norm_upper(const IdealSpec& spec, const ComplexMatrix& M);

/// Lower bound for the same operator norm (exact for schatten/nuclear; a
/// power-method value ||Mx||_q / ||x||_q for hille_tamarkin).
double ambient_norm_lower(const IdealSpec& spec, const ComplexMatrix& M);

/// Eigenvalue bound: ||(lambda_j(L))||_{l_p} <= gamma_p ||L||_I.
BoundReport a4_check(const IdealSpec& spec, const ComplexMatrix& L);

/// Norm domination ||L|| <= ||L||_I and the ideal inequality
/// ||ALB||_I <= ||A|| ||L||_I ||B||. Reported as one record; the observed
/// value is the larger of the two normalized ratios, the bound is 1.
BoundReport a2_a3_check(const IdealSpec& spec, const ComplexMatrix& A, const ComplexMatrix& L,
                        const ComplexMatrix& B);

/// ||K + L||_I <= q_I (||K||_I + ||L||_I).
BoundReport quasi_triangle_check(const IdealSpec& spec, const ComplexMatrix& K,
                                 const ComplexMatrix& L);

}  // namespace pertdet
