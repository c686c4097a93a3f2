#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pertdet/determinants.hpp"
#include "pertdet/ideals.hpp"
#include "pertdet/perturbation.hpp"
#include "pertdet/report.hpp"

namespace pertdet {

struct ContractionResult {
    bool certified = false;
    std::optional<double> witness_t;  // first t with ||e^{tH0}|| > 1 + 1e-10
    double max_norm = 0;
};

/// 200 log-spaced times in [1e-3, 10].
std::vector<double> default_contraction_grid();

/// ||e^{tH0}|| <= 1 + 1e-10 on every grid time. The norm is the ideal's
/// ambient operator norm (an upper bound on l_q for hille_tamarkin), the
/// spectral norm when no ideal is given.
ContractionResult contraction_certify(const ComplexMatrix& H0, std::span<const double> t_grid,
                                      const std::optional<IdealSpec>& ideal = std::nullopt);

/// Sufficient exact criterion for a contraction semigroup on Hilbert space:
/// H0 normal with Re sigma(H0) <= 0.
bool is_normal_dissipative(const ComplexMatrix& H0, double tol = 1e-10);

/// Eigenvalues of H with Re > s, with multiplicity.
CountResult strip_count(const ComplexMatrix& H, double s);

/// Unperturbed/perturbed generators with transform time a and the ideal that
/// e^{aH} - e^{aH0} is measured in.
struct GeneratorPair {
    ComplexMatrix H0;
    ComplexMatrix H;
    double a = 1;
    IdealSpec ideal;
    RegularizationOrder order;

    GeneratorPair(ComplexMatrix H0, ComplexMatrix H, double a, IdealSpec ideal);
};

/// (p+1)^{p+1} gamma_p^p Gamma_p / p^p.
double semigroup_constant(double p, double gamma, double Gamma);

/// C_p e^{as} / (e^{as} - 1)^{p+1} normD^p, evaluated in logarithms.
double semigroup_count_bound(double s, double a, double p, double gamma, double Gamma, double normD);

/// Reports of the strip count against the semigroup bound at each s. The
/// contraction property of H0 is certified once on the default grid; an
/// uncertified H0 is a DomainError. With `tightened`, a second record per s
/// uses the actual ||e^{aH0}|| instead of 1 (bound_id "semigroup_tightened").
std::vector<BoundReport> semigroup_reports(const GeneratorPair& pair, std::span<const double> s_grid,
                                           bool tightened = false);

BoundReport semigroup_bound(const GeneratorPair& pair, double s);

/// m(lambda; H) <= m(e^{a lambda}; e^{aH}) by clustered eigenvalue counts.
/// Default tolerances: 1e-7 max(1, ||H||) for H and 1e-8 e^{a max Re sigma(H)}
/// for e^{aH}.
BoundReport multiplicity_transfer_check(const ComplexMatrix& H, double a, cplx lambda,
                                        std::optional<double> tol_generator = std::nullopt,
                                        std::optional<double> tol_semigroup = std::nullopt);

/// Hille-Tamarkin route: D_a = e^{aH} - e^{aH0} measured in the mixed
/// l_q(l_q') kernel norm (counting measure), p = max(2, q), gamma = 1.
std::vector<BoundReport> hille_tamarkin_pipeline(const ComplexMatrix& H0, const ComplexMatrix& H,
                                                 double a, double q,
                                                 std::span<const double> s_grid);

}  // namespace pertdet
