#pragma once

#include <span>
#include <string>
#include <vector>

#include "pertdet/determinants.hpp"
#include "pertdet/ideals.hpp"
#include "pertdet/linalg.hpp"

namespace pertdet {

/// (A, K, ideal, p): the data of D(lambda) = det_p(I - K (lambda - A)^{-1}).
struct PerturbationProblem {
    ComplexMatrix A;
    ComplexMatrix K;
    IdealSpec ideal;
    RegularizationOrder order;

    /// Validates dimensions and that p equals the ideal's eigenvalue exponent.
    PerturbationProblem(ComplexMatrix A, ComplexMatrix K, IdealSpec ideal);

    Eigen::Index dim() const { return A.rows(); }
    ComplexMatrix perturbed() const { return A + K; }
};

/// Counterclockwise circle |z - center| = radius sampled at `samples` points.
struct Contour {
    cplx center{0.0, 0.0};
    double radius = 1.0;
    int samples = 256;

    cplx point(int k, int n) const;
};

cplx perturbation_determinant(const PerturbationProblem& prob, cplx lambda);

struct WindingOptions {
    int max_samples = 1 << 16;
    double zero_threshold = 1e-8;  // s_min(z - A - K) below this times max(1, ||A + K||) on the contour is an error
    double max_step = 0.7853981633974483;  // pi/4: largest admissible argument increment
    double integer_deviation = 0.1;
};

struct WindingResult {
    int count = 0;
    double raw = 0;  // accumulated argument / 2 pi
    int samples = 0;
};

/// Total zero order of D inside the contour by argument accumulation; the
/// sample count doubles (from max(256, contour.samples)) until every argument
/// increment is below max_step and the raw winding is within
/// integer_deviation of an integer.
///
/// The closed disk must not meet sigma(A), and no eigenvalue of A may lie
/// within 10 * (2 pi / samples) * radius of the circle.
WindingResult winding_zero_count_detail(const PerturbationProblem& prob, const Contour& contour,
                                        const WindingOptions& options = {});
int winding_zero_count(const PerturbationProblem& prob, const Contour& contour,
                       const WindingOptions& options = {});

/// Counting regions for brute-force eigenvalue counts.
struct Region {
    enum class Kind { outside_radius, halfplane_re_gt, disk };

    Kind kind = Kind::outside_radius;
    double s = 0;
    cplx center{0.0, 0.0};
    double r = 0;

    static Region outside_radius(double s) { return {Kind::outside_radius, s, {}, 0}; }
    static Region halfplane_re_gt(double s) { return {Kind::halfplane_re_gt, s, {}, 0}; }
    static Region disk(cplx center, double r) { return {Kind::disk, 0, center, r}; }

    bool contains(cplx z) const;
    double boundary_distance(cplx z) const;
    std::string describe() const;
};

struct CountResult {
    std::size_t count = 0;
    std::vector<std::string> warnings;
};

/// Counts `eigenvalues` inside `region`; eigenvalues within
/// 1e-9 * scale of the boundary add a BoundaryAmbiguous warning.
CountResult count_in_region(std::span<const cplx> eigenvalues, const Region& region, double scale);

/// Eigenvalues of A + K in the region, with algebraic multiplicity.
CountResult brute_count(const PerturbationProblem& prob, const Region& region);

/// lambda in sigma_eps(A)  <=>  s_min(lambda - A) < eps.
bool pseudospectrum_member(const ComplexMatrix& A, cplx lambda, double eps);

/// max |D(lambda) - 1| over each circle |lambda| = radius (samples per circle).
std::vector<double> decay_at_infinity(const PerturbationProblem& prob,
                                      std::span<const double> radii, int samples = 64);

/// (1 / 2 pi i) \oint D(zeta) / (zeta - lambda) d zeta by the trapezoidal rule.
cplx cauchy_reproduction(const PerturbationProblem& prob, const Contour& contour, cplx lambda);

/// |D(lambda)| <= exp(gamma_p^p Gamma_p ||K (lambda - A)^{-1}||_I^p).
BoundReport perturbation_growth_check(const PerturbationProblem& prob, cplx lambda);

}  // namespace pertdet
