#include "pertdet/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pertdet {

PerturbationProblem::PerturbationProblem(ComplexMatrix A_, ComplexMatrix K_, IdealSpec ideal_)
    : A(std::move(A_)), K(std::move(K_)), ideal(std::move(ideal_)), order(ideal.p) {
    require_valid(A, "A");
    require_valid(K, "K");
    if (A.rows() != K.rows()) throw DomainError("A and K must have the same dimension");
    ideal.validate();
}

cplx Contour::point(int k, int n) const {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    return center + std::polar(radius, theta);
}

cplx perturbation_determinant(const PerturbationProblem& prob, cplx lambda) {
    const ResolventResult R = resolvent(prob.A, lambda);
    return regularized_det(prob.order, prob.K * R.matrix);
}

namespace {

void validate_contour(const PerturbationProblem& prob, const Contour& c, int samples) {
    if (!(c.radius > 0.0) || !std::isfinite(c.radius))
        throw DomainError("contour radius must be positive");
    if (c.samples < 64) throw DomainError("contour needs at least 64 samples");
    const double clearance = 10.0 * (2.0 * std::numbers::pi / samples) * c.radius;
    for (const auto& a : eigenvalues(prob.A).eigenvalues) {
        const double d = std::abs(a - c.center);
        if (d <= c.radius)
            throw DomainError("contour encloses an eigenvalue of A; D is not analytic there");
        if (d - c.radius < clearance)
            throw DomainError("eigenvalue of A within " + format_double(clearance) +
                              " of the contour");
    }
}

}  // namespace

WindingResult winding_zero_count_detail(const PerturbationProblem& prob, const Contour& contour,
                                        const WindingOptions& options) {
    int n = std::max(256, contour.samples);
    validate_contour(prob, contour, n);

    // The zeros of D are the eigenvalues of A + K, so a contour point is too close
    // to a zero when s_min(z - A - K) is small. |D| itself is no guide: near a
    // pole of the resolvent the exponential trace factor spans many decades.
    const ComplexMatrix B = prob.perturbed();
    const double scale = std::max(1.0, operator_norm(B));
    const ComplexMatrix I = ComplexMatrix::Identity(B.rows(), B.cols());
    auto eval = [&](int k, int total) {
        const cplx z = contour.point(k, total);
        const cplx d = perturbation_determinant(prob, z);
        if (!(std::abs(d) > 0.0) || !std::isfinite(std::abs(d)) ||
            !(smallest_singular_value(z * I - B) > options.zero_threshold * scale))
            throw ContourThroughZero(z, std::abs(d));
        return d;
    };

    std::vector<cplx> values(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = eval(k, n);

    while (true) {
        double total = 0.0;
        double largest = 0.0;
        for (int k = 0; k < n; ++k) {
            const cplx a = values[static_cast<std::size_t>(k)];
            const cplx b = values[static_cast<std::size_t>((k + 1) % n)];
            const double step = std::arg(b / a);
            total += step;
            largest = std::max(largest, std::abs(step));
        }
        const double raw = total / (2.0 * std::numbers::pi);
        const double rounded = std::round(raw);
        if (largest <= options.max_step && std::abs(raw - rounded) <= options.integer_deviation)
            return {static_cast<int>(rounded), raw, n};
        if (2 * n > options.max_samples)
            throw ConvergenceError("winding number not resolved with " + std::to_string(n) +
                                   " samples (raw " + format_double(raw) + ")");
        std::vector<cplx> refined(static_cast<std::size_t>(2 * n));
        for (int k = 0; k < n; ++k) {
            refined[static_cast<std::size_t>(2 * k)] = values[static_cast<std::size_t>(k)];
            refined[static_cast<std::size_t>(2 * k + 1)] = eval(2 * k + 1, 2 * n);
        }
        values = std::move(refined);
        n *= 2;
    }
}

int winding_zero_count(const PerturbationProblem& prob, const Contour& contour,
                       const WindingOptions& options) {
    return winding_zero_count_detail(prob, contour, options).count;
}

bool Region::contains(cplx z) const {
    switch (kind) {
        case Kind::outside_radius: return std::abs(z) > s;
        case Kind::halfplane_re_gt: return z.real() > s;
        case Kind::disk: return std::abs(z - center) < r;
    }
    return false;
}

double Region::boundary_distance(cplx z) const {
    switch (kind) {
        case Kind::outside_radius: return std::abs(std::abs(z) - s);
        case Kind::halfplane_re_gt: return std::abs(z.real() - s);
        case Kind::disk: return std::abs(std::abs(z - center) - r);
    }
    return 0.0;
}

std::string Region::describe() const {
    switch (kind) {
        case Kind::outside_radius: return "|z|>" + format_double(s);
        case Kind::halfplane_re_gt: return "Re z>" + format_double(s);
        case Kind::disk:
            return "|z-(" + format_double(center.real()) + "," + format_double(center.imag()) +
                   ")|<" + format_double(r);
    }
    return "?";
}

CountResult count_in_region(std::span<const cplx> eigenvalues, const Region& region, double scale) {
    CountResult out;
    const double band = 1e-9 * scale;
    for (const auto& z : eigenvalues) {
        if (region.contains(z)) ++out.count;
        if (region.boundary_distance(z) <= band)
            out.warnings.push_back("BoundaryAmbiguous: eigenvalue (" + format_double(z.real()) + "," +
                                   format_double(z.imag()) + ") on " + region.describe());
    }
    return out;
}

CountResult brute_count(const PerturbationProblem& prob, const Region& region) {
    const ComplexMatrix B = prob.perturbed();
    return count_in_region(eigenvalues(B).eigenvalues, region, operator_norm(B));
}

bool pseudospectrum_member(const ComplexMatrix& A, cplx lambda, double eps) {
    if (!(eps > 0.0)) throw DomainError("pseudospectrum requires eps > 0");
    require_valid(A, "A");
    const Eigen::Index n = A.rows();
    return smallest_singular_value(lambda * ComplexMatrix::Identity(n, n) - A) < eps;
}

std::vector<double> decay_at_infinity(const PerturbationProblem& prob,
                                      std::span<const double> radii, int samples) {
    const double r_A = spectral_radius(prob.A);
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
        if (!(r > r_A)) throw DomainError("decay radii must exceed the spectral radius of A");
        const Contour c{{0.0, 0.0}, r, samples};
        double worst = 0.0;
        for (int k = 0; k < samples; ++k)
            worst = std::max(worst, std::abs(perturbation_determinant(prob, c.point(k, samples)) - 1.0));
        out.push_back(worst);
    }
    return out;
}

cplx cauchy_reproduction(const PerturbationProblem& prob, const Contour& contour, cplx lambda) {
    const int n = contour.samples;
    cplx acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const cplx zeta = contour.point(k, n);
        // d zeta = i (zeta - c) d theta; the i cancels the 1/(2 pi i)
        acc += perturbation_determinant(prob, zeta) * (zeta - contour.center) / (zeta - lambda);
    }
    return acc / static_cast<double>(n);
}

BoundReport perturbation_growth_check(const PerturbationProblem& prob, cplx lambda) {
    const ResolventResult R = resolvent(prob.A, lambda);
    const ComplexMatrix KR = prob.K * R.matrix;
    const double p = prob.order.p();
    const double lhs = std::abs(regularized_det(prob.order, KR));
    const double norm = ideal_norm(prob.ideal, KR);
    const double Gamma = gamma_constant(p).value;
    const double rhs = std::exp(std::pow(prob.ideal.gamma_p, p) * Gamma * std::pow(norm, p));
    BoundReport r = make_report("perturbation_growth", rhs, lhs);
    r.with("ideal", prob.ideal.label).with("lambda", lambda).with("norm_KR", norm);
    return r;
}

}  // namespace pertdet
