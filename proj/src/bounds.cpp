#include "pertdet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pertdet {

double lambert_w(double x) {
    if (!(x >= 0.0)) throw DomainError("lambert_w is defined here for x >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;

    double w;
    if (x < 3.0) {
        w = std::log1p(x);
        if (x < 0.5) w = x * (1.0 - x * (1.0 - 1.5 * x));
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    // Halley iteration on f(w) = w e^w - x
    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double fp = ew * (w + 1.0);
        const double step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) break;
    }
    return w;
}

double phi_p_limit_at_zero(double p) {
    if (!(p > 0.0)) throw DomainError("phi_p requires p > 0");
    return p * std::numbers::e;
}

double phi_p(double p, double x) {
    if (!(p > 0.0)) throw DomainError("phi_p requires p > 0");
    if (!(x > 0.0 && x < 1.0)) throw DomainError("phi_p requires 0 < x < 1");
    const double inv_p = 1.0 / p;
    const double w = lambert_w(inv_p * std::exp(inv_p) * x);
    const double gap = inv_p - w;
    if (!(gap > 0.0) || p * std::log(x) + (p + 1.0) * std::log(gap) < std::log(1e-300))
        throw OverflowError("phi_p denominator underflows near x = 1");
    return std::pow(w / x, p) / std::pow(gap, p + 1.0);
}

double phi_p_majorant(double p, double x) {
    return std::pow(p + 1.0, p + 1.0) / std::pow(p, p) / std::pow(1.0 - x, p + 1.0);
}

double disk_exterior_radius(double t, double s) {
    if (!(t > 0.0) || !(s > t)) throw DomainError("disk_exterior_radius requires 0 < t < s");
    return t / s;
}

double pseudospectral_count_bound(double eps, double r, double p, double gamma, double Gamma,
                                  double normK) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("conformal radius must lie in (0, 1)");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (normK == 0.0) return 0.0;
    return std::pow(gamma, p) * Gamma * std::pow(normK, p) / (std::pow(eps, p) * std::log(1.0 / r));
}

EnvelopeBound envelope_count_bound(double s, const ResolventEnvelope& env, double p, double gamma,
                                   double Gamma, double normK) {
    if (!(s > env.R)) throw DomainError("envelope bound requires s > R");
    if (!(env.C_A > 0.0) || !(env.R >= 0.0)) throw DomainError("envelope requires R >= 0, C_A > 0");
    if (normK == 0.0) return {0.0, 0.0};
    const double common = std::pow(env.C_A, p) * std::pow(gamma, p) * Gamma * std::pow(normK, p);
    const double x = env.R / s;
    const double phi = x == 0.0 ? phi_p_limit_at_zero(p) : phi_p(p, x);
    EnvelopeBound out;
    out.tight = common * phi / std::pow(s, p);
    out.relaxed = common * std::pow(p + 1.0, p + 1.0) / std::pow(p, p) * s /
                  std::pow(s - env.R, p + 1.0);
    return out;
}

double norm_exterior_count_bound(double s, double normA, double p, double gamma, double Gamma,
                                 double normK) {
    if (!(s > normA)) throw DomainError("norm exterior bound requires s > ||A||");
    return envelope_count_bound(s, {normA, 1.0, false, std::nullopt}, p, gamma, Gamma, normK).relaxed;
}

double unperturbed_count_bound(double s, double p, double gamma, double normK) {
    if (!(s > 0.0)) throw DomainError("unperturbed bound requires s > 0");
    return std::pow(gamma, p) * std::pow(normK, p) / std::pow(s, p);
}

namespace {

void check_jensen_input(std::span<const cplx> zeros, double r) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("jensen radius must lie in (0, 1)");
    for (const auto& z : zeros) {
        const double m = std::abs(z);
        if (!(m > 0.0) || !(m < 1.0)) throw DomainError("jensen zeros must satisfy 0 < |z| < 1");
        if (std::abs(m - r) <= 1e-6 * r) throw DomainError("a zero lies on the circle |w| = r");
    }
}

double mean_log_modulus(std::span<const cplx> zeros, double r, int nodes) {
    double acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const cplx w = std::polar(r, 2.0 * std::numbers::pi * k / nodes);
        double lg = 0.0;
        for (const auto& z : zeros) lg += std::log(std::abs(1.0 - w / z));
        acc += lg;
    }
    return acc / nodes;
}

}  // namespace

double jensen_counting_integral(std::span<const cplx> zeros, double r) {
    check_jensen_input(zeros, r);
    double acc = 0.0;
    for (const auto& z : zeros)
        if (std::abs(z) <= r) acc += std::log(r / std::abs(z));
    return acc;
}

double jensen_mean_log_modulus(std::span<const cplx> zeros, double r) {
    check_jensen_input(zeros, r);
    int nodes = 4096;
    double prev = mean_log_modulus(zeros, r, nodes);
    while (nodes < (1 << 22)) {
        nodes *= 2;
        const double next = mean_log_modulus(zeros, r, nodes);
        if (std::abs(next - prev) < 1e-8) return next;
        prev = next;
    }
    throw ConvergenceError("jensen quadrature did not settle; a zero is too close to the circle");
}

BoundReport jensen_check(std::span<const cplx> zeros, double r) {
    const double lhs = jensen_counting_integral(zeros, r);
    const double rhs = jensen_mean_log_modulus(zeros, r);
    BoundReport rep = make_report("jensen_identity", 1e-6, std::abs(lhs - rhs), 0.0);
    rep.with("zeros", static_cast<double>(zeros.size())).with("r", r).with("closed_form", lhs)
        .with("quadrature", rhs);
    return rep;
}

std::vector<double> default_envelope_radii(double R, int count) {
    if (count < 1) throw DomainError("envelope grid needs at least one radius");
    const double span = 99.0 * R + 100.0;
    std::vector<double> radii;
    radii.reserve(static_cast<std::size_t>(count));
    const double lo = std::log(1e-4 * span);
    const double hi = std::log(span);
    for (int i = 0; i < count; ++i) {
        const double frac = count == 1 ? 1.0 : static_cast<double>(i) / (count - 1);
        radii.push_back(R + std::exp(lo + frac * (hi - lo)));
    }
    return radii;
}

ResolventEnvelope certify_envelope(const ComplexMatrix& A, double R, double C_A,
                                   std::span<const double> radii, int angles,
                                   const std::optional<IdealSpec>& ideal) {
    require_valid(A, "A");
    if (!(C_A > 0.0)) throw DomainError("C_A must be positive");
    const double rA = spectral_radius(A);
    if (R < rA * (1.0 - 1e-12)) throw DomainError("envelope requires R >= r(A)");
    if (angles < 64) throw DomainError("envelope certification needs at least 64 angles");

    ResolventEnvelope env{R, C_A, true, std::nullopt};
    const Eigen::Index n = A.rows();
    for (double rho : radii) {
        if (!(rho > R)) throw DomainError("envelope radii must exceed R");
        for (int k = 0; k < angles; ++k) {
            const cplx lambda = std::polar(rho, 2.0 * std::numbers::pi * k / angles);
            const ComplexMatrix shifted = lambda * ComplexMatrix::Identity(n, n) - A;
            double res_norm;
            if (!ideal || ideal->kind != IdealKind::hille_tamarkin) {
                res_norm = 1.0 / smallest_singular_value(shifted);
            } else {
                res_norm = ambient_norm_upper(*ideal, shifted.partialPivLu().inverse());
            }
            if (!(res_norm * (rho - R) <= C_A * (1.0 + 1e-9))) {
                env.certified = false;
                env.witness = lambda;
                return env;
            }
        }
    }
    return env;
}

}  // namespace pertdet
