#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pertdet/ideals.hpp"
#include "pertdet/linalg.hpp"
#include "pertdet/report.hpp"

namespace pertdet {

/// Principal branch W on [0, inf): W(x) e^{W(x)} = x.
double lambert_w(double x);

/// Phi_p(x) = W(y)^p / ((1/p - W(y))^{p+1} x^p) with y = e^{1/p} x / p, 0 < x < 1.
/// s^p / Phi_p(R/s) is the maximum of (t - R)^p log(s/t) over t in (R, s).
double phi_p(double p, double x);

/// lim_{x -> 0+} Phi_p(x) = p e.
double phi_p_limit_at_zero(double p);

/// (p+1)^{p+1} / p^p / (1-x)^{p+1}: the closed-form majorant of Phi_p.
double phi_p_majorant(double p, double x);

/// Conformal radius of {|z| > s} inside {|z| > t} for the map z -> t/z: t/s.
double disk_exterior_radius(double t, double s);

/// Count bound in a region at conformal radius r inside the complement of the
/// eps-pseudospectrum: gamma^p Gamma normK^p / (eps^p log(1/r)).
double pseudospectral_count_bound(double eps, double r, double p, double gamma, double Gamma,
                                  double normK);

/// Resolvent envelope ||(lambda - A)^{-1}|| <= C_A / (|lambda| - R) for |lambda| > R.
struct ResolventEnvelope {
    double R = 0;
    double C_A = 1;
    bool certified = false;
    std::optional<cplx> witness;  // first grid point that violated the envelope
};

struct EnvelopeBound {
    double tight = 0;    // C^p gamma^p Gamma Phi_p(R/s) normK^p / s^p
    double relaxed = 0;  // C^p gamma^p Gamma (p+1)^{p+1}/p^p s/(s-R)^{p+1} normK^p
};

/// Bound on the number of eigenvalues of A + K in |z| > s, s > R.
EnvelopeBound envelope_count_bound(double s, const ResolventEnvelope& env, double p, double gamma,
                                   double Gamma, double normK);

/// Same bound with R = ||A||, C_A = 1; requires s > ||A||.
double norm_exterior_count_bound(double s, double normA, double p, double gamma, double Gamma,
                                 double normK);

/// Eigenvalues of K alone in |z| > s: gamma^p normK^p / s^p.
double unperturbed_count_bound(double s, double p, double gamma, double normK);

/// Jensen's identity for h(w) = prod (1 - w/z_j) on |w| = r: the closed form
/// sum_{|z_j| <= r} log(r/|z_j|) against trapezoidal quadrature of
/// (1/2 pi) \int log|h(r e^{it})| dt. Observed = |difference|, bound 1e-6.
BoundReport jensen_check(std::span<const cplx> zeros, double r);

/// Closed-form side of Jensen's identity.
double jensen_counting_integral(std::span<const cplx> zeros, double r);

/// Quadrature side; nodes start at 4096 and double until the change is < 1e-8.
double jensen_mean_log_modulus(std::span<const cplx> zeros, double r);

/// Default radial grid: `count` radii R + delta, delta log-spaced up to 99R + 100.
std::vector<double> default_envelope_radii(double R, int count = 50);

/// Checks the envelope at `angles` points on every radius in `radii`. The
/// resolvent norm is the ideal's ambient operator norm (spectral norm when
/// `ideal` is empty).
ResolventEnvelope certify_envelope(const ComplexMatrix& A, double R, double C_A,
                                   std::span<const double> radii, int angles = 64,
                                   const std::optional<IdealSpec>& ideal = std::nullopt);

}  // namespace pertdet
