#include "pertdet/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pertdet/bounds.hpp"

namespace pertdet {

std::vector<double> default_contraction_grid() {
    constexpr int count = 200;
    const double lo = std::log(1e-3);
    const double hi = std::log(10.0);
    std::vector<double> grid;
    grid.reserve(count);
    for (int i = 0; i < count; ++i)
        grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / (count - 1)));
    return grid;
}

namespace {

double ambient(const std::optional<IdealSpec>& ideal, const ComplexMatrix& M) {
    return ideal ? ambient_norm_upper(*ideal, M) : operator_norm(M);
}

}  // namespace

ContractionResult contraction_certify(const ComplexMatrix& H0, std::span<const double> t_grid,
                                      const std::optional<IdealSpec>& ideal) {
    require_valid(H0, "H0");
    if (t_grid.empty()) throw DomainError("contraction grid is empty");
    ContractionResult out;
    out.certified = true;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw DomainError("contraction grid times must be positive");
        const double nrm = ambient(ideal, matrix_exponential(H0, t));
        out.max_norm = std::max(out.max_norm, nrm);
        if (!(nrm <= 1.0 + 1e-10) && out.certified) {
            out.certified = false;
            out.witness_t = t;
        }
    }
    return out;
}

bool is_normal_dissipative(const ComplexMatrix& H0, double tol) {
    require_valid(H0, "H0");
    const double scale = std::max(1.0, operator_norm(H0));
    const ComplexMatrix adj = H0.adjoint();
    const double commutator = operator_norm(H0 * adj - adj * H0);
    if (commutator > tol * scale * scale) return false;
    for (const auto& z : eigenvalues(H0).eigenvalues)
        if (z.real() > tol * scale) return false;
    return true;
}

CountResult strip_count(const ComplexMatrix& H, double s) {
    require_valid(H, "H");
    return count_in_region(eigenvalues(H).eigenvalues, Region::halfplane_re_gt(s), operator_norm(H));
}

GeneratorPair::GeneratorPair(ComplexMatrix H0_, ComplexMatrix H_, double a_, IdealSpec ideal_)
    : H0(std::move(H0_)), H(std::move(H_)), a(a_), ideal(std::move(ideal_)), order(ideal.p) {
    require_valid(H0, "H0");
    require_valid(H, "H");
    if (H0.rows() != H.rows()) throw DomainError("H0 and H must have the same dimension");
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("transform time a must be positive");
    ideal.validate();
}

double semigroup_constant(double p, double gamma, double Gamma) {
    return std::pow(p + 1.0, p + 1.0) * std::pow(gamma, p) * Gamma / std::pow(p, p);
}

double semigroup_count_bound(double s, double a, double p, double gamma, double Gamma, double normD) {
    if (!(s > 0.0)) throw DomainError("semigroup bound requires s > 0");
    if (!(a > 0.0)) throw DomainError("semigroup bound requires a > 0");
    if (normD == 0.0) return 0.0;
    const double as = a * s;
    // log(e^{as} - 1) = as + log1p(-e^{-as})
    const double log_gap = as + std::log1p(-std::exp(-as));
    const double log_bound = std::log(semigroup_constant(p, gamma, Gamma)) + as -
                             (p + 1.0) * log_gap + p * std::log(normD);
    return std::exp(log_bound);
}

namespace {

// Same count bound for an exponential of operator norm normE < e^{as}.
double tightened_count_bound(double s, double a, double p, double gamma, double Gamma, double normD,
                             double normE) {
    if (normD == 0.0) return 0.0;
    const double as = a * s;
    const double log_gap = std::log(std::exp(as) - normE);
    const double log_bound = std::log(semigroup_constant(p, gamma, Gamma)) + as -
                             (p + 1.0) * log_gap + p * std::log(normD);
    return std::exp(log_bound);
}

}  // namespace

std::vector<BoundReport> semigroup_reports(const GeneratorPair& pair, std::span<const double> s_grid,
                                           bool tightened) {
    const auto grid = default_contraction_grid();
    const ContractionResult cert = contraction_certify(pair.H0, grid, pair.ideal);
    if (!cert.certified)
        throw DomainError("H0 is not a certified contraction generator (norm " +
                          format_double(cert.max_norm) + " at t = " +
                          format_double(cert.witness_t.value_or(0.0)) + ")");

    const ComplexMatrix E0 = matrix_exponential(pair.H0, pair.a);
    const ComplexMatrix D = matrix_exponential(pair.H, pair.a) - E0;
    const double normD = ideal_norm(pair.ideal, D);
    const double p = pair.order.p();
    const GammaConstant Gamma = gamma_constant(p);
    const double gamma = pair.ideal.gamma_p;
    const double normE0 = tightened ? ambient_norm_upper(pair.ideal, E0) : 1.0;

    const Spectrum spec = eigenvalues(pair.H);
    const double scale = operator_norm(pair.H);

    std::vector<BoundReport> out;
    out.reserve(s_grid.size() * (tightened ? 2 : 1));
    for (double s : s_grid) {
        if (!(s > 0.0)) throw DomainError("semigroup bound requires s > 0");
        const CountResult count =
            count_in_region(spec.eigenvalues, Region::halfplane_re_gt(s), scale);
        const double bound = semigroup_count_bound(s, pair.a, p, gamma, Gamma.value, normD);
        BoundReport r = make_report("semigroup_strip", bound, static_cast<double>(count.count));
        r.with("ideal", pair.ideal.label).with("p", p).with("a", pair.a).with("s", s)
            .with("norm_D", normD).with("gamma_provenance", to_string(Gamma.provenance));
        r.warnings = count.warnings;
        if (Gamma.provenance == Provenance::heuristic)
            r.warnings.push_back("Gamma_p for non-integer p is heuristic");
        out.push_back(std::move(r));

        if (tightened) {
            const double tb =
                tightened_count_bound(s, pair.a, p, gamma, Gamma.value, normD, normE0);
            BoundReport t = make_report("semigroup_tightened", tb, static_cast<double>(count.count));
            t.with("ideal", pair.ideal.label).with("p", p).with("a", pair.a).with("s", s)
                .with("norm_D", normD).with("norm_exp_aH0", normE0)
                .with("note", std::string("non-paper tightening"));
            t.warnings = count.warnings;
            out.push_back(std::move(t));
        }
    }
    return out;
}

BoundReport semigroup_bound(const GeneratorPair& pair, double s) {
    const double grid[] = {s};
    return semigroup_reports(pair, grid).front();
}

BoundReport multiplicity_transfer_check(const ComplexMatrix& H, double a, cplx lambda,
                                        std::optional<double> tol_generator,
                                        std::optional<double> tol_semigroup) {
    require_valid(H, "H");
    if (!(a > 0.0)) throw DomainError("transform time a must be positive");
    if (!(lambda.real() > 0.0)) throw DomainError("multiplicity transfer requires Re lambda > 0");

    const Spectrum sH = eigenvalues(H);
    const double tolH = tol_generator.value_or(kClusterTolerance * std::max(1.0, operator_norm(H)));
    const std::size_t mH = multiplicity(sH, lambda, tolH);
    if (mH == 0) throw DomainError("lambda is not an eigenvalue of H");

    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& z : sH.eigenvalues) max_re = std::max(max_re, z.real());
    const double tolE = tol_semigroup.value_or(1e-8 * std::exp(a * max_re));
    const Spectrum sE = eigenvalues(matrix_exponential(H, a));
    const std::size_t mE = multiplicity(sE, std::exp(a * lambda), tolE);

    BoundReport r = make_report("multiplicity_transfer", static_cast<double>(mE),
                                static_cast<double>(mH));
    r.with("lambda", lambda).with("a", a).with("tol_H", tolH).with("tol_exp", tolE);
    if (mE > mH) r.warnings.push_back("exponential aliasing: strict inequality");
    return r;
}

std::vector<BoundReport> hille_tamarkin_pipeline(const ComplexMatrix& H0, const ComplexMatrix& H,
                                                 double a, double q,
                                                 std::span<const double> s_grid) {
    if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("Hille-Tamarkin exponent q must lie in (1, inf)");
    GeneratorPair pair(H0, H, a, IdealSpec::hille_tamarkin(q));
    auto reports = semigroup_reports(pair, s_grid);
    for (auto& r : reports) {
        r.bound_id = "semigroup_hille_tamarkin";
        r.with("q", q);
    }
    return reports;
}

}  // namespace pertdet
