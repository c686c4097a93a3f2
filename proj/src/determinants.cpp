#include "pertdet/determinants.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pertdet {

namespace {
constexpr int kMaxCeilP = 64;
}

RegularizationOrder::RegularizationOrder(double p) : p_(p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("regularization order must be positive");
    const double c = std::ceil(p);
    if (c > kMaxCeilP) throw DomainError("regularization order too large");
    ceil_p_ = std::max(1, static_cast<int>(c));
}

std::string to_string(Provenance provenance) {
    switch (provenance) {
        case Provenance::paper: return "paper";
        case Provenance::user: return "user";
        case Provenance::heuristic: return "heuristic";
    }
    return "unknown";
}

GammaConstant gamma_constant(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("Gamma_p requires p > 0");
    if (p <= 1.0) return {p, 1.0 / p, Provenance::paper};
    if (p == std::floor(p)) {
        if (p == 3.0) return {p, 1.0, Provenance::paper};
        return {p, (p - 1.0) / p, Provenance::paper};
    }
    return {p, 1.0, Provenance::heuristic};
}

GammaConstant user_gamma(double p, double value) {
    if (!(value > 0.0)) throw DomainError("Gamma_p must be positive");
    return {p, value, Provenance::user};
}

cplx det_I_minus(const ComplexMatrix& F) {
    require_valid(F);
    const Eigen::Index n = F.rows();
    return lu_determinant(ComplexMatrix::Identity(n, n) - F);
}

cplx trace_power(const ComplexMatrix& F, int k) {
    require_valid(F);
    if (k < 1) throw DomainError("trace_power requires k >= 1");
    ComplexMatrix P = F;
    for (int i = 1; i < k; ++i) P = P * F;
    return P.trace();
}

namespace {

/// sum_{k=1}^{m} z^k / k
cplx truncated_log_series(cplx z, int m) {
    cplx acc{0.0, 0.0};
    cplx power{1.0, 0.0};
    for (int k = 1; k <= m; ++k) {
        power *= z;
        acc += power / static_cast<double>(k);
    }
    return acc;
}

}  // namespace

RegularizedDetForms regularized_det_forms(const RegularizationOrder& p, const ComplexMatrix& L) {
    require_valid(L);
    const int m = p.corrections();

    // trace form
    cplx exponent{0.0, 0.0};
    ComplexMatrix power = L;
    for (int k = 1; k <= m; ++k) {
        if (k > 1) power = power * L;
        exponent += power.trace() / static_cast<double>(k);
    }
    const cplx trace_form = det_I_minus(L) * std::exp(exponent);

    // eigenvalue product form
    const auto spec = eigenvalues(L).eigenvalues;
    const auto n = spec.size();
    cplx spectral_exponent{0.0, 0.0};
    std::vector<cplx> factors(n);
    cplx product{1.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        factors[j] = 1.0 - spec[j];
        product *= factors[j];
        spectral_exponent += truncated_log_series(spec[j], m);
    }
    const cplx scale_exp = std::exp(spectral_exponent);
    const cplx product_form = product * scale_exp;

    // Sensitivity of the product to eigenvalue perturbations:
    // d/dz [(1-z) exp(sum_{k<=m} z^k/k)] = -z^m exp(...).
    double sensitivity = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        cplx others{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) others *= factors[i];
        sensitivity += std::abs(others) * std::pow(std::abs(spec[j]), m);
    }
    sensitivity *= std::abs(scale_exp);

    const double magnitude = std::max(std::abs(trace_form), std::abs(product_form));
    const double tol = 1e-9 * magnitude + 1e-10 * (1.0 + L.norm()) * sensitivity;
    return {trace_form, product_form, tol};
}

cplx regularized_det(const RegularizationOrder& p, const ComplexMatrix& L) {
    const auto forms = regularized_det_forms(p, L);
    const double diff = std::abs(forms.trace_form - forms.product_form);
    if (!(diff <= forms.tolerance))
        throw ConsistencyError("det_p trace form and eigenvalue product form disagree: |diff| = " +
                               format_double(diff) + " > " + format_double(forms.tolerance));
    return forms.trace_form;
}

double relative_difference(cplx a, cplx b) {
    const double m = std::max(std::abs(a), std::abs(b));
    if (m == 0.0) return 0.0;
    return std::abs(a - b) / m;
}

BoundReport growth_bound_check(const RegularizationOrder& p, const ComplexMatrix& F,
                               const GammaConstant& gamma) {
    if (gamma.p != p.p()) throw DomainError("Gamma constant does not match p");
    const double lhs = std::abs(regularized_det(p, F));
    double sum = 0.0;
    for (const auto& z : eigenvalues(F).eigenvalues) sum += std::pow(std::abs(z), p.p());
    const double rhs = std::exp(gamma.value * sum);
    BoundReport r = make_report("growth_det_p", rhs, lhs);
    r.with("p", p.p()).with("Gamma_p", gamma.value).with("Gamma_provenance", to_string(gamma.provenance))
        .with("eigen_lp_sum", sum);
    return r;
}

BoundReport lipschitz_check(const RegularizationOrder& p, const IdealSpec& ideal,
                            const ComplexMatrix& K, const ComplexMatrix& L) {
    if (K.rows() != L.rows()) throw DomainError("lipschitz_check: dimension mismatch");
    const double pp = p.p();
    const double Gamma = gamma_constant(pp).value;
    const double nK = ideal_norm(ideal, K);
    const double nL = ideal_norm(ideal, L);
    const double nDiff = ideal_norm(ideal, K - L);
    const double lhs = std::abs(regularized_det(p, K) - regularized_det(p, L));
    const double expo = std::pow(ideal.q_triangle, 2.0 * pp) * std::pow(ideal.gamma_p, pp) * Gamma *
                        std::pow(nK + nL + 1.0, pp);
    const double rhs = nDiff * std::exp(expo);
    BoundReport r = make_report("lipschitz_det_p", rhs, lhs);
    r.with("ideal", ideal.label).with("p", pp).with("Gamma_p", Gamma).with("norm_K", nK)
        .with("norm_L", nL).with("norm_K_minus_L", nDiff);
    return r;
}

BoundReport factorization_check(const ComplexMatrix& F, const ComplexMatrix& L,
                                const RegularizationOrder& p) {
    require_valid(F, "F");
    require_valid(L, "L");
    if (F.rows() != L.rows()) throw DomainError("factorization_check: dimension mismatch");
    const Eigen::Index n = F.rows();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    const ComplexMatrix H = F + L - F * L;

    const cplx lhs = regularized_det(p, H);

    // powers L^0..L^{m-1}, H^0..H^{m-1}
    const int m = p.corrections();
    std::vector<ComplexMatrix> Lpow{I}, Hpow{I};
    for (int k = 1; k < m; ++k) {
        Lpow.push_back(Lpow.back() * L);
        Hpow.push_back(Hpow.back() * H);
    }
    const ComplexMatrix FIL = F * (I - L);
    cplx exponent{0.0, 0.0};
    for (int k = 1; k <= m; ++k)
        for (int j = 0; j <= k - 1; ++j)
            exponent += (FIL * Lpow[static_cast<std::size_t>(j)] *
                         Hpow[static_cast<std::size_t>(k - 1 - j)])
                            .trace() /
                        static_cast<double>(k);
    const cplx rhs = det_I_minus(F) * regularized_det(p, L) * std::exp(exponent);

    BoundReport r = make_report("factorization_det_p", 1e-8, relative_difference(lhs, rhs), 0.0);
    r.with("p", p.p()).with("lhs", lhs).with("rhs", rhs);
    return r;
}

}  // namespace pertdet
