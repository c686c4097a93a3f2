#include "pertdet/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pertdet {

std::string to_string(IdealKind kind) {
    switch (kind) {
        case IdealKind::schatten: return "schatten";
        case IdealKind::hille_tamarkin: return "hille_tamarkin";
        case IdealKind::nuclear_upper: return "nuclear_upper";
    }
    return "unknown";
}

IdealKind parse_ideal_kind(const std::string& name) {
    if (name == "schatten") return IdealKind::schatten;
    if (name == "hille_tamarkin") return IdealKind::hille_tamarkin;
    if (name == "nuclear_upper") return IdealKind::nuclear_upper;
    throw DomainError("unknown ideal kind '" + name + "'");
}

double snumber_eigenvalue_constant(double p) {
    return std::pow(2.0, 1.0 / p) * std::sqrt(2.0 * std::numbers::e);
}

IdealSpec IdealSpec::schatten(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("schatten exponent must be positive");
    IdealSpec s;
    s.kind = IdealKind::schatten;
    s.p = p;
    s.gamma_p = snumber_eigenvalue_constant(p);
    // (sum s^p)^{1/p} is only a quasi-norm below p = 1.
    s.q_triangle = p < 1.0 ? std::pow(2.0, 1.0 / p - 1.0) : 1.0;
    s.label = "schatten(" + format_double(p) + ")";
    return s;
}

IdealSpec IdealSpec::hille_tamarkin(double q, std::vector<double> weights) {
    if (!(q > 1.0) || !std::isfinite(q))
        throw DomainError("hille_tamarkin requires 1 < q < infinity");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("measure weights must be positive");
    IdealSpec s;
    s.kind = IdealKind::hille_tamarkin;
    s.q = q;
    s.p = std::max(2.0, q);
    s.gamma_p = 1.0;
    s.q_triangle = 1.0;
    s.weights = std::move(weights);
    s.label = "hille_tamarkin(" + format_double(q) + ")";
    return s;
}

IdealSpec IdealSpec::nuclear_upper() {
    IdealSpec s;
    s.kind = IdealKind::nuclear_upper;
    s.p = 2.0;
    s.gamma_p = 1.0;
    s.q_triangle = 1.0;
    s.label = "nuclear_upper";
    return s;
}

IdealSpec IdealSpec::with_gamma(double gamma) const {
    IdealSpec s = *this;
    s.gamma_p = gamma;
    s.label += "[gamma=" + format_double(gamma) + "]";
    s.validate();
    return s;
}

void IdealSpec::validate() const {
    if (!(gamma_p > 0.0)) throw DomainError("gamma_p must be positive");
    if (!(q_triangle >= 1.0)) throw DomainError("quasi-triangle constant must be >= 1");
    switch (kind) {
        case IdealKind::schatten:
            if (!(p > 0.0)) throw DomainError("schatten exponent must be positive");
            break;
        case IdealKind::hille_tamarkin:
            if (!(q > 1.0) || !std::isfinite(q))
                throw DomainError("hille_tamarkin requires 1 < q < infinity");
            if (p != std::max(2.0, q))
                throw DomainError("hille_tamarkin eigenvalue exponent must be max(2, q)");
            break;
        case IdealKind::nuclear_upper:
            if (p != 2.0) throw DomainError("nuclear ideal has eigenvalue exponent 2");
            break;
    }
}

namespace {

double lp_sum(std::span<const double> values, double p) {
    // scaled to avoid overflow in |x|^p
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v) / scale, p);
    return scale * std::pow(acc, 1.0 / p);
}

std::vector<double> measure_weights(const IdealSpec& spec, Eigen::Index n) {
    if (spec.weights.empty()) return std::vector<double>(static_cast<std::size_t>(n), 1.0);
    if (static_cast<Eigen::Index>(spec.weights.size()) != n)
        throw DomainError("measure has " + std::to_string(spec.weights.size()) +
                          " weights for a matrix of dimension " + std::to_string(n));
    return spec.weights;
}

double hille_tamarkin_norm(const IdealSpec& spec, const ComplexMatrix& L) {
    const double q = spec.q;
    const double qd = q / (q - 1.0);
    const auto w = measure_weights(spec, L.rows());
    std::vector<double> rows(static_cast<std::size_t>(L.rows()));
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        std::vector<double> kernel(static_cast<std::size_t>(L.cols()));
        for (Eigen::Index j = 0; j < L.cols(); ++j) {
            // kernel value times mu_j^{1/q'} so that the inner sum is the weighted l_q' norm
            const auto uj = static_cast<std::size_t>(j);
            kernel[uj] = std::abs(L(i, j)) / w[uj] * std::pow(w[uj], 1.0 / qd);
        }
        const auto ui = static_cast<std::size_t>(i);
        rows[ui] = lp_sum(kernel, qd) * std::pow(w[ui], 1.0 / q);
    }
    return lp_sum(rows, q);
}

/// W^{1/q} M W^{-1/q}: the matrix of M acting on unweighted l_q.
ComplexMatrix unweighted(const IdealSpec& spec, const ComplexMatrix& M) {
    if (spec.weights.empty()) return M;
    const auto w = measure_weights(spec, M.rows());
    ComplexMatrix out = M;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            out(i, j) *= std::pow(w[static_cast<std::size_t>(i)] / w[static_cast<std::size_t>(j)],
                                  1.0 / spec.q);
    return out;
}

double vec_lq(const ComplexVector& x, double q) {
    std::vector<double> mods(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) mods[static_cast<std::size_t>(i)] = std::abs(x(i));
    return lp_sum(mods, q);
}

/// Normalized dual vector: <dual(y), y> = ||y||_q, ||dual(y)||_{q'} = 1.
ComplexVector dual_vector(const ComplexVector& y, double q) {
    const double norm = vec_lq(y, q);
    ComplexVector d = ComplexVector::Zero(y.size());
    if (norm == 0.0) return d;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double m = std::abs(y(i));
        if (m == 0.0) continue;
        d(i) = std::pow(m / norm, q - 1.0) * (std::conj(y(i)) / m);
    }
    return d;
}

/// Higham's power method for ||M||_{q->q}; every iterate gives a valid lower bound.
double lq_norm_lower(const ComplexMatrix& M, double q) {
    const double qd = q / (q - 1.0);
    const Eigen::Index n = M.cols();
    double best = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) best = std::max(best, vec_lq(M.col(j), q));

    std::vector<ComplexVector> starts;
    starts.push_back(ComplexVector::Ones(n));
    for (Eigen::Index j = 0; j < n; ++j)
        if (vec_lq(M.col(j), q) == best) {
            starts.push_back(ComplexVector::Unit(n, j));
            break;
        }
    ComplexVector alt(n);
    for (Eigen::Index j = 0; j < n; ++j)
        alt(j) = std::polar(1.0 + 0.5 * static_cast<double>(j % 3), 0.7 * static_cast<double>(j));
    starts.push_back(alt);

    for (ComplexVector x : starts) {
        x /= vec_lq(x, q);
        for (int it = 0; it < 100; ++it) {
            const ComplexVector y = M * x;
            const double ny = vec_lq(y, q);
            best = std::max(best, ny);
            if (ny == 0.0) break;
            // gradient direction: z = M^T dual(y) (bilinear pairing)
            const ComplexVector z = M.transpose() * dual_vector(y, q);
            const double nz = vec_lq(z, qd);
            if (nz <= ny * (1.0 + 1e-13)) break;
            // x = dual of z in l_q', normalized in l_q
            ComplexVector next = dual_vector(z, qd);
            const double nn = vec_lq(next, q);
            if (nn == 0.0) break;
            x = next / nn;
        }
    }
    return best;
}

double lq_norm_riesz_thorin(const ComplexMatrix& M, double q) {
    const double col = M.cwiseAbs().colwise().sum().maxCoeff();  // ||M||_{1->1}
    const double row = M.cwiseAbs().rowwise().sum().maxCoeff();  // ||M||_{inf->inf}
    if (col == 0.0 || row == 0.0) return 0.0;
    return std::pow(col, 1.0 / q) * std::pow(row, 1.0 - 1.0 / q);
}

}  // namespace

double eigenvalue_lp(std::span<const cplx> eigenvalues, double p) {
    if (!(p > 0.0)) throw DomainError("eigenvalue_lp requires p > 0");
    std::vector<double> mods;
    mods.reserve(eigenvalues.size());
    for (const auto& z : eigenvalues) mods.push_back(std::abs(z));
    return lp_sum(mods, p);
}

double eigenvalue_lp(const ComplexMatrix& L, double p) {
    return eigenvalue_lp(eigenvalues(L).eigenvalues, p);
}

double ideal_norm(const IdealSpec& spec, const ComplexMatrix& L) {
    require_valid(L);
    switch (spec.kind) {
        case IdealKind::schatten: return lp_sum(singular_values(L).values, spec.p);
        case IdealKind::nuclear_upper: return lp_sum(singular_values(L).values, 1.0);
        case IdealKind::hille_tamarkin: return hille_tamarkin_norm(spec, L);
    }
    throw DomainError("unknown ideal kind");
}

double ambient_norm_upper(const IdealSpec& spec, const ComplexMatrix& M) {
    if (spec.kind != IdealKind::hille_tamarkin || spec.q == 2.0) {
        if (spec.kind == IdealKind::hille_tamarkin && !spec.weights.empty())
            return operator_norm(unweighted(spec, M));
        return operator_norm(M);
    }
    return lq_norm_riesz_thorin(unweighted(spec, M), spec.q);
}

double ambient_norm_lower(const IdealSpec& spec, const ComplexMatrix& M) {
    if (spec.kind != IdealKind::hille_tamarkin || spec.q == 2.0)
        return ambient_norm_upper(spec, M);
    return lq_norm_lower(unweighted(spec, M), spec.q);
}

BoundReport a4_check(const IdealSpec& spec, const ComplexMatrix& L) {
    const double lhs = eigenvalue_lp(L, spec.p);
    const double norm = ideal_norm(spec, L);
    BoundReport r = make_report("a4_eigenvalue_lp", spec.gamma_p * norm, lhs);
    r.with("ideal", spec.label).with("p", spec.p).with("gamma_p", spec.gamma_p).with("ideal_norm", norm);
    return r;
}

namespace {

double ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace

BoundReport a2_a3_check(const IdealSpec& spec, const ComplexMatrix& A, const ComplexMatrix& L,
                        const ComplexMatrix& B) {
    if (A.rows() != L.rows() || L.cols() != B.rows() || A.cols() != L.rows() ||
        B.cols() != L.cols())
        throw DomainError("a2_a3_check: non-conformable dimensions");
    const double norm_L = ideal_norm(spec, L);
    const double op_L = ambient_norm_lower(spec, L);
    const double norm_ALB = ideal_norm(spec, A * L * B);
    const double op_A = ambient_norm_upper(spec, A);
    const double op_B = ambient_norm_upper(spec, B);

    const double domination = ratio(op_L, norm_L);
    const double ideal_ineq = ratio(norm_ALB, op_A * norm_L * op_B);
    BoundReport r = make_report("a2_a3_ideal", 1.0, std::max(domination, ideal_ineq));
    r.with("ideal", spec.label)
        .with("op_norm_L", op_L)
        .with("ideal_norm_L", norm_L)
        .with("ideal_norm_ALB", norm_ALB)
        .with("op_norm_A", op_A)
        .with("op_norm_B", op_B);
    return r;
}

BoundReport quasi_triangle_check(const IdealSpec& spec, const ComplexMatrix& K,
                                 const ComplexMatrix& L) {
    const double lhs = ideal_norm(spec, K + L);
    const double rhs = spec.q_triangle * (ideal_norm(spec, K) + ideal_norm(spec, L));
    BoundReport r = make_report("quasi_triangle", rhs, lhs);
    r.with("ideal", spec.label).with("q_triangle", spec.q_triangle);
    return r;
}

}  // namespace pertdet
