#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pertdet/determinants.hpp"
#include "pertdet/random.hpp"

using namespace pertdet;

namespace {

ComplexMatrix scalar(cplx z) { return ComplexMatrix::Constant(1, 1, z); }

// det_p(I - L) from eigenvalues found by the polynomial-root oracle.
cplx det_p_oracle(double p, const ComplexMatrix& L) {
    const int corr = static_cast<int>(std::ceil(p)) - 1;
    cplx acc = 1.0;
    for (auto l : oracle::poly_roots(oracle::charpoly(L))) {
        cplx e = 0.0, pw = 1.0;
        for (int k = 1; k <= corr; ++k) {
            pw *= l;
            e += pw / static_cast<double>(k);
        }
        acc *= (1.0 - l) * std::exp(e);
    }
    return acc;
}

}  // namespace

TEST_CASE("regularization order") {
    CHECK(RegularizationOrder(0.5).ceil_p() == 1);
    CHECK(RegularizationOrder(1.0).ceil_p() == 1);
    CHECK(RegularizationOrder(2.5).ceil_p() == 3);
    CHECK(RegularizationOrder(3.0).corrections() == 2);
    CHECK_THROWS_AS(RegularizationOrder(0.0), DomainError);
    CHECK_THROWS_AS(RegularizationOrder(-1.0), DomainError);
}

TEST_CASE("det(I - F)") {
    CHECK(det_I_minus(ComplexMatrix::Zero(3, 3)) == cplx(1.0));
    CHECK(std::abs(det_I_minus(scalar(2.0)) - cplx(-1.0)) < 1e-15);

    Rng rng(11);
    ComplexVector x(5), y(5);
    for (int i = 0; i < 5; ++i) {
        x(i) = rng.in_box(1.0);
        y(i) = rng.in_box(1.0);
    }
    const ComplexMatrix F = x * y.transpose();
    const cplx expected = 1.0 - (y.transpose() * x)(0, 0);
    CHECK(std::abs(det_I_minus(F) - expected) < 1e-13);
    CHECK(std::abs(oracle::gauss_det(ComplexMatrix::Identity(5, 5) - F) - expected) < 1e-13);
}

TEST_CASE("trace powers") {
    CHECK(trace_power(ComplexMatrix::Zero(2, 2), 3) == cplx(0.0));
    CHECK(std::abs(trace_power(scalar(cplx(0.3, 0.4)), 2) - cplx(0.3, 0.4) * cplx(0.3, 0.4)) < 1e-16);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const ComplexMatrix F = random_matrix(rng, 6);
        cplx s = 0.0;
        for (auto l : oracle::poly_roots(oracle::charpoly(F))) s += l * l * l;
        CHECK(std::abs(trace_power(F, 3) - s) < 1e-9 * std::max(1.0, std::abs(s)));

        const ComplexMatrix B = random_matrix(rng, 6);
        for (int k = 1; k <= 4; ++k)
            CHECK(std::abs(trace_power(F * B, k) - trace_power(B * F, k)) <
                  1e-9 * std::max(1.0, std::abs(trace_power(F * B, k))));
    }
    CHECK_THROWS_AS(trace_power(scalar(1.0), 0), DomainError);
}

TEST_CASE("regularized determinant examples") {
    for (double p : {0.5, 1.0, 2.0, 3.0, 4.0})
        CHECK(regularized_det(RegularizationOrder(p), ComplexMatrix::Zero(4, 4)) == cplx(1.0));

    const cplx mu(0.3, -0.7);
    const cplx d2 = regularized_det(RegularizationOrder(2.0), scalar(mu));
    CHECK(std::abs(d2 - (1.0 - mu) * std::exp(mu)) < 1e-15);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const ComplexMatrix L = random_matrix(rng, 6);
        const cplx d1 = regularized_det(RegularizationOrder(1.0), L);
        CHECK(std::abs(d1 - det_I_minus(L)) < 1e-14 * std::max(1.0, std::abs(d1)));
    }
}

TEST_CASE("trace and product forms agree with the root oracle") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        const int n = rng.uniform_int(1, 8);
        const ComplexMatrix L = random_with_norm(rng, n, rng.uniform(0.1, 2.0));
        for (double p : {0.5, 1.0, 2.0, 3.0, 4.0}) {
            const RegularizedDetForms f = regularized_det_forms(RegularizationOrder(p), L);
            CHECK(std::abs(f.trace_form - f.product_form) <= f.tolerance);
            const cplx ref = det_p_oracle(p, L);
            CHECK(std::abs(f.trace_form - ref) <= 1e-8 * std::max(std::abs(ref), 1e-3));
        }
    }
}

TEST_CASE("gamma constants") {
    CHECK(gamma_constant(0.5).value == 2.0);
    CHECK(gamma_constant(1.0).value == 1.0);
    CHECK(gamma_constant(2.0).value == 0.5);
    CHECK(gamma_constant(3.0).value == 1.0);
    CHECK(gamma_constant(4.0).value == 0.75);
    CHECK(gamma_constant(4.0).provenance == Provenance::paper);
    CHECK(gamma_constant(2.5).value == 1.0);
    CHECK(gamma_constant(2.5).provenance == Provenance::heuristic);
    CHECK(user_gamma(2.5, 3.0).provenance == Provenance::user);
    CHECK_THROWS_AS(user_gamma(2.0, 0.0), DomainError);
    CHECK_THROWS_AS(gamma_constant(0.0), DomainError);
}

TEST_CASE("growth bound") {
    const RegularizationOrder one(1.0);
    const BoundReport zero = growth_bound_check(one, ComplexMatrix::Zero(3, 3), gamma_constant(1.0));
    CHECK(zero.pass);
    CHECK(zero.bound_value == 1.0);
    CHECK(zero.observed == 1.0);

    const BoundReport vanish = growth_bound_check(one, scalar(1.0), gamma_constant(1.0));
    CHECK(vanish.pass);
    CHECK(vanish.observed == 0.0);
    CHECK(vanish.bound_value == doctest::Approx(std::exp(1.0)));

    CHECK_THROWS_AS(growth_bound_check(RegularizationOrder(2.0), scalar(0.1), gamma_constant(1.0)),
                    DomainError);

    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        const ComplexMatrix F = random_with_norm(rng, 10, rng.uniform(0.01, 2.0));
        for (double p : {0.5, 1.0, 2.0, 3.0, 4.0})
            CHECK(growth_bound_check(RegularizationOrder(p), F, gamma_constant(p)).pass);
    }
}

TEST_CASE("lipschitz bound") {
    const IdealSpec s1 = IdealSpec::schatten(1.0);
    Rng rng(5);
    const ComplexMatrix K = random_with_norm(rng, 4, 0.5);
    const BoundReport same = lipschitz_check(RegularizationOrder(1.0), s1, K, K);
    CHECK(same.pass);
    CHECK(same.observed == 0.0);

    const cplx mu(0.4, 0.2);
    const BoundReport diag = lipschitz_check(RegularizationOrder(1.0), s1, scalar(0.0), scalar(mu));
    CHECK(diag.pass);
    CHECK(diag.observed == doctest::Approx(std::abs(mu)));
    CHECK(diag.bound_value >= std::abs(mu));

    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng r(seed);
        const ComplexMatrix A = random_with_norm(r, 8, r.uniform(0.05, 1.5));
        const ComplexMatrix B = random_with_norm(r, 8, r.uniform(0.05, 1.5));
        for (const IdealSpec& I : {IdealSpec::schatten(1.0), IdealSpec::schatten(2.0), IdealSpec::schatten(0.5),
                                   IdealSpec::hille_tamarkin(1.5), IdealSpec::hille_tamarkin(3.0),
                                   IdealSpec::nuclear_upper()})
            CHECK(lipschitz_check(RegularizationOrder(I.p), I, A, B).pass);
    }
}

TEST_CASE("factorization identity") {
    Rng rng(21);
    const ComplexMatrix L = random_with_norm(rng, 5, 0.8);
    const ComplexMatrix F = random_with_norm(rng, 5, 0.6);
    const ComplexMatrix Z = ComplexMatrix::Zero(5, 5);
    for (double p : {2.0, 3.0, 4.0}) {
        const RegularizationOrder o(p);
        CHECK(factorization_check(Z, L, o).pass);
        CHECK(factorization_check(F, Z, o).pass);
        CHECK(factorization_check(F, L, o).pass);
    }
    // with L = 0 the right-hand side is det_p(I - F)
    const BoundReport r = factorization_check(F, Z, RegularizationOrder(3.0));
    CHECK(r.observed < 1e-12);
    CHECK(r.bound_value == 1e-8);
}

TEST_CASE("multiplicativity and commutation") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const ComplexMatrix F = random_with_norm(rng, 6, 0.9);
        const ComplexMatrix G = random_with_norm(rng, 6, 0.9);
        const ComplexMatrix B = random_matrix(rng, 6);
        CHECK(relative_difference(det_I_minus(F + G - F * G), det_I_minus(F) * det_I_minus(G)) < 1e-9);
        CHECK(relative_difference(det_I_minus(F * B), det_I_minus(B * F)) < 1e-9);
        for (double p : {0.5, 2.0, 3.0})
            CHECK(relative_difference(regularized_det(RegularizationOrder(p), F * B),
                                      regularized_det(RegularizationOrder(p), B * F)) < 1e-9);
    }
}

TEST_CASE("vanishing determinant iff I - F singular") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const ComplexMatrix F = random_with_norm(rng, 5, rng.uniform(0.1, 2.0));
        for (double p : {1.0, 2.0, 3.0}) {
            const bool nonzero = std::abs(regularized_det(RegularizationOrder(p), F)) > kVanishingThreshold;
            const bool invertible =
                smallest_singular_value(ComplexMatrix::Identity(5, 5) - F) > 1e-10 * (1 + operator_norm(F));
            CHECK(nonzero == invertible);
        }
        // force eigenvalue exactly 1: F = U diag(1, d...) U*
        ComplexVector d(5);
        d(0) = 1.0;
        for (int i = 1; i < 5; ++i) d(i) = rng.in_box(0.8);
        const ComplexMatrix S = normal_with_eigenvalues(rng, d);
        for (double p : {1.0, 2.0, 3.0})
            CHECK(std::abs(regularized_det(RegularizationOrder(p), S)) <= kVanishingThreshold);
        CHECK(smallest_singular_value(ComplexMatrix::Identity(5, 5) - S) <= 1e-10 * (1 + operator_norm(S)));
    }
}
