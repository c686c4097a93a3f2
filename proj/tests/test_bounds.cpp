#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pertdet/bounds.hpp"
#include "pertdet/campaign.hpp"
#include "pertdet/determinants.hpp"
#include "pertdet/random.hpp"

using namespace pertdet;

TEST_CASE("lambert W") {
    CHECK(lambert_w(0.0) == 0.0);
    CHECK(lambert_w(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 0; k <= 160; ++k) {
        const double x = std::pow(10.0, -8.0 + 0.1 * k);
        const double w = lambert_w(x);
        CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * (1.0 + x));
        CHECK(w == doctest::Approx(oracle::lambert_w_bisect(x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lambert_w(-0.1), DomainError);
}

TEST_CASE("phi_p values and limits") {
    // p = 1, x = 0.5: computed from the defining maximization
    const double s = 1.0, R = 0.5;
    const double m = oracle::grid_maximum([&](double t) { return (t - R) * std::log(s / t); }, R, s);
    CHECK(phi_p(1.0, 0.5) == doctest::Approx(1.0 / m).epsilon(1e-6));
    CHECK(phi_p(1.0, 0.5) == doctest::Approx(13.8).epsilon(1e-2));

    for (double p : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        CHECK(phi_p(p, 1e-8) == doctest::Approx(phi_p_limit_at_zero(p)).epsilon(1e-5));
        for (int i = 1; i <= 99; ++i) {
            const double x = i / 100.0;
            const double v = phi_p(p, x);
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
            CHECK(v <= phi_p_majorant(p, x) * (1 + 1e-12));
        }
        CHECK(std::isfinite(phi_p(p, 0.999)));
        CHECK(std::isfinite(phi_p(p, 0.001)));
    }
    CHECK_THROWS_AS(phi_p(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(phi_p(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(phi_p(0.0, 0.5), DomainError);
}

TEST_CASE("phi_p equals the grid-search maximum") {
    Rng rng(17);
    for (int t = 0; t < 40; ++t) {
        const double p = rng.uniform(0.5, 4.0);
        const double s = rng.uniform(0.5, 10.0);
        const double R = rng.uniform(0.01, 0.95) * s;
        const double m = oracle::grid_maximum([&](double u) { return std::pow(u - R, p) * std::log(s / u); }, R, s);
        CHECK(phi_p(p, R / s) == doctest::Approx(std::pow(s, p) / m).epsilon(1e-4));
    }
}

TEST_CASE("conformal radius of disk exteriors") {
    CHECK(disk_exterior_radius(1.0, 2.0) == 0.5);
    CHECK(disk_exterior_radius(3.0, 4.0) == 0.75);
    CHECK(disk_exterior_radius(1.0, 1e12) < 1e-11);
    CHECK_THROWS_AS(disk_exterior_radius(2.0, 2.0), DomainError);
    CHECK_THROWS_AS(disk_exterior_radius(0.0, 2.0), DomainError);
}

TEST_CASE("pseudospectral count bound") {
    CHECK(pseudospectral_count_bound(0.5, 0.5, 1.0, 1.0, 1.0, 0.0) == 0.0);
    CHECK(pseudospectral_count_bound(0.5, 0.5, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0 / std::log(2.0)));
    CHECK(pseudospectral_count_bound(0.5, 1e-300, 1.0, 1.0, 1.0, 1.0) < 0.01);
    CHECK_THROWS_AS(pseudospectral_count_bound(0.5, 1.0, 1.0, 1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(pseudospectral_count_bound(0.5, 0.0, 1.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("envelope bounds") {
    const ResolventEnvelope env{0.0, 1.0, true, std::nullopt};
    const EnvelopeBound zero = envelope_count_bound(2.0, env, 1.0, 1.0, 1.0, 0.0);
    CHECK(zero.tight == 0.0);
    CHECK(zero.relaxed == 0.0);
    // R = 0 uses the limit p e
    const EnvelopeBound at0 = envelope_count_bound(2.0, env, 2.0, 1.0, 1.0, 1.0);
    CHECK(at0.tight == doctest::Approx(2.0 * std::numbers::e / 4.0));
    CHECK_THROWS_AS(envelope_count_bound(1.0, {1.0, 1.0, true, std::nullopt}, 1.0, 1.0, 1.0, 1.0), DomainError);

    Rng rng(9);
    for (int t = 0; t < 200; ++t) {
        const double p = rng.uniform(0.5, 4.0);
        const double R = rng.uniform(0.0, 5.0);
        const double s = R + rng.uniform(0.01, 10.0);
        const double C = rng.uniform(0.5, 3.0), g = rng.uniform(0.5, 2.0), G = rng.uniform(0.5, 2.0);
        const double nK = rng.uniform(0.1, 3.0);
        const EnvelopeBound b = envelope_count_bound(s, {R, C, true, std::nullopt}, p, g, G, nK);
        CHECK(b.tight <= b.relaxed * (1 + 1e-12));
        if (R > 0.0) {
            const double m = oracle::grid_maximum([&](double u) { return std::pow(u - R, p) * std::log(s / u); }, R, s);
            CHECK(b.tight == doctest::Approx(std::pow(C * g, p) * G * std::pow(nK, p) / m).epsilon(1e-4));
        }
        // monotone: non-increasing in s, non-decreasing in normK
        const EnvelopeBound further = envelope_count_bound(s * 1.1, {R, C, true, std::nullopt}, p, g, G, nK);
        CHECK(further.tight <= b.tight * (1 + 1e-12));
        CHECK(further.relaxed <= b.relaxed * (1 + 1e-12));
        const EnvelopeBound bigger = envelope_count_bound(s, {R, C, true, std::nullopt}, p, g, G, nK * 1.1);
        CHECK(bigger.tight >= b.tight);
    }
}

TEST_CASE("norm exterior and unperturbed bounds") {
    CHECK(norm_exterior_count_bound(2.0, 1.0, 1.0, 1.0, 1.0, 0.0) == 0.0);
    CHECK(norm_exterior_count_bound(2.0, 1.0, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(norm_exterior_count_bound(1.0, 1.0, 1.0, 1.0, 1.0, 1.0), DomainError);
    // normA = 0 reduces to the unperturbed shape times (p+1)^{p+1}/p^p
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
        const double lhs = norm_exterior_count_bound(3.0, 0.0, p, 1.3, 0.7, 2.0);
        const double rhs = std::pow(1.3, p) * 0.7 * std::pow(p + 1, p + 1) / std::pow(p, p) * std::pow(2.0, p) / std::pow(3.0, p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        const EnvelopeBound e = envelope_count_bound(3.0, {1.0, 1.0, false, std::nullopt}, p, 1.3, 0.7, 2.0);
        CHECK(norm_exterior_count_bound(3.0, 1.0, p, 1.3, 0.7, 2.0) == doctest::Approx(e.relaxed).epsilon(1e-15));
    }
    CHECK(unperturbed_count_bound(1.0, 2.0, 1.0, 0.0) == 0.0);
    CHECK(unperturbed_count_bound(1.0, 2.0, 1.0, 2.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(unperturbed_count_bound(0.0, 2.0, 1.0, 2.0), DomainError);

    // A = 0: eigenvalues of K alone
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed);
        for (const IdealSpec& I : campaign_ideals()) {
            const ComplexMatrix K = random_matrix(rng, 6, rng.uniform(0.1, 2.0));
            const double nK = ideal_norm(I, K);
            const Spectrum e = eigenvalues(K);
            for (int i = 1; i <= 10; ++i) {
                const double s = 0.3 * i * operator_norm(K);
                std::size_t c = 0;
                for (auto z : e.eigenvalues) c += std::abs(z) > s;
                CHECK(static_cast<double>(c) <= unperturbed_count_bound(s, I.p, I.gamma_p, nK) * (1 + 1e-9));
            }
        }
    }
}

TEST_CASE("counting bounds dominate brute counts") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        for (const IdealSpec& I : campaign_ideals()) {
            const PerturbationProblem prob = random_problem(rng, 6, I);
            const double nA = ambient_norm_upper(I, prob.A);
            const double nK = ideal_norm(I, prob.K);
            const double G = gamma_constant(I.p).value;
            for (int i = 1; i <= 20; ++i) {
                const double s = nA + (3 * nA + 4 * nK) * i / 20.0;
                const double b = norm_exterior_count_bound(s, nA, I.p, I.gamma_p, G, nK);
                CHECK(static_cast<double>(brute_count(prob, Region::outside_radius(s)).count) <= b * (1 + 1e-9));
            }
        }
    }
}

TEST_CASE("Jensen identity") {
    CHECK(jensen_check({}, 0.5).pass);
    CHECK(jensen_check({}, 0.5).observed == 0.0);

    const std::vector<cplx> one{0.5};
    CHECK(jensen_counting_integral(one, 0.75) == doctest::Approx(std::log(1.5)));
    CHECK(jensen_mean_log_modulus(one, 0.75) == doctest::Approx(std::log(1.5)).epsilon(1e-9));

    const std::vector<cplx> three{0.3, cplx(0, 0.4), -0.6};
    const BoundReport r = jensen_check(three, 0.9);
    CHECK(r.pass);
    CHECK(r.observed < 1e-6);

    Rng rng(12);
    for (int t = 0; t < 100; ++t) {
        const int m = rng.uniform_int(0, 10);
        const double rad = rng.uniform(0.1, 0.95);
        std::vector<cplx> z;
        while (static_cast<int>(z.size()) < m) {
            const double mod = rng.uniform(0.02, 0.99);
            if (std::abs(mod - rad) > 0.01) z.push_back(std::polar(mod, rng.uniform(0, 6.3)));
        }
        CHECK(jensen_check(z, rad).pass);
    }
    const std::vector<cplx> on{0.5};
    CHECK_THROWS_AS(jensen_check(on, 0.5), DomainError);
    const std::vector<cplx> outside{1.5};
    CHECK_THROWS_AS(jensen_check(outside, 0.5), DomainError);
}

TEST_CASE("resolvent envelope certification") {
    const auto radii0 = default_envelope_radii(0.0);
    CHECK(radii0.size() == 50);
    CHECK(radii0.back() == doctest::Approx(100.0));
    CHECK(certify_envelope(ComplexMatrix::Zero(3, 3), 0.0, 1.0, radii0).certified);

    Rng rng(4);
    ComplexVector d(5);
    for (int i = 0; i < 5; ++i) d(i) = rng.in_box(1.0);
    const ComplexMatrix N = normal_with_eigenvalues(rng, d);
    const double R = spectral_radius(N);
    CHECK(certify_envelope(N, R, 1.0, default_envelope_radii(R)).certified);
    const ComplexMatrix D = d.asDiagonal();
    CHECK(certify_envelope(D, R, 1.0, default_envelope_radii(R), 64, IdealSpec::hille_tamarkin(1.5)).certified);

    ComplexMatrix J = ComplexMatrix::Zero(2, 2);
    J(0, 1) = 1.0;
    const ResolventEnvelope bad = certify_envelope(J, 0.0, 1.0, default_envelope_radii(0.0));
    CHECK_FALSE(bad.certified);
    REQUIRE(bad.witness.has_value());
    CHECK(oracle::jordan_resolvent_norm(*bad.witness) * std::abs(*bad.witness) > 1.0);

    std::vector<double> far;
    for (int i = 0; i < 20; ++i) far.push_back(1.0 + i);
    CHECK(certify_envelope(J, 0.0, 2.0, far).certified);
    for (double rho : far) CHECK(oracle::jordan_resolvent_norm(rho) * rho <= 2.0);

    CHECK_THROWS_AS(certify_envelope(N, 0.5 * R, 1.0, default_envelope_radii(R)), DomainError);
    CHECK_THROWS_AS(certify_envelope(N, R, 1.0, default_envelope_radii(R), 16), DomainError);
}

TEST_CASE("envelope count bound on certified normal problems") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        ComplexVector d(6);
        for (int i = 0; i < 6; ++i) d(i) = std::polar(rng.uniform(0.0, 1.5), rng.uniform(0.0, 6.3));
        const ComplexMatrix A = normal_with_eigenvalues(rng, d);
        const double R = spectral_radius(A);
        const ResolventEnvelope env = certify_envelope(A, R, 1.0, default_envelope_radii(R, 10));
        REQUIRE(env.certified);
        for (const IdealSpec& I : {IdealSpec::schatten(1.0), IdealSpec::schatten(2.0), IdealSpec::nuclear_upper()}) {
            ComplexMatrix K = random_matrix(rng, 6);
            K *= rng.uniform(0.05, 1.5) / ideal_norm(I, K);
            const PerturbationProblem prob(A, K, I);
            const double G = gamma_constant(I.p).value;
            for (int i = 1; i <= 20; ++i) {
                const double s = R + (3 * R + 4 * ideal_norm(I, K)) * i / 20.0;
                const EnvelopeBound b = envelope_count_bound(s, env, I.p, I.gamma_p, G, ideal_norm(I, K));
                CHECK(static_cast<double>(brute_count(prob, Region::outside_radius(s)).count) <= b.tight * (1 + 1e-9));
            }
        }
    }
}
