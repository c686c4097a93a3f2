#include "pertdet/random.hpp"

#include <cmath>
#include <numbers>

#include "pertdet/linalg.hpp"

namespace pertdet {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
    // Box-Muller; one deviate per call keeps the stream simple to replay.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::in_box(double half_width) {
    const double re = uniform(-half_width, half_width);
    const double im = uniform(-half_width, half_width);
    return {re, im};
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 finalizer over (base, index)
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ComplexMatrix random_matrix(Rng& rng, int n, double half_width) {
    ComplexMatrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = rng.in_box(half_width);
    return M;
}

ComplexMatrix random_with_norm(Rng& rng, int n, double target_norm) {
    ComplexMatrix M = random_matrix(rng, n);
    const double norm = operator_norm(M);
    if (norm > 0.0) M *= target_norm / norm;
    return M;
}

ComplexMatrix random_unitary(Rng& rng, int n) {
    ComplexMatrix G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = cplx{rng.normal(), rng.normal()};
    Eigen::HouseholderQR<ComplexMatrix> qr(G);
    ComplexMatrix Q = qr.householderQ();
    const ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const double mod = std::abs(R(j, j));
        if (mod > 0.0) Q.col(j) *= R(j, j) / mod;
    }
    return Q;
}

ComplexMatrix normal_with_eigenvalues(Rng& rng, const ComplexVector& d) {
    const auto n = static_cast<int>(d.size());
    const ComplexMatrix U = random_unitary(rng, n);
    return U * d.asDiagonal() * U.adjoint();
}

}  // namespace pertdet
