#pragma once

#include <cstdint>
#include <random>

#include "pertdet/types.hpp"

namespace pertdet {

/// Seeded 64-bit generator. Uniform deviates are built from raw engine bits,
/// so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                     // [0, 1)
    double uniform(double lo, double hi); // [lo, hi)
    int uniform_int(int lo, int hi);      // [lo, hi]
    double normal();
    cplx in_box(double half_width);       // uniform in [-w,w] x [-w,w]

private:
    std::mt19937_64 engine_;
};

/// Independent stream seed for trial `index` of a campaign seeded by `base`.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

/// Entries uniform in the complex box [-w,w]^2.
ComplexMatrix random_matrix(Rng& rng, int n, double half_width = 1.0);

/// Random matrix rescaled to the given operator norm.
ComplexMatrix random_with_norm(Rng& rng, int n, double target_norm);

/// Haar-like unitary from the QR factor of a Gaussian matrix.
ComplexMatrix random_unitary(Rng& rng, int n);

/// U diag(d) U* for a random unitary U.
ComplexMatrix normal_with_eigenvalues(Rng& rng, const ComplexVector& d);

}  // namespace pertdet
