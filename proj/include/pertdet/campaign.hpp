#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pertdet/ideals.hpp"
#include "pertdet/perturbation.hpp"
#include "pertdet/random.hpp"
#include "pertdet/report.hpp"
#include "pertdet/semigroup.hpp"

namespace pertdet {

enum class Suite { determinants, ideals, perturbation, bounds, semigroup, all };

std::string to_string(Suite suite);
Suite parse_suite(const std::string& name);

struct CampaignConfig {
    std::uint64_t seed = 42;
    int trials = 20;
    int dimension = 6;
    Suite suite = Suite::all;
    // Recognized keys: det_consistency (default 1e-9), factorization (1e-8).
    std::map<std::string, double> tolerances;
    // Semigroup suite: strip abscissae (empty: derived from each trial's spectrum)
    // and the Hille-Tamarkin exponents q.
    std::vector<double> s_grid;
    std::vector<double> ht_q{1.5, 2.0, 3.0};
    std::filesystem::path output;  // empty: no file
    ReportFormat format = ReportFormat::csv;

    double tolerance(const std::string& key, double fallback) const;
    /// Throws DomainError on trials < 1, dimension < 1, unknown tolerance keys,
    /// non-positive s_grid entries or q <= 1.
    void validate() const;
};

/// {"seed", "trials", "dimension", "suite", "tolerances", "s_grid", "q", "output", "format"};
/// fields may be omitted. Throws ParseError on schema violations.
CampaignConfig campaign_config_from_json(const nlohmann::json& j);

struct CampaignResult {
    std::vector<BoundReport> reports;
    std::vector<std::uint64_t> failing_seeds;  // trial seeds, in trial order
    int exit_code = 0;
};

/// Reports for one trial of `suite` driven by `seed`; the replay entry point.
std::vector<BoundReport> run_trial(Suite suite, std::uint64_t seed, const CampaignConfig& cfg);

/// Runs trial_seed(cfg.seed, i) for i < trials on a worker pool (capped by
/// PERTDET_THREADS) and concatenates the reports in trial order. Writes the
/// report to cfg.output when set.
CampaignResult run_campaign(const CampaignConfig& cfg);

/// Worker count: PERTDET_THREADS when set and positive, else hardware
/// concurrency, never more than `jobs`.
int worker_count(int jobs);

// Seeded case generators shared by the suites.

/// Ideal kinds exercised by the campaigns: schatten(1), schatten(2),
/// hille_tamarkin(1.5), hille_tamarkin(3), nuclear_upper.
std::vector<IdealSpec> campaign_ideals();

/// Random A with ||A|| in [0.5, 2] and K with ideal norm in [0.05, 1.5].
PerturbationProblem random_problem(Rng& rng, int n, const IdealSpec& ideal);

/// Normal H0 with eigenvalues in the closed left half-plane and
/// H = H0 + a random perturbation of spectral norm in [0.1, 2].
GeneratorPair random_generator_pair(Rng& rng, int n, const IdealSpec& ideal, double a);

/// Symmetric tridiagonal generator: off-diagonal 1, diagonal -(2 + c_i) with
/// c_i in [0, 0.5]. It has nonnegative off-diagonal part and non-positive row
/// sums, so e^{tH0} is a contraction on every l_q.
ComplexMatrix tridiagonal_generator(Rng& rng, int n);

/// Rank-`rank` perturbation u v^T with entries in [0, w].
ComplexMatrix low_rank_perturbation(Rng& rng, int n, int rank, double w);

}  // namespace pertdet
