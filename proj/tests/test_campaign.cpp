#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pertdet/campaign.hpp"

using namespace pertdet;
namespace fs = std::filesystem;

namespace {

std::string csv(const std::vector<BoundReport>& reports) {
    std::ostringstream out;
    write_csv(out, reports);
    return out.str();
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string input(const BoundReport& r, const std::string& key) {
    for (const auto& [k, v] : r.inputs)
        if (k == key) return v;
    return "";
}

}  // namespace

TEST_CASE("report emission") {
    CHECK(csv({}) == "bound_id,inputs,bound_value,observed,margin,pass\n");

    BoundReport r = make_report("trivial", 1.0, 0.0);
    const std::string two = csv({r});
    CHECK(lines(two) == 2);
    CHECK(two.find("trivial,,1,0,1,true\n") != std::string::npos);

    r.with("lambda", cplx(1.0, -2.0)).with("note", std::string("a,b"));
    const std::string quoted = csv({r});
    CHECK(lines(quoted) == 2);

    std::ostringstream js;
    write_json(js, {r});
    const auto parsed = nlohmann::json::parse(js.str());
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0]["bound_id"] == "trivial");
    CHECK(parsed[0]["pass"] == true);
    CHECK(parsed[0]["margin"] == 1.0);

    const BoundReport bad = make_report("x", 1.0, 2.0);
    CHECK_FALSE(bad.pass);
    CHECK(bad.margin == -1.0);
    CHECK(count_failures({r, bad, bad}) == 2);
    CHECK(make_report("edge", 1.0, 1.0 + 5e-10).pass);
    CHECK_FALSE(make_report("edge", 1.0, 1.0 + 2e-9).pass);

    CHECK_THROWS_AS(emit_report({r}, ReportFormat::csv, "/nonexistent_dir/report.csv"), Error);
}

TEST_CASE("campaigns are deterministic and complete") {
    CampaignConfig cfg;
    cfg.seed = 42;
    cfg.trials = 6;
    cfg.dimension = 4;
    cfg.suite = Suite::all;
    const CampaignResult a = run_campaign(cfg);
    const CampaignResult b = run_campaign(cfg);
    CHECK(csv(a.reports) == csv(b.reports));
    CHECK(a.exit_code == 0);
    CHECK(a.failing_seeds.empty());
    CHECK(count_failures(a.reports) == 0);
    for (const char* suite : {"determinants", "ideals", "perturbation", "bounds", "semigroup"})
        CHECK(std::any_of(a.reports.begin(), a.reports.end(),
                          [&](const BoundReport& r) { return input(r, "suite") == suite; }));

    const fs::path out = fs::temp_directory_path() / "pertdet_campaign.csv";
    cfg.output = out;
    const CampaignResult c = run_campaign(cfg);
    const std::string text = read_text(out);
    CHECK(text == csv(a.reports));
    CHECK(lines(text) == c.reports.size() + 1);

    cfg.seed = 43;
    cfg.output.clear();
    CHECK(csv(run_campaign(cfg).reports) != csv(a.reports));
}

TEST_CASE("thread count does not change the report") {
    CampaignConfig cfg;
    cfg.trials = 8;
    cfg.dimension = 4;
    cfg.suite = Suite::bounds;
    setenv("PERTDET_THREADS", "1", 1);
    CHECK(worker_count(100) == 1);
    const std::string serial = csv(run_campaign(cfg).reports);
    setenv("PERTDET_THREADS", "4", 1);
    CHECK(worker_count(100) == 4);
    CHECK(worker_count(2) == 2);
    const std::string parallel = csv(run_campaign(cfg).reports);
    unsetenv("PERTDET_THREADS");
    CHECK(serial == parallel);
    CHECK(worker_count(0) == 1);
}

TEST_CASE("trials replay from their logged seed") {
    CampaignConfig cfg;
    cfg.trials = 3;
    cfg.dimension = 5;
    cfg.suite = Suite::perturbation;
    const CampaignResult all = run_campaign(cfg);
    const std::uint64_t second = trial_seed(cfg.seed, 1);
    std::vector<BoundReport> logged;
    for (const auto& r : all.reports)
        if (input(r, "trial_seed") == std::to_string(second)) logged.push_back(r);
    REQUIRE_FALSE(logged.empty());
    CHECK(csv(run_trial(cfg.suite, second, cfg)) == csv(logged));
}

TEST_CASE("failures set the exit code and list seeds") {
    CampaignConfig cfg;
    cfg.trials = 3;
    cfg.dimension = 4;
    cfg.suite = Suite::determinants;
    // an absurdly strict factorization tolerance forces failures
    cfg.tolerances["factorization"] = 1e-300;
    const CampaignResult r = run_campaign(cfg);
    CHECK(r.exit_code == 1);
    REQUIRE_FALSE(r.failing_seeds.empty());
    for (std::uint64_t seed : r.failing_seeds) {
        const auto replay = run_trial(cfg.suite, seed, cfg);
        CHECK(count_failures(replay) > 0);
    }
}

TEST_CASE("config validation") {
    CampaignConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(run_campaign(cfg), DomainError);
    cfg.trials = 1;
    cfg.tolerances["nonsense"] = 1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    CHECK(parse_suite("semigroup") == Suite::semigroup);
    CHECK(to_string(Suite::all) == "all");
    CHECK_THROWS_AS(parse_suite("x"), DomainError);
}

TEST_CASE("semigroup suite honours the configured grids") {
    CampaignConfig cfg;
    cfg.trials = 2;
    cfg.dimension = 4;
    cfg.suite = Suite::semigroup;
    cfg.s_grid = {0.2, 0.7};
    cfg.ht_q = {2.5};
    const CampaignResult r = run_campaign(cfg);
    CHECK(r.exit_code == 0);
    std::size_t ht = 0;
    for (const auto& rep : r.reports) {
        if (rep.bound_id == "semigroup_hille_tamarkin") {
            ++ht;
            CHECK(input(rep, "q") == "2.5");
        }
        if (rep.bound_id == "semigroup_strip") CHECK((input(rep, "s") == "0.2" || input(rep, "s") == "0.7"));
    }
    CHECK(ht == 2 * 2);
}
