// pertdet: regularized determinants, perturbation determinants and eigenvalue
// counting bounds on dense complex matrices.
//
// Exit status: 0 all checks pass, 1 a verification failed, 2 usage or input error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pertdet/bounds.hpp"
#include "pertdet/campaign.hpp"
#include "pertdet/determinants.hpp"
#include "pertdet/io.hpp"
#include "pertdet/perturbation.hpp"
#include "pertdet/report.hpp"
#include "pertdet/semigroup.hpp"

namespace {

using namespace pertdet;

struct Globals {
    std::uint64_t seed = 42;
    int trials = 20;
    int dim = 6;
    std::optional<double> p;
    std::string ideal;
    std::vector<std::string> tol;
    std::string out;
    std::string format = "csv";
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

void print_json(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error("cannot write " + out);
    f << j.dump(2) << "\n";
}

// Reports go to --out when given, else to stdout. Returns the exit status.
int finish(const std::vector<BoundReport>& reports, const Globals& g) {
    const ReportFormat fmt = parse_report_format(g.format);
    if (g.out.empty()) {
        if (fmt == ReportFormat::csv) write_csv(std::cout, reports);
        else write_json(std::cout, reports);
    } else {
        emit_report(reports, fmt, g.out);
    }
    const std::size_t failures = count_failures(reports);
    if (failures > 0) std::cerr << failures << " of " << reports.size() << " checks failed\n";
    return failures == 0 ? 0 : 1;
}

PerturbationProblem load_problem(const std::string& path, const Globals& g) {
    json j = read_json_file(path);
    if (!g.ideal.empty()) j["ideal"] = g.ideal;
    if (j.contains("p") && !g.ideal.empty()) j.erase("p");
    return problem_from_json(j);
}

Region parse_region(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("region must be kind:args, got \"" + text + "\"");
    const std::string kind = text.substr(0, colon);
    std::vector<double> v;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("bad number \"" + tok + "\" in region \"" + text + "\"");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (kind == "outside" && v.size() == 1) return Region::outside_radius(v[0]);
    if (kind == "halfplane" && v.size() == 1) return Region::halfplane_re_gt(v[0]);
    if (kind == "disk" && v.size() == 3) return Region::disk({v[0], v[1]}, v[2]);
    throw ParseError("unknown region \"" + text + "\" (outside:s, halfplane:s, disk:re,im,r)");
}

CampaignConfig campaign_from_globals(const Globals& g, const std::string& config, const std::string& suite,
                                     const CLI::App& root) {
    CampaignConfig cfg = config.empty() ? CampaignConfig{} : campaign_config_from_json(read_json_file(config));
    if (config.empty() || root.count("--seed")) cfg.seed = g.seed;
    if (config.empty() || root.count("--trials")) cfg.trials = g.trials;
    if (config.empty() || root.count("--dim")) cfg.dimension = g.dim;
    if (config.empty() || root.count("--format")) cfg.format = parse_report_format(g.format);
    if (!suite.empty()) cfg.suite = parse_suite(suite);
    if (!g.out.empty()) cfg.output = g.out;
    for (const auto& kv : g.tol) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("--tol expects key=value, got \"" + kv + "\"");
        try {
            cfg.tolerances[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ParseError("--tol value is not a number in \"" + kv + "\"");
        }
    }
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regularized determinants, perturbation determinants and eigenvalue counting bounds"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Campaign seed");
    app.add_option("--trials", g.trials, "Number of seeded trials")->check(CLI::PositiveNumber);
    app.add_option("--dim", g.dim, "Maximum matrix dimension")->check(CLI::PositiveNumber);
    app.add_option("--p", g.p, "Regularization order p > 0");
    app.add_option("--ideal", g.ideal, "Ideal: schatten:P, ht:Q or nuclear");
    app.add_option("--tol", g.tol, "Tolerance override key=value (repeatable)");
    app.add_option("--out", g.out, "Output file (default stdout)");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"csv", "json"}));

    auto* det = app.add_subcommand("det", "det_p(I - L) for a matrix file");
    det->fallthrough();
    std::string det_matrix;
    det->add_option("matrix", det_matrix, "Matrix JSON file")->required();

    auto* pdet = app.add_subcommand("pdet", "D(lambda) = det_p(I - K (lambda - A)^{-1})");
    pdet->fallthrough();
    std::string pdet_problem;
    double lam_re = 0, lam_im = 0;
    pdet->add_option("problem", pdet_problem, "Problem JSON file")->required();
    pdet->add_option("--re", lam_re, "Re lambda")->required();
    pdet->add_option("--im", lam_im, "Im lambda");

    auto* count = app.add_subcommand("count", "Eigenvalues of A + K in a region");
    count->fallthrough();
    std::string count_problem, region_text;
    bool with_winding = false;
    count->add_option("problem", count_problem, "Problem JSON file")->required();
    count->add_option("--region", region_text, "outside:s, halfplane:s or disk:re,im,r")->required();
    count->add_flag("--winding", with_winding, "Also count zeros of D inside a disk by winding number");

    auto* bound = app.add_subcommand("bound", "Counting bounds: parameter sweep or problem check");
    bound->fallthrough();
    std::string sweep_file, bound_problem;
    int points = 50;
    auto* sweep_opt = bound->add_option("--sweep", sweep_file, "Bound-sweep JSON; writes CSV rows");
    bound->add_option("--problem", bound_problem, "Check the norm-exterior bound on a problem file")
        ->excludes(sweep_opt);
    bound->add_option("--points", points, "s-grid points over (||A||, 4||A|| + 4||K||]")
        ->check(CLI::PositiveNumber);

    auto* semi = app.add_subcommand("semigroup", "Strip counts against the semigroup bound");
    semi->fallthrough();
    std::string pair_file;
    std::vector<double> s_grid;
    semi->add_option("pair", pair_file, "Generator pair JSON file")->required();
    semi->add_option("--s", s_grid, "Strip abscissae s > 0 (default: 30-point log grid)");

    auto* verify = app.add_subcommand("verify", "Seeded verification campaign");
    verify->fallthrough();
    std::string config_file, suite;
    std::optional<std::uint64_t> replay;
    verify->add_option("--config", config_file, "Campaign config JSON");
    verify->add_option("--suite", suite, "determinants, ideals, perturbation, bounds, semigroup, all");
    verify->add_option("--trial-seed", replay, "Rerun a single trial from its logged seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*det) {
            const ComplexMatrix L = load_matrix(det_matrix);
            const RegularizationOrder order(g.p.value_or(1.0));
            const RegularizedDetForms forms = regularized_det_forms(order, L);
            json j = json::object();
            j["p"] = order.p();
            j["det_p"] = complex_json(regularized_det(order, L));
            j["trace_form"] = complex_json(forms.trace_form);
            j["product_form"] = complex_json(forms.product_form);
            print_json(j, g.out);
            return 0;
        }
        if (*pdet) {
            const PerturbationProblem prob = load_problem(pdet_problem, g);
            const cplx lambda{lam_re, lam_im};
            json j = json::object();
            j["lambda"] = complex_json(lambda);
            j["D"] = complex_json(perturbation_determinant(prob, lambda));
            j["p"] = prob.order.p();
            j["ideal"] = ideal_to_json(prob.ideal);
            print_json(j, g.out);
            return 0;
        }
        if (*count) {
            const PerturbationProblem prob = load_problem(count_problem, g);
            const Region region = parse_region(region_text);
            const CountResult brute = brute_count(prob, region);
            json j = json::object();
            j["region"] = region.describe();
            j["count"] = brute.count;
            j["warnings"] = brute.warnings;
            int rc = 0;
            if (with_winding) {
                if (region.kind != Region::Kind::disk) throw ParseError("--winding needs a disk region");
                const WindingResult w = winding_zero_count_detail(prob, Contour{region.center, region.r, 256});
                j["winding"] = w.count;
                j["samples"] = w.samples;
                if (static_cast<std::size_t>(w.count) != brute.count) rc = 1;
            }
            print_json(j, g.out);
            return rc;
        }
        if (*bound) {
            if (!sweep_file.empty()) {
                const BoundSweep sw = bound_sweep_from_json(read_json_file(sweep_file));
                if (g.out.empty()) {
                    write_bound_sweep(std::cout, sw);
                } else {
                    std::ofstream f(g.out, std::ios::binary);
                    if (!f) throw Error("cannot write " + g.out);
                    write_bound_sweep(f, sw);
                }
                return 0;
            }
            if (bound_problem.empty()) throw ParseError("bound needs --sweep or --problem");
            const PerturbationProblem prob = load_problem(bound_problem, g);
            const double normA = ambient_norm_upper(prob.ideal, prob.A);
            const double normK = ideal_norm(prob.ideal, prob.K);
            const double Gamma = gamma_constant(prob.order.p()).value;
            std::vector<BoundReport> reports;
            for (int i = 1; i <= points; ++i) {
                const double s = normA + (3.0 * normA + 4.0 * normK) * i / points;
                const CountResult c = brute_count(prob, Region::outside_radius(s));
                BoundReport r = make_report(
                    "norm_exterior_count",
                    norm_exterior_count_bound(s, normA, prob.order.p(), prob.ideal.gamma_p, Gamma, normK),
                    static_cast<double>(c.count));
                r.with("ideal", prob.ideal.label).with("s", s).with("normA", normA).with("normK", normK)
                    .with("ratio", r.bound_value > 0 ? r.observed / r.bound_value : 0.0);
                r.warnings = c.warnings;
                reports.push_back(std::move(r));
            }
            return finish(reports, g);
        }
        if (*semi) {
            json j = read_json_file(pair_file);
            if (!g.ideal.empty()) j["ideal"] = g.ideal;
            const GeneratorPair pair = pair_from_json(j);
            if (s_grid.empty()) {
                double top = 0.0;
                for (const auto& z : eigenvalues(pair.H).eigenvalues) top = std::max(top, z.real());
                const double hi = std::max(1.0, 2.0 * top);
                for (int i = 0; i < 30; ++i) s_grid.push_back(0.01 * std::pow(hi / 0.01, i / 29.0));
            }
            return finish(semigroup_reports(pair, s_grid, true), g);
        }
        if (*verify) {
            const CampaignConfig cfg = campaign_from_globals(g, config_file, suite, app);
            if (replay) {
                Globals local = g;
                local.format = cfg.format == ReportFormat::csv ? "csv" : "json";
                return finish(run_trial(cfg.suite, *replay, cfg), local);
            }
            CampaignConfig run = cfg;
            const bool to_stdout = run.output.empty();
            const CampaignResult res = run_campaign(run);
            if (to_stdout) {
                if (run.format == ReportFormat::csv) write_csv(std::cout, res.reports);
                else write_json(std::cout, res.reports);
            }
            for (auto seed : res.failing_seeds) std::cerr << "failing trial seed: " << seed << "\n";
            std::cerr << res.reports.size() << " checks, " << count_failures(res.reports) << " failed\n";
            return res.exit_code;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
