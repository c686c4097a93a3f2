#include "pertdet/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pertdet/bounds.hpp"
#include "pertdet/report.hpp"

namespace pertdet {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ParseError((where.empty() ? std::string("<json>") : where) + ": " + what);
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "non-finite value");
    return v;
}

const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
    return *it;
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (j.is_number()) return {number_at(j, where)};
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], where + "/" + std::to_string(i)));
    return out;
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
    const json& jn = member(j, "n", where);
    if (!jn.is_number_integer() || jn.get<long long>() < 1) fail(where + "/n", "n must be a positive integer");
    const auto n = static_cast<Eigen::Index>(jn.get<long long>());
    const json& data = member(j, "data", where);
    if (!data.is_array()) fail(where + "/data", "expected an array of [re, im] pairs");
    if (data.size() != static_cast<std::size_t>(n * n))
        fail(where + "/data", "expected " + std::to_string(n * n) + " entries for a square " +
                                  std::to_string(n) + "x" + std::to_string(n) + " matrix, found " +
                                  std::to_string(data.size()));
    ComplexMatrix M(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k) {
        const std::string loc = where + "/data/" + std::to_string(k);
        const json& e = data[static_cast<std::size_t>(k)];
        if (!e.is_array() || e.size() != 2) fail(loc, "expected [re, im]");
        M(k / n, k % n) = cplx(number_at(e[0], loc + "/0"), number_at(e[1], loc + "/1"));
    }
    return M;
}

json matrix_to_json(const ComplexMatrix& M) {
    require_valid(M, "matrix");
    json data = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index k = 0; k < M.cols(); ++k)
            data.push_back(json::array({M(i, k).real(), M(i, k).imag()}));
    json out = json::object();
    out["n"] = M.rows();
    out["data"] = std::move(data);
    return out;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": byte " + std::to_string(e.byte) + ": malformed JSON (" +
                         e.what() + ")");
    }
}

ComplexMatrix load_matrix(const std::filesystem::path& path) {
    return matrix_from_json(read_json_file(path), path.string() + "#");
}

std::string dump_matrix(const ComplexMatrix& M) { return matrix_to_json(M).dump() + "\n"; }

void save_matrix(const std::filesystem::path& path, const ComplexMatrix& M) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << dump_matrix(M);
}

IdealSpec ideal_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_ideal_arg(j.get<std::string>());
        } catch (const DomainError& e) {
            fail(where, e.what());
        }
    }
    const json& kind_j = member(j, "kind", where);
    if (!kind_j.is_string()) fail(where + "/kind", "expected a string");
    IdealSpec spec;
    try {
        switch (parse_ideal_kind(kind_j.get<std::string>())) {
            case IdealKind::schatten:
                spec = IdealSpec::schatten(j.contains("p") ? number_at(j["p"], where + "/p") : 1.0);
                break;
            case IdealKind::hille_tamarkin: {
                std::vector<double> w;
                if (j.contains("weights")) w = number_list(j["weights"], where + "/weights");
                spec = IdealSpec::hille_tamarkin(j.contains("q") ? number_at(j["q"], where + "/q") : 2.0,
                                                 std::move(w));
                break;
            }
            case IdealKind::nuclear_upper: spec = IdealSpec::nuclear_upper(); break;
        }
        for (const char* key : {"gamma_p", "gamma"})
            if (j.contains(key)) {
                const double g = number_at(j[key], where + "/" + key);
                if (g != spec.gamma_p) spec = spec.with_gamma(g);
            }
        if (j.contains("q_triangle")) {
            const double qt = number_at(j["q_triangle"], where + "/q_triangle");
            if (qt < spec.q_triangle)
                fail(where + "/q_triangle", "below the kind's quasi-triangle constant " +
                                                format_double(spec.q_triangle));
            spec.q_triangle = qt;
        }
        spec.validate();
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
    return spec;
}

json ideal_to_json(const IdealSpec& spec) {
    json out = json::object();
    out["kind"] = to_string(spec.kind);
    out["p"] = spec.p;
    if (spec.kind == IdealKind::hille_tamarkin) {
        out["q"] = spec.q;
        if (!spec.weights.empty()) out["weights"] = spec.weights;
    }
    out["gamma_p"] = spec.gamma_p;
    out["q_triangle"] = spec.q_triangle;
    return out;
}

IdealSpec parse_ideal_arg(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    double value = 0.0;
    bool has_value = false;
    if (colon != std::string::npos) {
        std::istringstream is(text.substr(colon + 1));
        if (!(is >> value) || !is.eof()) throw DomainError("bad ideal parameter in \"" + text + "\"");
        has_value = true;
    }
    if (kind == "schatten" || kind == "sp") return IdealSpec::schatten(has_value ? value : 1.0);
    if (kind == "ht" || kind == "hille_tamarkin") return IdealSpec::hille_tamarkin(has_value ? value : 2.0);
    if (kind == "nuclear" || kind == "nuclear_upper") return IdealSpec::nuclear_upper();
    throw DomainError("unknown ideal \"" + text + "\" (schatten:P, ht:Q, nuclear)");
}

PerturbationProblem problem_from_json(const json& j) {
    ComplexMatrix A = matrix_from_json(member(j, "A", ""), "/A");
    ComplexMatrix K = matrix_from_json(member(j, "K", ""), "/K");
    IdealSpec ideal = j.contains("ideal") ? ideal_from_json(j["ideal"], "/ideal") : IdealSpec::schatten(1.0);
    if (j.contains("p") && number_at(j["p"], "/p") != ideal.p)
        fail("/p", "p must equal the ideal's eigenvalue exponent " + format_double(ideal.p));
    try {
        return PerturbationProblem(std::move(A), std::move(K), std::move(ideal));
    } catch (const DomainError& e) {
        fail("", e.what());
    }
}

GeneratorPair pair_from_json(const json& j) {
    ComplexMatrix H0 = matrix_from_json(member(j, "H0", ""), "/H0");
    ComplexMatrix H = matrix_from_json(member(j, "H", ""), "/H");
    const double a = j.contains("a") ? number_at(j["a"], "/a") : 1.0;
    IdealSpec ideal = j.contains("ideal") ? ideal_from_json(j["ideal"], "/ideal") : IdealSpec::schatten(2.0);
    try {
        return GeneratorPair(std::move(H0), std::move(H), a, std::move(ideal));
    } catch (const DomainError& e) {
        fail("", e.what());
    }
}

BoundSweep bound_sweep_from_json(const json& j) {
    BoundSweep sw;
    sw.s = number_list(member(j, "s", ""), "/s");
    if (j.contains("R")) sw.R = number_list(j["R"], "/R");
    if (j.contains("C_A")) sw.C_A = number_list(j["C_A"], "/C_A");
    if (j.contains("p")) sw.p = number_list(j["p"], "/p");
    if (j.contains("gamma")) sw.gamma = number_at(j["gamma"], "/gamma");
    if (j.contains("normK")) sw.normK = number_at(j["normK"], "/normK");
    return sw;
}

void write_bound_sweep(std::ostream& out, const BoundSweep& sweep) {
    out << "bound_id,s,R,C_A,p,gamma,Gamma,normK,value\n";
    auto row = [&](const char* id, double s, double R, double C, double p, double G, double v) {
        out << id << ',' << format_double(s) << ',' << format_double(R) << ',' << format_double(C)
            << ',' << format_double(p) << ',' << format_double(sweep.gamma) << ','
            << format_double(G) << ',' << format_double(sweep.normK) << ',' << format_double(v)
            << '\n';
    };
    for (double p : sweep.p) {
        const double G = gamma_constant(p).value;
        for (double s : sweep.s) {
            row("unperturbed", s, 0.0, 1.0, p, G, unperturbed_count_bound(s, p, sweep.gamma, sweep.normK));
            for (double R : sweep.R) {
                if (!(s > R)) continue;
                for (double C : sweep.C_A) {
                    const EnvelopeBound b =
                        envelope_count_bound(s, {R, C, false, std::nullopt}, p, sweep.gamma, G, sweep.normK);
                    row("envelope_tight", s, R, C, p, G, b.tight);
                    row("envelope_relaxed", s, R, C, p, G, b.relaxed);
                }
            }
        }
    }
}

}  // namespace pertdet
