#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pertdet/ideals.hpp"
#include "pertdet/perturbation.hpp"
#include "pertdet/semigroup.hpp"

namespace pertdet {

using nlohmann::json;

// Matrix files: {"n": n, "data": [[re, im], ...]} with n*n row-major entries.

ComplexMatrix matrix_from_json(const json& j, const std::string& where = "");
json matrix_to_json(const ComplexMatrix& M);

/// Throws ParseError naming the file and the offending byte or JSON pointer.
ComplexMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const ComplexMatrix& M);
std::string dump_matrix(const ComplexMatrix& M);

json read_json_file(const std::filesystem::path& path);

/// {"kind": "schatten"|"hille_tamarkin"|"nuclear_upper", "p": .., "q": ..,
///  "gamma_p": .., "q_triangle": .., "weights": [..]}. Missing fields take the
/// kind's defaults; "gamma" is accepted for "gamma_p".
IdealSpec ideal_from_json(const json& j, const std::string& where = "");
json ideal_to_json(const IdealSpec& spec);

/// Short command-line form: "schatten:P", "ht:Q" (or "hille_tamarkin:Q"), "nuclear".
IdealSpec parse_ideal_arg(const std::string& text);

/// {"A": matrix, "K": matrix, "ideal": ideal, "p": optional, must match}.
PerturbationProblem problem_from_json(const json& j);

/// {"H0": matrix, "H": matrix, "a": positive, "ideal": ideal}.
GeneratorPair pair_from_json(const json& j);

/// Parameter sweep for the counting bounds: every combination of the listed
/// s, R, C_A and p values.
struct BoundSweep {
    std::vector<double> s;
    std::vector<double> R{0.0};
    std::vector<double> C_A{1.0};
    std::vector<double> p{1.0};
    double gamma = 1.0;
    double normK = 1.0;
};

BoundSweep bound_sweep_from_json(const json& j);

/// CSV rows "bound_id,s,R,C_A,p,gamma,Gamma,normK,value" for the envelope
/// (tight and relaxed) and unperturbed bounds; combinations with s <= R are skipped.
void write_bound_sweep(std::ostream& out, const BoundSweep& sweep);

}  // namespace pertdet
