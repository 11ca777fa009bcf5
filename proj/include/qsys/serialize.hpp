#pragma once

#include <json.hpp>

#include "qsys/qsystem.hpp"

namespace qsys {

// Insertion-ordered JSON keeps emission deterministic; coefficients travel as
// decimal strings so round-trips are bit-exact.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaName = "qsys-schema-1";

Json poly_to_json(const LatticePolynomial& p);
LatticePolynomial poly_from_json(const Json& j, std::size_t num_vars);

Json ratfn_to_json(const RationalFunction& r);
RationalFunction ratfn_from_json(const Json& j, std::size_t num_vars);

Json form_to_json(const MatrixOneForm& f);
MatrixOneForm form_from_json(const Json& j);

Json qsystem_to_json(const QSystem& q);
QSystem qsystem_from_json(const Json& j);

Json fiber_to_json(const SingularFiber& f);
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

std::string dump_canonical(const Json& j);
Json parse_json(const std::string& text);       // ValidationError on bad input
Json load_json_file(const std::string& path);   // ValidationError on bad input
void write_text_file(const std::string& path, const std::string& text);

QSystem load_qsystem_file(const std::string& path);
void save_qsystem_file(const std::string& path, const QSystem& q);

}  // namespace qsys
