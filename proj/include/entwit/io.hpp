#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "entwit/qstate.hpp"

/// Shared JSON layout for states and operators:
///   {"n_qubits": int, "kind": "pure"|"density"|"operator", "data": ...}
/// with every complex entry written as [re, im] and matrices row-major.
namespace entwit::io {

using json = nlohmann::json;

json to_json(Complex z);
json to_json(const CVector &v);
json to_json(const CMatrix &m);

Complex complex_from_json(const json &j);
CVector vector_from_json(const json &j);
CMatrix matrix_from_json(const json &j);

json state_document(const PureState &psi);
json density_document(const DensityMatrix &rho);
json operator_document(const HermitianOperator &op);

/// Accepts kind "pure".
PureState read_pure(const json &doc);
/// Accepts kind "density", or "pure" (turned into its projector).
DensityMatrix read_density(const json &doc);
/// Accepts any kind; pure states become projectors.
HermitianOperator read_operator(const json &doc);

json load_file(const std::filesystem::path &path);
void save_file(const std::filesystem::path &path, const json &doc);

} // namespace entwit::io
