#pragma once

#include <string>

#include <json.hpp>

#include "ncfield/freefield.hpp"
#include "ncfield/ncrank.hpp"
#include "ncfield/pencil.hpp"
#include "ncfield/ratdag.hpp"
#include "ncfield/spectra.hpp"

namespace ncfield {

// Pencil JSON: {"N":k,"n":m,"coeffs":[[[[re,im],...],...],...],"selfadjoint":bool}.
// Numeric entries are floats or exact rationals as "p/q" strings; a bare
// number is taken as a real entry.
nlohmann::json pencil_to_json(const LinearPencil& p);
LinearPencil pencil_from_json(const nlohmann::json& j);

// PolyMatrix JSON: {"rows":m,"cols":n,"nvars":k,"entries":[[str,...],...]}.
nlohmann::json poly_matrix_to_json(const PolyMatrix& p);
PolyMatrix poly_matrix_from_json(const nlohmann::json& j);

// Tuple JSON: {"n":k,"dim":d,"selfadjoint":bool,"mats":[[[[re,im],...],...],...]}.
nlohmann::json tuple_to_json(const MatrixTuple& t);
MatrixTuple tuple_from_json(const nlohmann::json& j);

nlohmann::json complex_matrix_to_json(const Eigen::MatrixXcd& m);
nlohmann::json rep_to_json(const FormalLinearRep& rep);
nlohmann::json atom_report_to_json(const AtomReport& report);
nlohmann::json confidence_to_json(const Confidence& c);

LinearPencil load_pencil(const std::string& path);
PolyMatrix load_poly_matrix(const std::string& path);
MatrixTuple load_tuple(const std::string& path);

}  // namespace ncfield
