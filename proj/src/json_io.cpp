#include "ncfield/json_io.hpp"

#include <fstream>

#include "ncfield/errors.hpp"

namespace ncfield {

using nlohmann::json;

namespace {

mpq_class rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_number_float()) return mpq_class(j.get<double>());
  throw Error("expected number or \"p/q\" string in matrix entry");
}

ExactScalar entry_from_json(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw Error("complex entry must be [re, im]");
    return ExactScalar(rational_from_json(j[0]), rational_from_json(j[1]));
  }
  return ExactScalar(rational_from_json(j), mpq_class(0));
}

json entry_to_json(const ExactScalar& s) {
  auto part = [](const mpq_class& q) -> json {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
    return json(q.get_str());
  };
  return json::array({part(s.re), part(s.im)});
}

ExactMatrix exact_matrix_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || int(j.size()) != rows) throw Error("matrix row count mismatch");
  ExactMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || int(j[i].size()) != cols) throw Error("matrix column count mismatch");
    for (int c = 0; c < cols; ++c) m.at(i, c) = entry_from_json(j[i][c]);
  }
  return m;
}

json exact_matrix_to_json(const ExactMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(entry_to_json(m.at(i, c)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json pencil_to_json(const LinearPencil& p) {
  json j;
  j["N"] = p.N;
  j["n"] = p.n;
  json coeffs = json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(exact_matrix_to_json(c));
  j["coeffs"] = coeffs;
  j["selfadjoint"] = p.selfadjoint;
  return j;
}

LinearPencil pencil_from_json(const json& j) {
  int N = j.at("N").get<int>();
  int n = j.at("n").get<int>();
  const json& coeffs = j.at("coeffs");
  if (int(coeffs.size()) != n + 1) throw Error("pencil needs n + 1 coefficient matrices");
  LinearPencil p(N, n);
  for (int i = 0; i <= n; ++i) p.coeffs[i] = exact_matrix_from_json(coeffs[i], N, N);
  p.selfadjoint = j.value("selfadjoint", false);
  if (p.selfadjoint && !p.check_selfadjoint())
    throw NotSelfadjointError("pencil JSON: selfadjoint flag on non-Hermitian coefficients");
  return p;
}

json poly_matrix_to_json(const PolyMatrix& p) {
  json j;
  j["rows"] = p.rows();
  j["cols"] = p.cols();
  j["nvars"] = p.nvars();
  json entries = json::array();
  for (int i = 0; i < p.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < p.cols(); ++c) row.push_back(p.at(i, c).str());
    entries.push_back(row);
  }
  j["entries"] = entries;
  return j;
}

PolyMatrix poly_matrix_from_json(const json& j) {
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  int nvars = j.at("nvars").get<int>();
  PolyMatrix p(rows, cols, nvars);
  const json& entries = j.at("entries");
  if (int(entries.size()) != rows) throw Error("poly matrix row count mismatch");
  for (int i = 0; i < rows; ++i) {
    if (int(entries[i].size()) != cols) throw Error("poly matrix column count mismatch");
    for (int c = 0; c < cols; ++c)
      p.at(i, c) = parse_poly(entries[i][c].get<std::string>(), nvars);
  }
  return p;
}

json tuple_to_json(const MatrixTuple& t) {
  json j;
  j["n"] = t.n;
  j["dim"] = t.dim;
  j["selfadjoint"] = t.selfadjoint;
  json mats = json::array();
  for (const auto& m : t.mats) mats.push_back(complex_matrix_to_json(m));
  j["mats"] = mats;
  return j;
}

MatrixTuple tuple_from_json(const json& j) {
  int n = j.at("n").get<int>();
  int dim = j.at("dim").get<int>();
  bool sa = j.value("selfadjoint", false);
  std::vector<Eigen::MatrixXcd> mats;
  const json& jm = j.at("mats");
  if (int(jm.size()) != n) throw Error("tuple needs n matrices");
  for (int k = 0; k < n; ++k) {
    ExactMatrix e = exact_matrix_from_json(jm[k], dim, dim);
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = e.at(r, c).to_complex();
    mats.push_back(std::move(m));
  }
  MatrixTuple t(std::move(mats), sa);
  if (n == 0) t.dim = dim;
  return t;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(i, c).real(), m(i, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

json rep_to_json(const FormalLinearRep& rep) {
  json j;
  j["dim"] = rep.dim();
  json u = json::array();
  for (int k = 0; k < rep.dim(); ++k) u.push_back(entry_to_json(rep.u.at(0, k)));
  json v = json::array();
  for (int k = 0; k < rep.dim(); ++k) v.push_back(entry_to_json(rep.v.at(k, 0)));
  j["u"] = u;
  j["v"] = v;
  j["pencil"] = pencil_to_json(rep.A);
  return j;
}

json atom_report_to_json(const AtomReport& report) {
  json j;
  j["N"] = report.N;
  json atoms = json::array();
  for (const auto& a : report.atoms) {
    json ja;
    ja["lambda"] = a.lambda;
    ja["rho"] = a.rho;
    ja["weight"] = a.weight;
    atoms.push_back(ja);
  }
  j["atoms"] = atoms;
  j["candidates_checked"] = report.candidates_checked;
  j["delta_star"] = report.delta_star;
  j["assumption"] = "valid under delta-star maximality of the evaluation tuple";
  return j;
}

json confidence_to_json(const Confidence& c) {
  json j;
  j["type"] = c.exact ? "exact" : "randomized";
  if (!c.exact) {
    j["trials"] = c.trials;
    j["tol"] = c.tol;
  }
  return j;
}

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace

LinearPencil load_pencil(const std::string& path) { return pencil_from_json(load_json_file(path)); }
PolyMatrix load_poly_matrix(const std::string& path) {
  return poly_matrix_from_json(load_json_file(path));
}
MatrixTuple load_tuple(const std::string& path) { return tuple_from_json(load_json_file(path)); }

}  // namespace ncfield
