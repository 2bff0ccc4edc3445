// ncfield command-line interface. All randomized verbs accept --seed
// (default 0); output is JSON on stdout, diagnostics on stderr.
// Exit codes: 0 success / semantic positive, 1 semantic negative
// (e.g. nonzero function), 2 input error, 3 internal inconsistency.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncfield/errors.hpp"
#include "ncfield/freefield.hpp"
#include "ncfield/json_io.hpp"
#include "ncfield/ncrank.hpp"
#include "ncfield/ratdag.hpp"
#include "ncfield/rmtlab.hpp"
#include "ncfield/spectra.hpp"

using nlohmann::json;
using namespace ncfield;

namespace {

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_parse(const std::string& expr_text) {
  RatExpr e = parse_expr(expr_text);
  json j;
  j["expr"] = to_string(e);
  j["nodes"] = e.nodes.size();
  j["nvars"] = e.nvars;
  j["linearization_dim"] = linearize_dim(e);
  emit(j);
  return 0;
}

int run_linearize(const std::string& expr_text) {
  RatExpr e = parse_expr(expr_text);
  FormalLinearRep rep = linearize(e);
  json j = rep_to_json(rep);
  j["expr"] = to_string(e);
  emit(j);
  return 0;
}

int run_rank(const std::string& pencil_path, const std::string& polymatrix_path,
             std::uint64_t seed) {
  if (!pencil_path.empty()) {
    LinearPencil p = load_pencil(pencil_path);
    json j;
    auto hollow = is_hollow(p);
    RankCertificate cert = is_full(p, seed);
    j["rho"] = cert.value;
    if (hollow)
      j["kind"] = "Hollow";
    else
      j["kind"] = cert.kind == RankCertificate::Kind::Full ? "Full" : "ShrunkSubspace";
    if (cert.kind == RankCertificate::Kind::ShrunkSubspace) {
      j["dim_V"] = cert.V_basis.cols();
      j["dim_W"] = cert.W_basis.cols();
    }
    j["confidence"] = confidence_to_json(cert.confidence);
    emit(j);
    return 0;
  }
  PolyMatrix p = load_poly_matrix(polymatrix_path);
  json j;
  j["rho"] = inner_rank_poly(p, InnerRankMethod::Blowup, seed);
  j["kind"] = is_hollow(p) ? "Hollow" : (j["rho"] == std::min(p.rows(), p.cols()) ? "Full"
                                                                                  : "NonFull");
  j["confidence"] = confidence_to_json(Confidence{false, 3, 1e-10});
  emit(j);
  return 0;
}

int run_zerotest(const std::string& expr_text, std::uint64_t seed) {
  RatExpr e = parse_expr(expr_text);
  RationalFunction f = RationalFunction::from_expr(e, seed);
  bool zero = f.is_zero(seed);
  json j;
  j["expr"] = to_string(e);
  j["zero"] = zero;
  j["dim"] = f.dim();
  j["confidence"] = confidence_to_json(f.certificate().confidence);
  emit(j);
  return zero ? 0 : 1;
}

int run_eval(const std::string& expr_text, const std::string& tuple_path, double tol,
             std::uint64_t seed) {
  RatExpr e = parse_expr(expr_text);
  MatrixTuple x = load_tuple(tuple_path);
  RationalFunction f = RationalFunction::from_expr(e, seed);
  Eigen::MatrixXcd value = evaluate_rf(f, x, tol);
  json j;
  j["expr"] = to_string(e);
  j["dim"] = x.dim;
  j["value"] = complex_matrix_to_json(value);
  j["norm"] = value.norm();
  emit(j);
  return 0;
}

int run_atoms(const std::string& pencil_path, std::uint64_t seed) {
  LinearPencil p = load_pencil(pencil_path);
  AtomReport report = full_spectrum(p, seed);
  emit(atom_report_to_json(report));
  return 0;
}

int run_entropy_dim(const std::string& pencil_path, std::uint64_t seed) {
  LinearPencil p = load_pencil(pencil_path);
  AtomReport report = full_spectrum(p, seed);
  json j;
  j["delta_star"] = entropy_dimension(report);
  j["atoms"] = report.atoms.size();
  emit(j);
  return 0;
}

int run_hoelder(const std::string& pencil_path, double fisher, std::uint64_t seed) {
  LinearPencil p = load_pencil(pencil_path);
  HoelderConstants h = hoelder_constant(p, fisher, 64, 500, seed);
  json j;
  j["c"] = h.c;
  j["C"] = h.C;
  j["exponent"] = h.exponent;
  j["coeff_norm_sq"] = h.coeff_norm_sq;
  j["fisher"] = fisher;
  j["log_energy_lower_bound"] = -3.0 * h.C;
  emit(j);
  return 0;
}

int run_simulate(const std::string& pencil_path, const std::string& expr_text, int dim,
                 int samples, double window, std::uint64_t seed, const std::string& format) {
  if (!expr_text.empty()) {
    // Expression mode: norms of the evaluated rational function on GUE tuples.
    RatExpr e = parse_expr(expr_text);
    RationalFunction f = RationalFunction::from_expr(e, seed);
    json norms = json::array();
    for (int k = 0; k < samples; ++k) {
      MatrixTuple x = sample_gue_tuple(std::max(e.nvars, 1), dim,
                                       seed + 0x2545f4914f6cdd1dULL * (k + 1));
      try {
        norms.push_back(evaluate_rf(f, x, 1e-12).norm());
      } catch (const DomainError&) {
        norms.push_back(nullptr);
      }
    }
    json j;
    j["expr"] = to_string(e);
    j["dim"] = dim;
    j["samples"] = samples;
    j["norms"] = norms;
    emit(j);
    return 0;
  }

  LinearPencil p = load_pencil(pencil_path);
  AtomReport predicted = full_spectrum(p, seed);
  std::vector<double> lambdas;
  for (const auto& a : predicted.atoms) lambdas.push_back(a.lambda);

  if (format == "csv") {
    std::cout << "sample,index,eigenvalue\n";
    for (int k = 0; k < samples; ++k) {
      SpectralSample s = sample_pencil_spectrum(p, dim, seed + 0x2545f4914f6cdd1dULL * (k + 1));
      for (size_t i = 0; i < s.eigenvalues.size(); ++i)
        std::cout << k << "," << i << "," << s.eigenvalues[i] << "\n";
    }
    return 0;
  }

  auto stats = empirical_atoms(p, lambdas, dim, samples, window, seed);
  SpectralSample s0 = sample_pencil_spectrum(p, dim, seed + 0x2545f4914f6cdd1dULL);
  std::vector<double> deltas = {0.01, 0.05, 0.1, 0.5};
  auto moduli = cdf_modulus(s0, deltas);

  json j;
  j["dim"] = dim;
  j["samples"] = samples;
  j["window"] = window;
  j["predicted"] = atom_report_to_json(predicted);
  json emp = json::array();
  for (const auto& [lambda, st] : stats) {
    json ja;
    ja["lambda"] = lambda;
    ja["weight_mean"] = st.mean;
    ja["weight_stddev"] = st.stddev;
    emp.push_back(ja);
  }
  j["empirical_atoms"] = emp;
  j["max_cluster_weight"] = max_cluster_weight(s0, window);
  json jm = json::array();
  for (size_t i = 0; i < deltas.size(); ++i) {
    json d;
    d["delta"] = deltas[i];
    d["modulus"] = moduli[i];
    jm.push_back(d);
  }
  j["cdf_moduli"] = jm;
  emit(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noncommutative rational functions, ranks, and spectra"};
  app.require_subcommand(1);

  std::string expr_text, pencil_path, polymatrix_path, tuple_path, format = "json";
  std::uint64_t seed = 0;
  double tol = 1e-12, fisher = 0, window = 0.02;
  int dim = 500, samples = 8;

  auto* c_parse = app.add_subcommand("parse", "parse an expression and print its DAG stats");
  c_parse->add_option("--expr", expr_text)->required();

  auto* c_lin = app.add_subcommand("linearize", "formal linear representation of an expression");
  c_lin->add_option("--expr", expr_text)->required();

  auto* c_rank = app.add_subcommand("rank", "noncommutative rank of a pencil or poly matrix");
  c_rank->add_option("--pencil", pencil_path);
  c_rank->add_option("--polymatrix", polymatrix_path);
  c_rank->add_option("--seed", seed);

  auto* c_zero = app.add_subcommand("zerotest", "decide zero in the free field");
  c_zero->add_option("--expr", expr_text)->required();
  c_zero->add_option("--seed", seed);

  auto* c_eval = app.add_subcommand("eval", "evaluate an expression on a matrix tuple");
  c_eval->add_option("--expr", expr_text)->required();
  c_eval->add_option("--tuple", tuple_path)->required();
  c_eval->add_option("--tol", tol);
  c_eval->add_option("--seed", seed);

  auto* c_atoms = app.add_subcommand("atoms", "predicted atom locations and weights");
  c_atoms->add_option("--pencil", pencil_path)->required();
  c_atoms->add_option("--seed", seed);

  auto* c_ent = app.add_subcommand("entropy-dim", "free entropy dimension of the pencil");
  c_ent->add_option("--pencil", pencil_path)->required();
  c_ent->add_option("--seed", seed);

  auto* c_hoe = app.add_subcommand("hoelder", "Hoelder constant of the distribution function");
  c_hoe->add_option("--pencil", pencil_path)->required();
  c_hoe->add_option("--fisher", fisher)->required();
  c_hoe->add_option("--seed", seed);

  auto* c_sim = app.add_subcommand("simulate", "random-matrix validation run");
  c_sim->add_option("--pencil", pencil_path);
  c_sim->add_option("--expr", expr_text);
  c_sim->add_option("--dim", dim);
  c_sim->add_option("--samples", samples);
  c_sim->add_option("--window", window);
  c_sim->add_option("--seed", seed);
  c_sim->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_parse->parsed()) return run_parse(expr_text);
    if (c_lin->parsed()) return run_linearize(expr_text);
    if (c_rank->parsed()) {
      if (pencil_path.empty() == polymatrix_path.empty()) {
        std::cerr << "rank: exactly one of --pencil / --polymatrix is required\n";
        return 2;
      }
      return run_rank(pencil_path, polymatrix_path, seed);
    }
    if (c_zero->parsed()) return run_zerotest(expr_text, seed);
    if (c_eval->parsed()) return run_eval(expr_text, tuple_path, tol, seed);
    if (c_atoms->parsed()) return run_atoms(pencil_path, seed);
    if (c_ent->parsed()) return run_entropy_dim(pencil_path, seed);
    if (c_hoe->parsed()) return run_hoelder(pencil_path, fisher, seed);
    if (c_sim->parsed()) {
      if (pencil_path.empty() == expr_text.empty()) {
        std::cerr << "simulate: exactly one of --pencil / --expr is required\n";
        return 2;
      }
      return run_simulate(pencil_path, expr_text, dim, samples, window, seed, format);
    }
  } catch (const InconsistentError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return 3;
  } catch (const NotRegularError& e) {
    std::cerr << "not regular: " << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
