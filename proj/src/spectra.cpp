#include "ncfield/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "ncfield/errors.hpp"

namespace ncfield {

AtomReport full_spectrum(const LinearPencil& p, std::uint64_t seed) {
  if (!p.selfadjoint || !p.check_selfadjoint())
    throw NotSelfadjointError("full_spectrum: pencil must be selfadjoint");
  const int N = p.N;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p.coeff_f(0));
  std::vector<double> eigs(es.eigenvalues().data(), es.eigenvalues().data() + N);
  std::sort(eigs.begin(), eigs.end());

  // Cluster repeated eigenvalues so each candidate is tested once.
  std::vector<double> candidates;
  for (double e : eigs) {
    if (candidates.empty() || std::abs(e - candidates.back()) > 1e-8) candidates.push_back(e);
  }

  AtomReport report;
  report.N = N;
  report.candidates_checked = candidates;
  double deficiency = 0;
  for (double lambda : candidates) {
    LinearPencil shiftedp = p.shifted(lambda);
    RankCertificate cert = is_full(shiftedp, seed);
    if (cert.kind == RankCertificate::Kind::Full) continue;
    Atom a;
    a.lambda = lambda;
    a.rho = cert.value;
    a.weight = double(N - a.rho) / N;
    report.atoms.push_back(a);
    deficiency += double(N - a.rho) * double(N - a.rho);
  }
  report.delta_star = 1.0 - deficiency / (double(N) * double(N));
  return report;
}

double entropy_dimension(const AtomReport& report) {
  double deficiency = 0;
  for (const auto& a : report.atoms)
    deficiency += double(report.N - a.rho) * double(report.N - a.rho);
  return 1.0 - deficiency / (double(report.N) * double(report.N));
}

HoelderConstants hoelder_constant(const LinearPencil& p, double fisher, int restarts, int iters,
                                  std::uint64_t seed) {
  if (fisher <= 0) throw DimensionMismatchError("hoelder_constant: fisher must be positive");
  FlatnessReport flat = flatness_constants(p, restarts, iters, seed);
  if (!flat.semi_flat)
    throw NotSemiFlatError("hoelder_constant: quantum operator is not semi-flat");

  double s = 0;
  for (int j = 1; j <= p.n; ++j) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p.coeff_f(j));
    double opnorm = svd.singularValues()(0);
    s += opnorm * opnorm;
  }

  HoelderConstants h;
  h.c = flat.c_lower;
  h.coeff_norm_sq = s;
  h.C = 4.0 * std::pow(h.c, -2.0 / 3.0) * std::cbrt(s) * std::cbrt(fisher);
  return h;
}

double log_energy_bound(const LinearPencil& p, double fisher, int restarts, int iters,
                        std::uint64_t seed) {
  return -3.0 * hoelder_constant(p, fisher, restarts, iters, seed).C;
}

}  // namespace ncfield
