#pragma once

#include <cstdint>
#include <vector>

#include "ncfield/ncrank.hpp"
#include "ncfield/pencil.hpp"

namespace ncfield {

struct Atom {
  double lambda = 0;   // atom location, an eigenvalue of b0
  int rho = 0;         // inner rank of P - lambda * 1
  double weight = 0;   // (N - rho) / N
};

struct AtomReport {
  int N = 0;
  std::vector<Atom> atoms;
  std::vector<double> candidates_checked;  // clustered eigenvalues of b0
  double delta_star = 1.0;                 // 1 - (1/N^2) sum (N - rho)^2
};

/// Atom predictions for a selfadjoint pencil: candidates are the eigenvalues
/// of b0; lambda is an atom iff P - lambda*1 is non-full, with weight
/// (N - rho_lambda)/N. The report is exact under delta-star maximality of
/// the evaluation tuple.
AtomReport full_spectrum(const LinearPencil& p, std::uint64_t seed = 0);

/// 1 - (1/N^2) sum over atoms of (N - rho)^2.
double entropy_dimension(const AtomReport& report);

struct HoelderConstants {
  double c = 0;         // semi-flat constant (flatness optimizer)
  double C = 0;         // 4 c^{-2/3} (sum ||b_j||^2)^{1/3} fisher^{1/3}
  double exponent = 2.0 / 3.0;
  double coeff_norm_sq = 0;  // sum of squared spectral norms of b_1..b_n
};

/// Hoelder data for the cumulative distribution function of the pencil
/// evaluated at a tuple with free Fisher information `fisher`. Throws
/// NotSemiFlatError when the flatness optimizer reports c = 0.
HoelderConstants hoelder_constant(const LinearPencil& p, double fisher, int restarts = 64,
                                  int iters = 500, std::uint64_t seed = 0);

/// Lower bound -3 C on the logarithmic energy of the distribution.
double log_energy_bound(const LinearPencil& p, double fisher, int restarts = 64,
                        int iters = 500, std::uint64_t seed = 0);

}  // namespace ncfield
