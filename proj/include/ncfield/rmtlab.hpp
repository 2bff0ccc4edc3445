#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncfield/pencil.hpp"

namespace ncfield {

/// GUE matrix: Hermitian, entry variance 1/d, empirical spectrum close to
/// the semicircle on [-2, 2].
Eigen::MatrixXcd sample_gue(int d, std::uint64_t seed);

/// n independent GUE matrices of dimension d; selfadjoint tuple.
MatrixTuple sample_gue_tuple(int n, int d, std::uint64_t seed);

struct SpectralSample {
  int dim = 0;                     // blow-up dimension d
  std::string id;                  // pencil or expression label
  std::vector<double> eigenvalues; // sorted ascending, length N*d
  std::uint64_t seed = 0;
};

/// Eigenvalues of P(X) for one GUE tuple X.
SpectralSample sample_pencil_spectrum(const LinearPencil& p, int d, std::uint64_t seed);

struct EmpiricalAtomStats {
  double mean = 0;
  double stddev = 0;
};

/// For each requested location, the mean (over samples) fraction of
/// eigenvalues inside [lambda - window, lambda + window]. Samples run on
/// derived seeds and fan out over a thread pool; the merge order is fixed
/// by the sample index.
std::map<double, EmpiricalAtomStats> empirical_atoms(const LinearPencil& p,
                                                     const std::vector<double>& lambdas, int d,
                                                     int samples, double window,
                                                     std::uint64_t seed);

/// Largest eigenvalue fraction found in any window of the given half-width
/// centered on a grid over the sample's range.
double max_cluster_weight(const SpectralSample& s, double window);

/// sup over a 1000-point anchor grid of F(t + delta) - F(t), one value per
/// requested delta.
std::vector<double> cdf_modulus(const SpectralSample& s, const std::vector<double>& deltas);

}  // namespace ncfield
