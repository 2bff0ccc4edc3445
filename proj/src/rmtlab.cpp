#include "ncfield/rmtlab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include "ncfield/errors.hpp"

namespace ncfield {

Eigen::MatrixXcd sample_gue(int d, std::uint64_t seed) {
  if (d < 1) throw DimensionMismatchError("sample_gue: dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sigma = 1.0 / std::sqrt(double(d));
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      g(i, j) = sigma * std::complex<double>(gauss(rng), gauss(rng));
  return 0.5 * (g + g.adjoint());
}

MatrixTuple sample_gue_tuple(int n, int d, std::uint64_t seed) {
  std::vector<Eigen::MatrixXcd> mats;
  for (int k = 0; k < n; ++k)
    mats.push_back(sample_gue(d, seed + 0x517cc1b727220a95ULL * (k + 1)));
  MatrixTuple t(std::move(mats), true);
  if (n == 0) t.dim = d;
  return t;
}

SpectralSample sample_pencil_spectrum(const LinearPencil& p, int d, std::uint64_t seed) {
  MatrixTuple x = sample_gue_tuple(p.n, d, seed);
  Eigen::MatrixXcd m = p.evaluate(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  SpectralSample s;
  s.dim = d;
  s.seed = seed;
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

std::map<double, EmpiricalAtomStats> empirical_atoms(const LinearPencil& p,
                                                     const std::vector<double>& lambdas, int d,
                                                     int samples, double window,
                                                     std::uint64_t seed) {
  if (window <= 0) throw DimensionMismatchError("empirical_atoms: window must be positive");

  std::vector<std::future<SpectralSample>> futs;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  auto run = [&](int k) {
    return sample_pencil_spectrum(p, d, seed + 0x2545f4914f6cdd1dULL * (k + 1));
  };
  std::vector<SpectralSample> results;
  if (workers > 1 && samples > 1) {
    for (int k = 0; k < samples; ++k)
      futs.push_back(std::async(std::launch::async, run, k));
    for (auto& f : futs) results.push_back(f.get());
  } else {
    for (int k = 0; k < samples; ++k) results.push_back(run(k));
  }

  std::map<double, EmpiricalAtomStats> out;
  for (double lambda : lambdas) {
    std::vector<double> weights;
    for (const auto& s : results) {
      auto lo = std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(), lambda - window);
      auto hi = std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), lambda + window);
      weights.push_back(double(hi - lo) / double(s.eigenvalues.size()));
    }
    EmpiricalAtomStats st;
    for (double w : weights) st.mean += w;
    st.mean /= double(weights.size());
    double var = 0;
    for (double w : weights) var += (w - st.mean) * (w - st.mean);
    if (weights.size() > 1) var /= double(weights.size() - 1);
    st.stddev = std::sqrt(var);
    out[lambda] = st;
  }
  return out;
}

double max_cluster_weight(const SpectralSample& s, double window) {
  if (s.eigenvalues.empty()) return 0;
  double lo = s.eigenvalues.front(), hi = s.eigenvalues.back();
  const int grid = 2000;
  double best = 0;
  for (int g = 0; g <= grid; ++g) {
    double c = lo + (hi - lo) * g / grid;
    auto a = std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(), c - window);
    auto b = std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), c + window);
    best = std::max(best, double(b - a) / double(s.eigenvalues.size()));
  }
  return best;
}

std::vector<double> cdf_modulus(const SpectralSample& s, const std::vector<double>& deltas) {
  const auto& ev = s.eigenvalues;
  const double n = double(ev.size());
  auto cdf = [&](double t) {
    return double(std::upper_bound(ev.begin(), ev.end(), t) - ev.begin()) / n;
  };
  std::vector<double> out;
  if (ev.empty()) return std::vector<double>(deltas.size(), 0.0);
  double lo = ev.front(), hi = ev.back();
  const int anchors = 1000;
  for (double delta : deltas) {
    double best = 0;
    for (int g = 0; g <= anchors; ++g) {
      // Anchor grid starts below the spectrum so increments at the edge count.
      double t = lo - delta + (hi - lo + delta) * g / anchors;
      best = std::max(best, cdf(t + delta) - cdf(t));
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace ncfield
