#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ncfield/exact.hpp"
#include "ncfield/ncpoly.hpp"

namespace ncfield {

/// Linear matrix A0 + A1 x1 + ... + An xn with exact complex coefficient
/// matrices. coeffs[0] is the constant term; coeffs[1..n] form the
/// homogeneous part.
struct LinearPencil {
  int N = 0;
  int n = 0;
  std::vector<ExactMatrix> coeffs;  // n + 1 matrices, each N x N
  bool selfadjoint = false;

  LinearPencil() = default;
  LinearPencil(int N_, int n_) : N(N_), n(n_), coeffs(size_t(n_) + 1, ExactMatrix(N_, N_)) {}

  static LinearPencil from_float(const std::vector<Eigen::MatrixXcd>& coeffs, bool selfadjoint);

  Eigen::MatrixXcd coeff_f(int i) const;
  /// A0 (x) I_d + sum_j A_j (x) X_j.
  Eigen::MatrixXcd evaluate(const MatrixTuple& x) const;
  LinearPencil shifted(double lambda) const;  // A - lambda * 1
  bool check_selfadjoint() const;
};

/// Extracts the coefficients of a degree <= 1 square PolyMatrix.
/// Throws NotLinearError / NotSquareError.
LinearPencil pencil_from_poly_matrix(const PolyMatrix& p);
PolyMatrix pencil_to_poly_matrix(const LinearPencil& a);

struct HollowWitness {
  std::vector<int> rows;  // R: 0-based row set
  std::vector<int> cols;  // S: 0-based column set, all (R x S) entries zero
};

/// Largest r + s zero block via maximum bipartite matching on the nonzero
/// pattern (Koenig duality); a witness is returned when r + s > max(m, n).
std::optional<HollowWitness> is_hollow(const PolyMatrix& p);
std::optional<HollowWitness> is_hollow(const LinearPencil& a);
/// Pattern-level core: nonzero[i][j] marks a structurally nonzero entry.
std::optional<HollowWitness> is_hollow_pattern(const std::vector<std::vector<bool>>& nonzero);

/// Quantum operator of the homogeneous part: b -> sum_{i=1..n} A_i b A_i*.
/// The constant term is excluded.
Eigen::MatrixXcd quantum_operator(const LinearPencil& a, const Eigen::MatrixXcd& b);
/// Homogenized variant including the constant term (i = 0..n); this is the
/// map whose rank behavior matches the shrunk-subspace condition.
Eigen::MatrixXcd quantum_operator_homogenized(const LinearPencil& a, const Eigen::MatrixXcd& b);

struct FlatnessReport {
  double c_lower = 0;  // semi-flat constant c (estimate)
  double c_upper = 0;  // flatness upper constant c2 (estimate)
  bool flat = false;
  bool semi_flat = false;
  Eigen::VectorXcd witness_vector;  // unit vector attaining the minimum
};

/// Estimates the flatness constants by rank-one extreme-point optimization:
/// c_lower = N * min_{|v|=1} lambda_min(L(v v*)), c_upper analogously with
/// the maximum. Multi-start projected gradient on the unit sphere; the
/// report is an estimate, not a certificate.
FlatnessReport flatness_constants(const LinearPencil& a, int restarts = 64, int iters = 500,
                                  std::uint64_t seed = 0);

struct MonicReduction {
  ExactMatrix U;       // invertible scalar N x N
  PolyMatrix Q;        // invertible with linear entries
  PolyMatrix Q_inverse;
  LinearPencil B;      // left monic block, possibly 0 x 0
  int s = 0;           // trailing identity size: U * P * Q == diag(B, 1_s)
};

/// True when the stacked homogeneous coefficients (A1; ...; An) have a left
/// inverse, i.e. full column rank.
bool is_left_monic(const LinearPencil& a);

/// Reduces a full square pencil to diag(B, 1_s) with B left monic, by
/// scalar row/column operations plus linear column eliminations. Throws
/// NotReducibleError when the fullness precondition is violated mid-run.
MonicReduction monic_reduce(const LinearPencil& p);

}  // namespace ncfield
