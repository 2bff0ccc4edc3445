#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>

#include "ncfield/pencil.hpp"

namespace ncfield {

struct Confidence {
  bool exact = false;
  int trials = 0;
  double tol = 0;
};

struct RankCertificate {
  enum class Kind { Full, ShrunkSubspace, Hollow };

  Kind kind = Kind::Full;
  int value = 0;  // inner rank estimate
  // Orthonormal column bases, present for ShrunkSubspace: every coefficient
  // A_i (i = 0..n) maps span(V) into span(W) and dim W < dim V.
  Eigen::MatrixXcd V_basis;
  Eigen::MatrixXcd W_basis;
  Confidence confidence;
};

/// Count of singular values above max_dim * sigma_max * rel_tol.
int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-10);

/// i.i.d. complex Gaussian tuple of n matrices of dimension d.
MatrixTuple gaussian_tuple(int n, int d, std::uint64_t seed);

/// max over trials of ceil(rank(A0 (x) 1_d + sum A_i (x) X_i) / d) at
/// i.i.d. complex Gaussian X_i. Never exceeds the inner rank.
int blowup_rank(const LinearPencil& p, int d, int trials = 3, double tol = 1e-10,
                std::uint64_t seed = 0);

/// Shrunk-subspace search on the homogenized family {A_0,...,A_n}: kernel
/// compressions of a Gaussian blow-up seed a Wong-style enlargement
/// fixpoint. Returns orthonormal (V, W) with A_i V <= W, dim W < dim V.
std::optional<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>> shrunk_subspace_search(
    const LinearPencil& p, int d, double tol = 1e-10, std::uint64_t seed = 0);

/// Cross-checked fullness test: blow-up rank, rank-decreasing probes of the
/// homogenized quantum operator, and the shrunk-subspace search must agree.
/// Throws InconsistentError when they do not (after one retry at doubled
/// blow-up dimension).
RankCertificate is_full(const LinearPencil& p, std::uint64_t seed = 0);

/// Unitaries (Pu, Qu) such that every Pu * A_i * Qu has a
/// (N - dim W) x (dim V) zero block; the assembled pencil is hollow.
/// Throws CertificateInvalidError when the certificate fails to verify.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> hollow_certificate(const LinearPencil& p,
                                                                 const RankCertificate& cert);

enum class InnerRankMethod { Blowup, FullBlock };

/// Inner rank of a polynomial matrix. Blowup: stabilized ceil(rank/d) at
/// growing Gaussian dimension. FullBlock: exhaustive search for the largest
/// square block certified full (desk scale).
int inner_rank_poly(const PolyMatrix& p, InnerRankMethod method, std::uint64_t seed = 0);

/// True iff u A^{-1} v = 0 in the free field, decided through the inner
/// rank of the bordered pencil [[0, u],[v, A]]: rank k means zero, k+1
/// nonzero. A must be full.
bool bordered_is_zero(const ExactMatrix& u, const LinearPencil& a, const ExactMatrix& v,
                      std::uint64_t seed = 0);

}  // namespace ncfield
