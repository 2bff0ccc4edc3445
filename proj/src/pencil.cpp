#include "ncfield/pencil.hpp"

#include <algorithm>
#include <random>

#include "ncfield/errors.hpp"

namespace ncfield {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ExactMatrix to_exact(const Eigen::MatrixXcd& m) {
  ExactMatrix e(int(m.rows()), int(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      e.at(i, j) = ExactScalar(mpq_class(m(i, j).real()), mpq_class(m(i, j).imag()));
  return e;
}

}  // namespace

LinearPencil LinearPencil::from_float(const std::vector<Eigen::MatrixXcd>& coeffs,
                                      bool selfadjoint) {
  if (coeffs.empty()) throw DimensionMismatchError("LinearPencil: needs at least A0");
  LinearPencil p(int(coeffs[0].rows()), int(coeffs.size()) - 1);
  p.selfadjoint = selfadjoint;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].rows() != p.N || coeffs[i].cols() != p.N)
      throw DimensionMismatchError("LinearPencil: coefficient shape mismatch");
    p.coeffs[i] = to_exact(coeffs[i]);
  }
  if (selfadjoint && !p.check_selfadjoint())
    throw NotSelfadjointError("LinearPencil: selfadjoint flag on non-Hermitian coefficients");
  return p;
}

Eigen::MatrixXcd LinearPencil::coeff_f(int i) const {
  Eigen::MatrixXcd m(N, N);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) m(r, c) = coeffs[i].at(r, c).to_complex();
  return m;
}

Eigen::MatrixXcd LinearPencil::evaluate(const MatrixTuple& x) const {
  if (x.n < n) throw DimensionMismatchError("LinearPencil::evaluate: tuple too short");
  int d = x.dim;
  Eigen::MatrixXcd out = kron(coeff_f(0), Eigen::MatrixXcd::Identity(d, d));
  for (int j = 1; j <= n; ++j) out += kron(coeff_f(j), x.mats[j - 1]);
  return out;
}

LinearPencil LinearPencil::shifted(double lambda) const {
  LinearPencil p = *this;
  ExactScalar l{mpq_class(lambda), mpq_class(0)};
  for (int i = 0; i < N; ++i) p.coeffs[0].at(i, i) -= l;
  return p;
}

bool LinearPencil::check_selfadjoint() const {
  for (int i = 0; i <= n; ++i) {
    Eigen::MatrixXcd a = coeff_f(i);
    if ((a - a.adjoint()).norm() > 1e-12 * std::max(1.0, a.norm())) return false;
  }
  return true;
}

LinearPencil pencil_from_poly_matrix(const PolyMatrix& p) {
  if (p.rows() != p.cols()) throw NotSquareError("pencil_from_poly_matrix: matrix not square");
  if (p.degree() > 1) throw NotLinearError("pencil_from_poly_matrix: entry of degree >= 2");
  LinearPencil a(p.rows(), p.nvars());
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j)
      for (const auto& [w, c] : p.at(i, j).terms()) {
        if (w.is_unit())
          a.coeffs[0].at(i, j) = c;
        else
          a.coeffs[size_t(w.letters[0])].at(i, j) = c;
      }
  a.selfadjoint = a.check_selfadjoint();
  return a;
}

PolyMatrix pencil_to_poly_matrix(const LinearPencil& a) {
  PolyMatrix p(a.N, a.N, a.n);
  for (int i = 0; i < a.N; ++i)
    for (int j = 0; j < a.N; ++j) {
      NcPoly e(a.n);
      if (!a.coeffs[0].at(i, j).is_zero()) e.set_coeff(Word(), a.coeffs[0].at(i, j));
      for (int k = 1; k <= a.n; ++k)
        if (!a.coeffs[k].at(i, j).is_zero()) e.set_coeff(Word({k}), a.coeffs[k].at(i, j));
      p.at(i, j) = e;
    }
  return p;
}

std::optional<HollowWitness> is_hollow_pattern(const std::vector<std::vector<bool>>& nonzero) {
  const int m = int(nonzero.size());
  const int n = m == 0 ? 0 : int(nonzero[0].size());
  if (m == 0 || n == 0) return std::nullopt;

  // Kuhn's augmenting-path maximum matching on the nonzero pattern.
  std::vector<int> match_col(n, -1);  // column -> matched row
  std::vector<int> match_row(m, -1);
  std::function<bool(int, std::vector<bool>&)> try_augment = [&](int r, std::vector<bool>& used) {
    for (int c = 0; c < n; ++c) {
      if (!nonzero[r][c] || used[c]) continue;
      used[c] = true;
      if (match_col[c] < 0 || try_augment(match_col[c], used)) {
        match_col[c] = r;
        match_row[r] = c;
        return true;
      }
    }
    return false;
  };
  int matching = 0;
  for (int r = 0; r < m; ++r) {
    std::vector<bool> used(n, false);
    if (try_augment(r, used)) ++matching;
  }

  // Koenig: rows reachable from unmatched rows by alternating paths, with
  // non-matching edges row -> col and matching edges col -> row. The
  // independent pair is (reachable rows) x (unreached cols).
  std::vector<bool> row_seen(m, false), col_seen(n, false);
  std::vector<int> stack;
  for (int r = 0; r < m; ++r)
    if (match_row[r] < 0) {
      row_seen[r] = true;
      stack.push_back(r);
    }
  while (!stack.empty()) {
    int r = stack.back();
    stack.pop_back();
    for (int c = 0; c < n; ++c) {
      if (!nonzero[r][c] || col_seen[c] || match_row[r] == c) continue;
      col_seen[c] = true;
      int r2 = match_col[c];
      if (r2 >= 0 && !row_seen[r2]) {
        row_seen[r2] = true;
        stack.push_back(r2);
      }
    }
  }

  HollowWitness w;
  for (int r = 0; r < m; ++r)
    if (row_seen[r]) w.rows.push_back(r);
  for (int c = 0; c < n; ++c)
    if (!col_seen[c]) w.cols.push_back(c);
  if (int(w.rows.size() + w.cols.size()) != m + n - matching) {
    // Koenig bookkeeping failure would be a bug; fall back to no witness.
    return std::nullopt;
  }
  if (int(w.rows.size() + w.cols.size()) <= std::max(m, n)) return std::nullopt;
  return w;
}

std::optional<HollowWitness> is_hollow(const PolyMatrix& p) {
  std::vector<std::vector<bool>> nz(p.rows(), std::vector<bool>(p.cols(), false));
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) nz[i][j] = !p.at(i, j).is_zero();
  return is_hollow_pattern(nz);
}

std::optional<HollowWitness> is_hollow(const LinearPencil& a) {
  std::vector<std::vector<bool>> nz(a.N, std::vector<bool>(a.N, false));
  for (int i = 0; i < a.N; ++i)
    for (int j = 0; j < a.N; ++j)
      for (int k = 0; k <= a.n; ++k)
        if (!a.coeffs[k].at(i, j).is_zero()) nz[i][j] = true;
  return is_hollow_pattern(nz);
}

Eigen::MatrixXcd quantum_operator(const LinearPencil& a, const Eigen::MatrixXcd& b) {
  if (b.rows() != a.N || b.cols() != a.N)
    throw DimensionMismatchError("quantum_operator: b must be N x N");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.N, a.N);
  for (int i = 1; i <= a.n; ++i) {
    Eigen::MatrixXcd c = a.coeff_f(i);
    out += c * b * c.adjoint();
  }
  return out;
}

Eigen::MatrixXcd quantum_operator_homogenized(const LinearPencil& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd c0 = a.coeff_f(0);
  return c0 * b * c0.adjoint() + quantum_operator(a, b);
}

namespace {

// lambda_min / lambda_max of L(v v*) together with the attaining eigenvector.
struct SphereObjective {
  const std::vector<Eigen::MatrixXcd>& coeffs;  // A_1..A_n as floats
  bool minimize;

  double value(const Eigen::VectorXcd& v, Eigen::VectorXcd* eigvec = nullptr) const {
    const int N = int(v.size());
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(N, N);
    for (const auto& a : coeffs) {
      Eigen::VectorXcd av = a * v;
      l += av * av.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(l);
    int idx = minimize ? 0 : N - 1;
    if (eigvec) *eigvec = es.eigenvectors().col(idx);
    return es.eigenvalues()(idx);
  }

  // Wirtinger gradient of sum_i |w* A_i v|^2 with w frozen.
  Eigen::VectorXcd gradient(const Eigen::VectorXcd& v, const Eigen::VectorXcd& w) const {
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(v.size());
    for (const auto& a : coeffs) g += a.adjoint() * w * (w.adjoint() * (a * v));
    return g;
  }
};

double sphere_optimize(const SphereObjective& obj, Eigen::VectorXcd v, int iters,
                       Eigen::VectorXcd* best_v) {
  double step = 0.1;
  Eigen::VectorXcd w;
  double f = obj.value(v, &w);
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd g = obj.gradient(v, w);
    // Project onto the tangent space of the sphere.
    g -= v * (v.adjoint() * g);
    if (g.norm() < 1e-14) break;
    Eigen::VectorXcd cand = obj.minimize ? Eigen::VectorXcd(v - step * g)
                                         : Eigen::VectorXcd(v + step * g);
    cand.normalize();
    Eigen::VectorXcd wc;
    double fc = obj.value(cand, &wc);
    bool improved = obj.minimize ? (fc < f) : (fc > f);
    if (improved) {
      v = cand;
      w = wc;
      f = fc;
      step = std::min(step * 1.25, 0.5);
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
  if (best_v) *best_v = v;
  return f;
}

}  // namespace

FlatnessReport flatness_constants(const LinearPencil& a, int restarts, int iters,
                                  std::uint64_t seed) {
  if (a.n < 1) throw DimensionMismatchError("flatness_constants: pencil has no variables");
  const int N = a.N;
  std::vector<Eigen::MatrixXcd> coeffs;
  for (int i = 1; i <= a.n; ++i) coeffs.push_back(a.coeff_f(i));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&]() {
    Eigen::VectorXcd v(N);
    for (int i = 0; i < N; ++i) v(i) = std::complex<double>(gauss(rng), gauss(rng));
    v.normalize();
    return v;
  };

  std::vector<Eigen::VectorXcd> starts;
  for (int i = 0; i < N; ++i) starts.push_back(Eigen::VectorXcd::Unit(N, i));
  for (int r = 0; r < restarts; ++r) starts.push_back(random_unit());

  FlatnessReport rep;
  SphereObjective omin{coeffs, true}, omax{coeffs, false};
  double best_min = std::numeric_limits<double>::infinity();
  double best_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    Eigen::VectorXcd v;
    double f = sphere_optimize(omin, s, iters, &v);
    if (f < best_min) {
      best_min = f;
      rep.witness_vector = v;
    }
    double g = sphere_optimize(omax, s, iters, nullptr);
    best_max = std::max(best_max, g);
  }
  rep.c_lower = std::max(0.0, best_min) * N;
  rep.c_upper = best_max * N;
  rep.semi_flat = rep.c_lower > 1e-7 * std::max(1.0, rep.c_upper);
  rep.flat = rep.semi_flat;  // the upper constant is always finite for a fixed pencil
  return rep;
}

bool is_left_monic(const LinearPencil& a) {
  if (a.n == 0) return a.N == 0;
  ExactMatrix stacked(a.n * a.N, a.N);
  for (int i = 1; i <= a.n; ++i) stacked.set_block((i - 1) * a.N, 0, a.coeffs[i]);
  return stacked.rank() == a.N;
}

namespace {

// Invertible scalar matrix whose last column is c (c nonzero).
ExactMatrix completion_with_last_column(const ExactMatrix& c) {
  const int m = c.rows();
  int p = -1;
  for (int i = m - 1; i >= 0; --i)
    if (!c.at(i, 0).is_zero()) {
      p = i;
      break;
    }
  if (p < 0) throw Error("completion_with_last_column: zero vector");
  ExactMatrix k(m, m);
  int col = 0;
  for (int j = 0; j < m; ++j) {
    if (j == p) continue;
    k.at(j, col) = ExactScalar(1);
    ++col;
  }
  for (int i = 0; i < m; ++i) k.at(i, m - 1) = c.at(i, 0);
  return k;
}

// Invertible scalar matrix mapping the nonzero vector a to the last unit
// vector e_{m-1}.
ExactMatrix row_ops_to_last_unit(const ExactMatrix& a) {
  const int m = a.rows();
  int p = -1;
  for (int i = m - 1; i >= 0; --i)
    if (!a.at(i, 0).is_zero()) {
      p = i;
      break;
    }
  if (p < 0) throw Error("row_ops_to_last_unit: zero vector");
  ExactMatrix u = ExactMatrix::identity(m);
  ExactMatrix v = a;
  auto swap_rows = [&](ExactMatrix& mat, int r1, int r2) {
    for (int j = 0; j < mat.cols(); ++j) std::swap(mat.at(r1, j), mat.at(r2, j));
  };
  if (p != m - 1) {
    swap_rows(u, p, m - 1);
    swap_rows(v, p, m - 1);
  }
  ExactScalar inv = ExactScalar(1) / v.at(m - 1, 0);
  for (int j = 0; j < m; ++j) u.at(m - 1, j) *= inv;
  v.at(m - 1, 0) = ExactScalar(1);
  for (int r = 0; r < m - 1; ++r) {
    if (v.at(r, 0).is_zero()) continue;
    ExactScalar f = v.at(r, 0);
    for (int j = 0; j < m; ++j) u.at(r, j) -= f * u.at(m - 1, j);
    v.at(r, 0) = ExactScalar(0);
  }
  return u;
}

}  // namespace

MonicReduction monic_reduce(const LinearPencil& p) {
  const int N = p.N;
  const int nv = p.n;
  std::vector<ExactMatrix> m = p.coeffs;  // working pencil, mutated in place

  MonicReduction out;
  out.U = ExactMatrix::identity(N);
  out.Q = PolyMatrix::identity(N, nv);
  out.Q_inverse = PolyMatrix::identity(N, nv);

  int mdim = N;
  while (mdim > 0) {
    // Stacked homogeneous coefficients of the active block.
    ExactMatrix stacked(std::max(1, nv) * mdim, mdim);
    for (int i = 1; i <= nv; ++i)
      stacked.set_block((i - 1) * mdim, 0, m[i].block(0, 0, mdim, mdim));
    if (nv >= 1 && stacked.rank() == mdim) break;  // block is left monic

    ExactMatrix c(mdim, 1);
    if (nv >= 1) {
      auto nv_vec = stacked.null_vector();
      c = *nv_vec;  // exists: rank < mdim
    } else {
      c.at(mdim - 1, 0) = ExactScalar(1);  // no variables: any column works
    }

    // Scalar column operation killing the last homogeneous block column.
    ExactMatrix k = completion_with_last_column(c);
    ExactMatrix k_full = ExactMatrix::identity(N);
    k_full.set_block(0, 0, k);
    for (auto& coeff : m) coeff = coeff * k_full;
    auto kinv = k.inverse();
    ExactMatrix kinv_full = ExactMatrix::identity(N);
    kinv_full.set_block(0, 0, *kinv);
    out.Q = out.Q * PolyMatrix::from_scalar(k_full, nv);
    out.Q_inverse = PolyMatrix::from_scalar(kinv_full, nv) * out.Q_inverse;

    // The constant part of that column must be nonzero, else the block is
    // hollow and the pencil was not full.
    ExactMatrix a0 = m[0].block(0, mdim - 1, mdim, 1);
    if (a0.is_zero())
      throw NotReducibleError("monic_reduce: pencil is not full (hollow block reached)");

    ExactMatrix u1 = row_ops_to_last_unit(a0);
    ExactMatrix u1_full = ExactMatrix::identity(N);
    u1_full.set_block(0, 0, u1);
    for (auto& coeff : m) coeff = u1_full * coeff;
    out.U = u1_full * out.U;

    // Column p is now the pure unit e_p; clear row p by column operations
    // with linear entries.
    const int prow = mdim - 1;
    PolyMatrix e = PolyMatrix::identity(N, nv);
    PolyMatrix einv = PolyMatrix::identity(N, nv);
    bool nontrivial = false;
    for (int j = 0; j < prow; ++j) {
      NcPoly r(nv);
      if (!m[0].at(prow, j).is_zero()) r.set_coeff(Word(), m[0].at(prow, j));
      for (int i = 1; i <= nv; ++i)
        if (!m[i].at(prow, j).is_zero()) r.set_coeff(Word({i}), m[i].at(prow, j));
      if (r.is_zero()) continue;
      e.at(prow, j) = -r;
      einv.at(prow, j) = r;
      nontrivial = true;
      m[0].at(prow, j) = ExactScalar(0);
      for (int i = 1; i <= nv; ++i) m[i].at(prow, j) = ExactScalar(0);
    }
    if (nontrivial) {
      out.Q = out.Q * e;
      out.Q_inverse = einv * out.Q_inverse;
    }
    --mdim;
  }

  out.s = N - mdim;
  out.B = LinearPencil(mdim, nv);
  for (int i = 0; i <= nv; ++i) out.B.coeffs[i] = m[i].block(0, 0, mdim, mdim);
  return out;
}

}  // namespace ncfield
