#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "reilly/errors.hpp"
#include "reilly/sampling.hpp"
#include "reilly/spectral.hpp"

namespace reilly {

namespace {

double inf_norm(const SpMat& A) {
  Vec rows = Vec::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

SpMat restrict_to(const SpMat& A, const std::vector<int>& keep, int n) {
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) pos[static_cast<std::size_t>(keep[i])] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int r = pos[static_cast<std::size_t>(it.row())], c = pos[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  const int m = static_cast<int>(keep.size());
  SpMat out(m, m);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

void fix_sign(Vec& x) {
  Eigen::Index i = 0;
  x.cwiseAbs().maxCoeff(&i);
  if (x(i) < 0) x = -x;
}

/// M-orthonormalizes the columns of V against `basis` and among themselves (two passes);
/// columns that collapse are dropped.
Mat m_orthonormalize(const Mat& V, const Mat& basis, const SpMat& M) {
  Mat out(V.rows(), 0);
  Mat all = basis;
  for (int j = 0; j < V.cols(); ++j) {
    Vec v = V.col(j);
    const double start = std::sqrt(std::max(0.0, v.dot(M * v)));
    for (int pass = 0; pass < 2; ++pass) {
      if (all.cols() > 0) v -= all * (all.transpose() * (M * v));
    }
    const double nv = std::sqrt(std::max(0.0, v.dot(M * v)));
    if (!(nv > 1e-10 * start) || nv == 0.0) continue;
    v /= nv;
    all.conservativeResize(Eigen::NoChange, all.cols() + 1);
    all.col(all.cols() - 1) = v;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v;
  }
  return out;
}

struct Pairs {
  Vec values;
  Mat vectors;
};

Pairs dense_pairs(const SpMat& K, const SpMat& M, int k) {
  const Mat Kd = Mat(K), Md = Mat(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (Kd + Kd.transpose()), 0.5 * (Md + Md.transpose()));
  if (es.info() != Eigen::Success) throw EigenSolveError("dense generalized eigensolve failed (mass matrix not positive definite?)");
  return {es.eigenvalues().head(k), es.eigenvectors().leftCols(k)};
}

Pairs krylov_pairs(const SpMat& K, const SpMat& M, int k, const EigenOptions& opt, double Knorm) {
  const int n = static_cast<int>(K.rows());
  double shift = -std::max(1e-6, 1e-4 * Knorm / std::max(inf_norm(M), 1e-300));
  Eigen::SimplicialLDLT<SpMat> ldlt;
  ldlt.compute(K - shift * M);
  if (ldlt.info() != Eigen::Success) {
    shift *= 1.01;
    ldlt.compute(K - shift * M);
    if (ldlt.info() != Eigen::Success) throw EigenSolveError("factorization of K - sigma M failed after one shift retry");
  }
  const int block = std::min(n, k + 3);
  const int blocks = std::max(2, std::min(8, n / std::max(block, 1)));
  SeededRng rng(opt.seed);
  Mat X(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = rng.normal();
  X = m_orthonormalize(X, Mat(n, 0), M);

  Pairs best;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    Mat V = X;
    Mat W = X;
    for (int b = 1; b < blocks && V.cols() < n; ++b) {
      Mat S(n, W.cols());
      for (int j = 0; j < W.cols(); ++j) S.col(j) = ldlt.solve(M * W.col(j));
      W = m_orthonormalize(S, V, M);
      if (W.cols() == 0) break;
      V.conservativeResize(Eigen::NoChange, V.cols() + W.cols());
      V.rightCols(W.cols()) = W;
    }
    const Mat KV = K * V, MV = M * V;
    const Mat Kp = V.transpose() * KV, Mp = V.transpose() * MV;
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (Kp + Kp.transpose()), 0.5 * (Mp + Mp.transpose()));
    if (es.info() != Eigen::Success) throw EigenSolveError("Rayleigh-Ritz step failed");
    const int keep = std::min<int>(block, static_cast<int>(V.cols()));
    const Mat Y = V * es.eigenvectors().leftCols(keep);
    best = {es.eigenvalues().head(k), Y.leftCols(k)};
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      const Vec x = Y.col(j);
      const Vec mx = M * x;
      const double r = (K * x - best.values(j) * mx).norm() / mx.norm();
      worst = std::max(worst, r / std::max(1.0, std::abs(best.values(j))));
    }
    if (worst <= opt.tolerance) return best;
    X = m_orthonormalize(Y, Mat(n, 0), M);
  }
  return best;
}

}  // namespace

int EigenResult::lambda1_index() const {
  if (eigenvalues.empty()) throw ContractViolation("empty eigen result");
  if (bc == BoundaryCondition::dirichlet) return 0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] > zero_threshold) return static_cast<int>(i);
  throw EigenSolveError("no eigenvalue above the zero-mode threshold; increase k");
}

int EigenResult::lambda1_multiplicity(double rel_tol) const {
  const int i1 = lambda1_index();
  const double l1 = eigenvalues[static_cast<std::size_t>(i1)];
  int count = 0;
  for (std::size_t i = static_cast<std::size_t>(i1); i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues[i] - l1) <= rel_tol * l1) ++count;
  return count;
}

EigenResult lowest_eigenpairs(const SpMat& K, const SpMat& M, int k, BoundaryCondition bc,
                              const std::vector<bool>& boundary_marks, const EigenOptions& opt) {
  const int n = static_cast<int>(K.rows());
  if (K.cols() != n || M.rows() != n || M.cols() != n) throw ContractViolation("K and M must be square and of equal size");
  if (k < 1) throw ContractViolation("k must be >= 1");
  std::vector<int> keep;
  if (bc == BoundaryCondition::dirichlet) {
    if (static_cast<int>(boundary_marks.size()) != n) throw ContractViolation("boundary marks do not match the system size");
    for (int i = 0; i < n; ++i)
      if (!boundary_marks[static_cast<std::size_t>(i)]) keep.push_back(i);
    if (static_cast<int>(keep.size()) == n) throw ContractViolation("dirichlet condition requested on a mesh without boundary");
  } else {
    for (int i = 0; i < n; ++i) keep.push_back(i);
  }
  const SpMat Kr = bc == BoundaryCondition::dirichlet ? restrict_to(K, keep, n) : K;
  const SpMat Mr = bc == BoundaryCondition::dirichlet ? restrict_to(M, keep, n) : M;
  const int m = static_cast<int>(keep.size());
  if (k > m) throw ContractViolation("k exceeds the number of unknowns");

  EigenResult res;
  res.bc = bc;
  res.unknowns = m;
  const double Knorm = inf_norm(K);
  res.zero_threshold = 1e-8 * Knorm;
  res.dense = opt.force_dense || m <= opt.dense_threshold;
  const Pairs p = res.dense ? dense_pairs(Kr, Mr, k) : krylov_pairs(Kr, Mr, k, opt, Knorm);

  res.eigenvectors = Mat::Zero(n, k);
  for (int j = 0; j < k; ++j) {
    Vec x = p.vectors.col(j);
    x /= std::sqrt(x.dot(Mr * x));
    fix_sign(x);
    const Vec mx = Mr * x;
    res.eigenvalues.push_back(p.values(j));
    res.residuals.push_back((Kr * x - p.values(j) * mx).norm() / mx.norm());
    for (int i = 0; i < m; ++i) res.eigenvectors(keep[static_cast<std::size_t>(i)], j) = x(i);
  }
  for (double r : res.residuals)
    if (!(r <= 1e-8 * std::max(1.0, res.eigenvalues.back())))
      throw EigenSolveError("eigensolver did not reach residual 1e-8 (got " + std::to_string(r) + ")");
  return res;
}

}  // namespace reilly
