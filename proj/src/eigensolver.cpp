#include "xplate/eigensolver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>

#include "xplate/errors.hpp"

namespace xplate {

namespace {

double pair_residual(const SpMat& P, const SpMat& Q, double mu,
                     const Eigen::VectorXd& v) {
  const Eigen::VectorXd Pv = P * v;
  const Eigen::VectorXd Qv = Q * v;
  // Near-null pairs (rigid modes of an unconstrained pencil) make the
  // forward denominator vanish; the backward-error scale takes over there.
  const double backward = 1e-4 * std::sqrt(P.squaredNorm()) * v.norm();
  const double denom =
      std::max({Pv.norm(), std::abs(mu) * Qv.norm(), backward, 1e-300});
  return (Pv - mu * Qv).norm() / denom;
}

// Shift-inverted iteration to polish a pair coming out of the dense
// factorization; for stiff pencils the forward-form dense residual of the
// small eigenvalues sits well above machine precision.
void refine_pair(const SpMat& P, const SpMat& Q, double tol, EigenPair& p) {
  for (int iter = 0; iter < 3; ++iter) {
    if (pair_residual(P, Q, p.value, p.vector) <= 0.05 * tol) return;
    const double shift =
        p.value * (1.0 + 1e-8) + (p.value == 0.0 ? 1e-12 : 0.0);
    SpMat S = P - shift * Q;
    Eigen::SparseLU<SpMat> lu(S);
    if (lu.info() != Eigen::Success) return;
    Eigen::VectorXd w = lu.solve(Q * p.vector);
    const double nrm = w.norm();
    if (!(nrm > 0) || !w.allFinite()) return;
    w /= nrm;
    const double qq = w.dot(Q * w);
    if (qq <= 0) return;
    p.value = w.dot(P * w) / qq;
    p.vector = std::move(w);
  }
}

void check_residuals(const SpMat& P, const SpMat& Q,
                     const std::vector<EigenPair>& pairs, double tol,
                     const char* where) {
  for (const EigenPair& p : pairs) {
    const double r = pair_residual(P, Q, p.value, p.vector);
    if (!(r <= tol))
      throw SolverError(std::string("eigensolver (") + where + "): pair at " +
                        std::to_string(p.value) + " has residual " +
                        std::to_string(r));
  }
}

std::vector<EigenPair> dense_path(const SpMat& P, const SpMat& Q, int k,
                                  EigSelect sel, const EigOptions& opt) {
  const Eigen::MatrixXd Pd(P);
  const Eigen::MatrixXd Qd(Q);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Pd, Qd);
  if (es.info() != Eigen::Success)
    throw SolverError("dense generalized eigensolver failed (Q not SPD?)");
  const int n = static_cast<int>(Pd.rows());
  k = std::min(k, n);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  if (sel == EigSelect::Smallest) {
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b));
    });
    idx.resize(k);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return es.eigenvalues()(a) < es.eigenvalues()(b);
    });
  } else {
    std::reverse(idx.begin(), idx.end());  // ascending -> descending
    idx.resize(k);
  }
  std::vector<EigenPair> out;
  out.reserve(k);
  for (int i : idx) {
    EigenPair p;
    p.value = es.eigenvalues()(i);
    p.vector = es.eigenvectors().col(i);
    p.vector.normalize();
    refine_pair(P, Q, opt.tol, p);
    out.push_back(std::move(p));
  }
  // refinement may nudge clustered values across each other
  if (sel == EigSelect::Smallest)
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  else
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
  check_residuals(P, Q, out, opt.tol, "dense");
  return out;
}

// Lanczos with full W-reorthogonalization for a W-self-adjoint operator.
// Smallest: op = P^-1 Q, W = Q, theta = 1/mu. Largest: op = Q^-1 P, W = Q,
// theta = mu.
std::vector<EigenPair> lanczos_path(const SpMat& P, const SpMat& Q, int k,
                                    EigSelect sel, const EigOptions& opt) {
  const int n = static_cast<int>(P.rows());
  k = std::min(k, n);

  Eigen::SimplicialLDLT<SpMat> fact;
  fact.compute(sel == EigSelect::Smallest ? P : Q);
  if (fact.info() != Eigen::Success)
    throw SolverError("eigensolver: LDLT factorization failed");
  if (sel == EigSelect::Largest && (fact.vectorD().array() <= 0.0).any())
    throw SolverError("eigensolver: inner-product matrix is not positive definite");

  auto apply_op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return sel == EigSelect::Smallest ? fact.solve(Q * v).eval()
                                      : fact.solve(P * v).eval();
  };

  const int m_max = std::min(n, std::max(300, 6 * k + 60));
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Eigen::VectorXd> V;   // W-orthonormal Lanczos vectors
  std::vector<Eigen::VectorXd> WV;  // Q * V, cached
  std::vector<double> alpha, beta;  // tridiagonal entries; beta[j] couples j, j+1

  auto w_reorth = [&](Eigen::VectorXd& r) {
    for (int pass = 0; pass < 2; ++pass)
      for (size_t i = 0; i < V.size(); ++i) r -= WV[i].dot(r) * V[i];
  };
  auto random_start = [&]() {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = gauss(rng);
    w_reorth(r);
    const double nrm = std::sqrt(r.dot(Q * r));
    if (nrm <= 0) throw SolverError("eigensolver: cannot generate a start vector");
    return Eigen::VectorXd(r / nrm);
  };

  V.push_back(random_start());
  WV.push_back(Q * V.back());

  int m_checkpoint = std::min(m_max, std::max(40, 2 * k + 24));
  std::vector<EigenPair> out;
  while (true) {
    while (static_cast<int>(alpha.size()) < m_checkpoint) {
      const int j = static_cast<int>(alpha.size());
      Eigen::VectorXd r = apply_op(V[j]);
      alpha.push_back(WV[j].dot(r));
      r -= alpha[j] * V[j];
      if (j > 0) r -= beta[j - 1] * V[j - 1];
      w_reorth(r);
      const double b = std::sqrt(std::max(0.0, r.dot(Q * r)));
      if (b < 1e-13) {
        // invariant subspace; deflate with a fresh direction
        beta.push_back(0.0);
        V.push_back(random_start());
      } else {
        beta.push_back(b);
        V.push_back(r / b);
      }
      WV.push_back(Q * V.back());
      if (static_cast<int>(alpha.size()) >= n) break;
    }

    // Ritz extraction from the tridiagonal.
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(T);

    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    if (sel == EigSelect::Smallest) {
      // theta = 1/mu: want the largest |theta|
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(tes.eigenvalues()(a)) > std::abs(tes.eigenvalues()(b));
      });
    } else {
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return tes.eigenvalues()(a) > tes.eigenvalues()(b);
      });
    }

    out.clear();
    bool converged = true;
    for (int t = 0; t < k && t < m; ++t) {
      const int i = idx[t];
      const double theta = tes.eigenvalues()(i);
      EigenPair p;
      if (sel == EigSelect::Smallest) {
        if (std::abs(theta) < 1e-300) { converged = false; break; }
        p.value = 1.0 / theta;
      } else {
        p.value = theta;
      }
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < m; ++j) x += tes.eigenvectors()(j, i) * V[j];
      x.normalize();
      p.vector = std::move(x);
      if (pair_residual(P, Q, p.value, p.vector) > opt.tol) {
        converged = false;
        break;
      }
      out.push_back(std::move(p));
    }
    if (converged && static_cast<int>(out.size()) == std::min(k, m)) break;
    if (m >= m_max)
      throw SolverError("eigensolver: no convergence after " + std::to_string(m) +
                        " Lanczos steps (subspace cap " + std::to_string(m_max) +
                        ", tol " + std::to_string(opt.tol) + ")");
    m_checkpoint = std::min(m_max, m + std::max(20, m / 2));
  }

  if (sel == EigSelect::Smallest)
    std::sort(out.begin(), out.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  check_residuals(P, Q, out, opt.tol, "lanczos");
  return out;
}

}  // namespace

std::vector<EigenPair> generalized_symmetric_eig(const SpMat& P, const SpMat& Q,
                                                 int k, EigSelect sel,
                                                 const EigOptions& opt) {
  if (P.rows() != P.cols() || Q.rows() != Q.cols() || P.rows() != Q.rows())
    throw std::invalid_argument("eigensolver: dimension mismatch");
  if (k < 1) throw std::invalid_argument("eigensolver: k must be >= 1");
  const int n = static_cast<int>(P.rows());
  const bool dense =
      opt.force_method == 1 || (opt.force_method == 0 && n < opt.dense_cutoff);
  return dense ? dense_path(P, Q, k, sel, opt) : lanczos_path(P, Q, k, sel, opt);
}

}  // namespace xplate
