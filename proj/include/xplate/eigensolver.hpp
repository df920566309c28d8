#ifndef XPLATE_EIGENSOLVER_HPP
#define XPLATE_EIGENSOLVER_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace xplate {

using SpMat = Eigen::SparseMatrix<double>;

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

enum class EigSelect {
  Smallest,  // eigenvalues closest to zero (shift-invert about 0), ascending
  Largest,   // algebraically largest, descending
};

struct EigOptions {
  double tol = 1e-8;       // relative pencil residual per returned pair
  int dense_cutoff = 1200;  // below this dimension a dense solve is used
  int force_method = 0;    // 0 auto, 1 dense, 2 Lanczos (used by tests)
  unsigned seed = 0x9e3779b9u;
};

/// Eigenpairs of P x = mu Q x with P symmetric and Q symmetric positive
/// definite. Below the cutoff the pencil is solved densely; above it a
/// Lanczos iteration with full Q-reorthogonalization runs on the
/// LDLT-applied operator (P^-1 Q for Smallest, Q^-1 P for Largest). Every
/// returned pair satisfies |P v - mu Q v| <= tol |P v|.
std::vector<EigenPair> generalized_symmetric_eig(const SpMat& P, const SpMat& Q,
                                                 int k, EigSelect sel,
                                                 const EigOptions& opt = {});

}  // namespace xplate

#endif
