#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace aqedc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Kronecker product in standard lexicographic block order:
/// out[(i*rb+k),(j*cb+l)] = a(i,j)*b(k,l).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Mat = Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Column-major vectorization. With this convention
//   kron(conj(A), B) * vectorize(X) == vectorize(B * X * A.adjoint()),
// and vectorize(X).dot(vectorize(Y)) equals the Hilbert-Schmidt product tr(X^dag Y).
StateVector vectorize(const ComplexMatrix& x);
ComplexMatrix devectorize(const StateVector& v, Eigen::Index rows, Eigen::Index cols);

// Reduced operator on the kept sites (indices into local_dims, 0-based, sorted),
// in the induced lexicographic basis.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& local_dims,
                            const std::vector<int>& keep);

struct JordanCluster {
  Complex eigenvalue;            // cluster representative
  int multiplicity = 0;          // algebraic multiplicity
  std::vector<int> block_sizes;  // sorted descending, sums to multiplicity
};

struct JordanProfile {
  std::vector<JordanCluster> clusters;
  int dim = 0;
  bool ill_conditioned = false;  // two clusters closer than 10x the clustering tolerance

  int largest_block() const;
  int blocks_at(const Complex& lambda, double tol) const;  // multiplicity lookup helper
};

struct JordanOptions {
  double cluster_tol = -1.0;  // <0: default 1e-7 * infinity-norm of the matrix
  double rank_tol = -1.0;     // <0: default 1e-9 (relative to sigma_max)
  std::vector<Complex> seeds; // optional analytically known cluster centers
};

/// Eigenvalue clusters plus Jordan block sizes recovered from the SVD rank chain
/// of (M - lambda I)^k. The number of blocks of size >= k is rank_{k-1} - rank_k.
JordanProfile jordan_profile(const ComplexMatrix& m, const JordanOptions& opts = {});

/// Operator norm (largest singular value) and Frobenius norm of m^k for each power.
std::vector<std::pair<double, double>> matrix_power_norms(const ComplexMatrix& m,
                                                          const std::vector<long>& powers);

// Eigenvalues of a general complex matrix, sorted by decreasing modulus.
Eigen::VectorXcd eigenvalues_by_modulus(const ComplexMatrix& m);

double spectral_radius(const ComplexMatrix& m);

// Numerical rank with singular values thresholded at tol * sigma_max.
int numerical_rank(const ComplexMatrix& m, double rel_tol);

ComplexMatrix matrix_power(const ComplexMatrix& m, long k);  // repeated squaring

}  // namespace aqedc
