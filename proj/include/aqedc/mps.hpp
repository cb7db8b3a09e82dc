#pragma once

#include <optional>
#include <vector>

#include "aqedc/linalg.hpp"
#include "aqedc/rng.hpp"

namespace aqedc {

// Site-independent MPS: p matrices of shape D x D. State amplitudes on n sites
// with boundary X are tr(A_{i_1} ... A_{i_n} X), site 1 most significant.
struct MpsTensor {
  int phys = 0;
  int bond = 0;
  std::vector<ComplexMatrix> m;  // m[i] for physical index i

  MpsTensor() = default;
  MpsTensor(int p, int D) : phys(p), bond(D), m(p, ComplexMatrix::Zero(D, D)) {}

  void check() const;
};

// Site-independent MPO: matrices O_{i,j} on the virtual space, indexed by the
// physical (out, in) pair.
struct MpoTensor {
  int phys = 0;
  int bond = 0;
  std::vector<std::vector<ComplexMatrix>> m;  // m[i][j] = O_{i,j}

  MpoTensor() = default;
  MpoTensor(int p, int D)
      : phys(p), bond(D), m(p, std::vector<ComplexMatrix>(p, ComplexMatrix::Zero(D, D))) {}
};

// MPO tensor product: (o1 <> o2)_{i,j} = sum_k o1_{i,k} (x) o2_{k,j}.
MpoTensor mpo_diamond(const MpoTensor& o1, const MpoTensor& o2);

// MPS tensor of the state O|Psi>: (o <> a)_i = sum_j o_{i,j} (x) a_j,
// with boundary Y (x) X.
MpsTensor mpo_diamond_mps(const MpoTensor& o, const MpsTensor& a);

// Dense p^n x p^n operator represented by an MPO with boundary x (small n only).
ComplexMatrix mpo_dense(const MpoTensor& o, const ComplexMatrix& x, int n);

inline constexpr long kDenseAmplitudeCap = 1L << 20;

struct TransferOperator {
  ComplexMatrix matrix;       // D1 D2 x D1 D2
  double rho = 0.0;           // spectral radius (square case)
  double lambda2 = 0.0;       // second largest eigenvalue modulus
  ComplexMatrix left_fixed;   // l with <<l| E = <<l|, as a D x D matrix
  ComplexMatrix right_fixed;  // r with E |r>> = |r>>
  bool fixed_points_valid = false;
};

// E = sum_m conj(a_m) (x) b_m. With b omitted, the standard transfer operator of a.
// Fixed points and lambda2 are populated when the matrix is square with rho ~ 1.
TransferOperator transfer_op(const MpsTensor& a);
TransferOperator transfer_op(const MpsTensor& a, const MpsTensor& b);

// Matrix of E alone, no spectral analysis.
ComplexMatrix transfer_matrix(const MpsTensor& a, const MpsTensor& b);

// E_Z = sum_{m,n} <m|Z|n> conj(a_m) (x) b_n for a single-site operator Z.
ComplexMatrix generalized_transfer(const MpsTensor& a, const MpsTensor& b,
                                   const ComplexMatrix& z);

// E_F for an operator f on d contiguous sites, by direct d-site contraction.
ComplexMatrix operator_transfer(const MpsTensor& a, const MpsTensor& b, const ComplexMatrix& f);

struct InjectivityReport {
  bool injective = false;
  double rho = 0.0;
  double lambda2 = 0.0;
  double fixed_point_min_eig = 0.0;
};

// True iff the dominant eigenvalue of E is unique in modulus (relative gap
// above gap_tol) and the right fixed point is positive definite.
InjectivityReport is_injective(const MpsTensor& a, double gap_tol = 1e-6);

// Rescale all matrices by 1/sqrt(rho(E)) so that the transfer map has spectral radius 1.
MpsTensor normalize_spectral_radius(const MpsTensor& a);

// Gauge-equivalent tensor in canonical form: right fixed point = identity, left
// fixed point = positive diagonal with unit trace. Throws for non-primitive input.
struct CanonicalMps {
  MpsTensor tensor;
  Eigen::VectorXd lambda;  // diagonal of the left fixed point, tr = 1
  double lambda2 = 0.0;
};
CanonicalMps canonicalize(const MpsTensor& a);

// Gaussian tensor, spectral-radius normalized, resampled until injective.
MpsTensor random_injective_mps(int p, int D, std::uint64_t seed);

// Dense state vector with amplitudes tr(A_{i_1}...A_{i_n} X), lexicographic order.
StateVector dense_state(const MpsTensor& a, const ComplexMatrix& x, int n);

// <Psi(a1,x1,n)| F_support (x) I |Psi(a2,x2,n)> by transfer contraction.
// The support lists the (0-based, sorted mod-n) sites f acts on; disconnected
// supports insert plain transfer powers between the components.
Complex matrix_element_transfer(const MpsTensor& a1, const ComplexMatrix& x1,
                                const MpsTensor& a2, const ComplexMatrix& x2,
                                const ComplexMatrix& f, const std::vector<int>& support, int n);

// ||Psi(a,x,n)||^2 = tr(E^n (conj(X) (x) X)), computed without dense expansion.
double mps_norm_sq(const MpsTensor& a, const ComplexMatrix& x, int n);

Complex mps_overlap(const MpsTensor& a1, const ComplexMatrix& x1, const MpsTensor& a2,
                    const ComplexMatrix& x2, int n);

}  // namespace aqedc
