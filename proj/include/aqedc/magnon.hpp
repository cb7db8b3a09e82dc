#pragma once

#include <utility>
#include <vector>

#include "aqedc/fit.hpp"
#include "aqedc/linalg.hpp"
#include "aqedc/mps.hpp"

namespace aqedc {

// Heisenberg-XXX chain, the one-magnon state Psi = wbar sum_r w^r s_r^- |1...1>
// with w = exp(2 pi i / n), and its lowering-operator descendants Psi_s = S_-^s Psi.
// All tensors below depend on n through w even though they are site-independent.

inline constexpr int kHamiltonianDenseCap = 14;

// H = -1/4 sum_m (XX + YY + ZZ) with periodic wrap, as a dense 2^n x 2^n matrix.
ComplexMatrix xxx_hamiltonian(int n);

// Dense total spin operators on n qubits (s^- = |0><1| per site).
ComplexMatrix total_lowering(int n);
ComplexMatrix total_raising(int n);
ComplexMatrix total_sz(int n);

// One-magnon MPS: A0 = |1><0|, A1 = diag(1, w), boundary X = |0><1|.
std::pair<MpsTensor, ComplexMatrix> magnon_mps(int n);

// Bond-dimension-2 MPO of S_- (boundary sigma_-).
std::pair<MpoTensor, ComplexMatrix> lowering_mpo();

// Compressed bond-dimension-(s+1) MPO of S_-^s on the spin-s/2 virtual space,
// boundary |s/2,-s/2><s/2,s/2|.
std::pair<MpoTensor, ComplexMatrix> compressed_mpo(int s);

// Spin-s/2 raising operator J+ on C^{s+1} (basis index k <-> m = k - s/2).
ComplexMatrix spin_raising(int s);

// MPS tensor and boundary of the (unnormalized) descendant Psi_s on n sites,
// via the compressed MPO: bond dimension 2(s+1).
std::pair<MpsTensor, ComplexMatrix> magnon_descendant_tensor(int n, int s);

// ||Psi_s||^2 = n (n-2)! s! / (n-2-s)!  (evaluated as a product, no factorials)
double magnon_norm_sq_exact(int n, int s);

enum class MagnonRep { Dense, Transfer };

// Normalized descendant state handle.
struct MagnonState {
  int n = 0;
  int s = 0;
  MagnonRep rep = MagnonRep::Transfer;
  StateVector dense;       // populated in dense mode
  MpsTensor tensor;        // populated in transfer mode
  ComplexMatrix boundary;  // with the tensor
  double norm = 0.0;       // of the unnormalized MPS
};
MagnonState magnon_state(int n, int s, MagnonRep rep);

struct MagnonTransfer {
  int r = 0, s = 0, n = 0;
  ComplexMatrix matrix;  // 4 (r+1)(s+1), lower triangular in the product basis
  int mult_one = 0, mult_omega = 0, mult_omega_bar = 0;  // exact diagonal counts
  JordanProfile jordan;  // clustered at the analytically known {1, w, wbar}
};

// Combined transfer operator E_{r,s} of the pair (Psi_r, Psi_s).
MagnonTransfer magnon_transfer(int r, int s, int n);

// Phase reduction of an arbitrary-support operator to the prefix [0, d):
// <Psi_r| F_A |Psi_s> = <Psi_r| Ftilde_{[d]} |Psi_s> with Ftilde a Z-phase
// conjugation of F. Nearest-neighbor transpositions act on the descendant
// subspace as Z^dag (x) Z, so any site permutation reduces to diagonal phases.
ComplexMatrix reduce_support_to_prefix(const ComplexMatrix& f, const std::vector<int>& support,
                                       int n);

// Normalized matrix element <psi_r| F_A (x) I |psi_s>. Transfer representation
// throughout; dense-cap independent.
Complex magnon_matrix_element(int n, int r, int s, const ComplexMatrix& f,
                              const std::vector<int>& support);

struct ScalingRow {
  long n = 0;
  double off_diag = 0.0;   // max sampled |<psi_r|F|psi_s>|
  double diag_diff = 0.0;  // max sampled |<psi_s|F|psi_s> - <psi_r|F|psi_r>| over r,s <= s0
};

struct ScalingExperiment {
  std::vector<ScalingRow> rows;
  FitResult off_diag_fit;   // slope of log max|<psi_r|F|psi_s>| vs log n (r != s)
  FitResult diag_diff_fit;  // slope of log max diagonal difference vs log n
  bool off_diag_degenerate = false;  // all sampled values at numerical zero
};

// Worst-of-sample decay of d-local matrix elements over an n-grid. The operator
// sample (64 random unit-norm d-local operators plus all d-local Pauli strings
// for d <= 2) is drawn once from the seed and reused across the grid.
// d-local operators cannot change the magnetization by more than d, so for
// |r - s| > d every off-diagonal element vanishes identically; the result is
// then flagged degenerate instead of fitted.
// s0_diag >= 1 additionally tracks max |<psi_v|F|psi_v> - <psi_u|F|psi_u>| over
// u < v <= s0_diag; s0_diag < 0 skips the diagonal sweep.
ScalingExperiment magnon_scaling_experiment(int r, int s, int d, const std::vector<long>& n_grid,
                                            std::uint64_t seed, int num_random_ops = 64,
                                            int s0_diag = -1);

// <1|^d tr_{n-d} |psi_s><psi_s| |1>^d, equal to ||Psi_s^{n-d}||^2 / ||Psi_s^n||^2.
double reduced_overlap_check(int n, int s, int d, MagnonRep rep = MagnonRep::Transfer);

}  // namespace aqedc
