#include "aqedc/magnon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aqedc {

namespace {

ComplexMatrix pauli(char which) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  switch (which) {
    case 'x': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'y': m(0, 1) = Complex(0, -1); m(1, 0) = Complex(0, 1); break;
    case 'z': m(0, 0) = 1; m(1, 1) = -1; break;
    default: throw std::logic_error("unknown pauli");
  }
  return m;
}

// op acting on sites (a, a+1 mod n), identity elsewhere
ComplexMatrix two_site_term(const ComplexMatrix& opa, const ComplexMatrix& opb, int a, int n) {
  const int b = (a + 1) % n;
  ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) {
    if (s == a)
      acc = kron(acc, opa).eval();
    else if (s == b)
      acc = kron(acc, opb).eval();
    else
      acc = kron(acc, ComplexMatrix::Identity(2, 2)).eval();
  }
  return acc;
}

ComplexMatrix single_site_sum(const ComplexMatrix& op, int n) {
  const long dim = 1L << n;
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  for (int a = 0; a < n; ++a) {
    ComplexMatrix term = ComplexMatrix::Identity(1, 1);
    for (int s = 0; s < n; ++s)
      term = kron(term, s == a ? op : ComplexMatrix::Identity(2, 2)).eval();
    acc += term;
  }
  return acc;
}

}  // namespace

ComplexMatrix xxx_hamiltonian(int n) {
  if (n < 2 || n > kHamiltonianDenseCap)
    throw std::invalid_argument("xxx_hamiltonian: n out of dense range");
  const long dim = 1L << n;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int a = 0; a < n; ++a) {
    h -= 0.25 * two_site_term(pauli('x'), pauli('x'), a, n);
    h -= 0.25 * two_site_term(pauli('y'), pauli('y'), a, n);
    h -= 0.25 * two_site_term(pauli('z'), pauli('z'), a, n);
  }
  return h;
}

ComplexMatrix total_lowering(int n) {
  ComplexMatrix sm = ComplexMatrix::Zero(2, 2);
  sm(0, 1) = 1;  // |0><1|
  return single_site_sum(sm, n);
}

ComplexMatrix total_raising(int n) {
  ComplexMatrix sp = ComplexMatrix::Zero(2, 2);
  sp(1, 0) = 1;
  return single_site_sum(sp, n);
}

ComplexMatrix total_sz(int n) {
  ComplexMatrix s3 = ComplexMatrix::Zero(2, 2);
  s3(0, 0) = -0.5;
  s3(1, 1) = 0.5;
  return single_site_sum(s3, n);
}

std::pair<MpsTensor, ComplexMatrix> magnon_mps(int n) {
  const Complex w = std::exp(Complex(0, 2 * M_PI / n));
  MpsTensor a(2, 2);
  a.m[0](1, 0) = 1;  // |1><0|
  a.m[1](0, 0) = 1;
  a.m[1](1, 1) = w;
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1;  // |0><1|
  return {a, x};
}

std::pair<MpoTensor, ComplexMatrix> lowering_mpo() {
  MpoTensor o(2, 2);
  o.m[0][0] = ComplexMatrix::Identity(2, 2);
  o.m[1][1] = ComplexMatrix::Identity(2, 2);
  o.m[0][1](1, 0) = 1;  // |1><0| on the virtual space
  ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  x(0, 1) = 1;
  return {o, x};
}

ComplexMatrix spin_raising(int s) {
  ComplexMatrix jp = ComplexMatrix::Zero(s + 1, s + 1);
  const double j = s / 2.0;
  for (int k = 0; k + 1 <= s; ++k) {
    const double m = k - j;
    jp(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  return jp;
}

std::pair<MpoTensor, ComplexMatrix> compressed_mpo(int s) {
  if (s < 0) throw std::invalid_argument("compressed_mpo: negative power");
  MpoTensor o(2, s + 1);
  o.m[0][0] = ComplexMatrix::Identity(s + 1, s + 1);
  o.m[1][1] = ComplexMatrix::Identity(s + 1, s + 1);
  o.m[0][1] = spin_raising(s);
  ComplexMatrix x = ComplexMatrix::Zero(s + 1, s + 1);
  x(0, s) = 1;  // |s/2,-s/2><s/2,+s/2|
  return {o, x};
}

std::pair<MpsTensor, ComplexMatrix> magnon_descendant_tensor(int n, int s) {
  auto [a, xa] = magnon_mps(n);
  if (s == 0) return {a, xa};
  auto [o, xo] = compressed_mpo(s);
  return {mpo_diamond_mps(o, a), kron(xo, xa)};
}

double magnon_norm_sq_exact(int n, int s) {
  if (s < 0 || s > n - 2) throw std::invalid_argument("magnon norm: s out of range");
  // n (n-2)! s! / (n-2-s)! = n * s! * (n-2)(n-3)...(n-1-s)
  double value = n;
  for (int t = 0; t < s; ++t) value *= (n - 2 - t);
  for (int t = 2; t <= s; ++t) value *= t;
  return value;
}

MagnonState magnon_state(int n, int s, MagnonRep rep) {
  if (s < 0 || s > n - 2) throw std::invalid_argument("magnon_state: s out of range");
  MagnonState st;
  st.n = n;
  st.s = s;
  st.rep = rep;
  st.norm = std::sqrt(magnon_norm_sq_exact(n, s));
  auto [t, x] = magnon_descendant_tensor(n, s);
  st.tensor = t;
  st.boundary = x;
  if (rep == MagnonRep::Dense) {
    st.dense = dense_state(t, x, n) / st.norm;
  }
  return st;
}

MagnonTransfer magnon_transfer(int r, int s, int n) {
  if (r < 0 || s < 0) throw std::invalid_argument("magnon_transfer: negative magnetization");
  MagnonTransfer out;
  out.r = r;
  out.s = s;
  out.n = n;
  auto [ar, xr] = magnon_descendant_tensor(n, r);
  auto [as, xs] = magnon_descendant_tensor(n, s);
  out.matrix = transfer_matrix(ar, as);

  // E_{r,s} is lower triangular, so the spectrum is exactly its diagonal.
  const Complex w = std::exp(Complex(0, 2 * M_PI / n));
  const double tol = 1e-7;
  for (Eigen::Index i = 0; i < out.matrix.rows(); ++i) {
    const Complex d = out.matrix(i, i);
    if (std::abs(d - Complex(1.0)) < tol)
      ++out.mult_one;
    else if (std::abs(d - w) < tol)
      ++out.mult_omega;
    else if (std::abs(d - std::conj(w)) < tol)
      ++out.mult_omega_bar;
    else
      throw std::runtime_error("magnon_transfer: unexpected diagonal entry");
  }

  JordanOptions opts;
  opts.seeds = {Complex(1.0), w, std::conj(w)};
  out.jordan = jordan_profile(out.matrix, opts);
  return out;
}

ComplexMatrix reduce_support_to_prefix(const ComplexMatrix& f, const std::vector<int>& support,
                                       int n) {
  const int d = static_cast<int>(support.size());
  long fdim = 1;
  for (int k = 0; k < d; ++k) fdim *= 2;
  if (f.rows() != fdim || f.cols() != fdim)
    throw std::invalid_argument("reduce_support: operator size mismatch");

  std::vector<int> sites(support);
  for (int& x : sites) x = ((x % n) + n) % n;
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
    throw std::invalid_argument("reduce_support: repeated sites");

  // Bubble each support site to the front, tracking per-position Z exponents:
  // a transposition (j, j+1) acts on the descendant subspace as Z^t(-1)_j Z_{j+1}.
  std::vector<int> arrangement(n), phase(n, 0);
  for (int i = 0; i < n; ++i) arrangement[i] = i;
  for (int k = 0; k < d; ++k) {
    int q = k;
    while (arrangement[q] != sites[k]) ++q;
    for (int j = q - 1; j >= k; --j) {
      std::swap(arrangement[j], arrangement[j + 1]);
      std::swap(phase[j], phase[j + 1]);
      phase[j] -= 1;
      phase[j + 1] += 1;
    }
  }

  // Ftilde = D^dag F D with D = (x)_{k<d} Z^{phase_k}; phases outside [d] cancel.
  const Complex w = std::exp(Complex(0, 2 * M_PI / n));
  StateVector dphase(fdim);
  for (long idx = 0; idx < fdim; ++idx) {
    int expo = 0;
    long tmp = idx;
    for (int k = d - 1; k >= 0; --k) {
      if (tmp & 1) expo += phase[k];
      tmp >>= 1;
    }
    dphase(idx) = std::pow(w, expo);
  }
  ComplexMatrix ft = f;
  for (long rI = 0; rI < fdim; ++rI)
    for (long c = 0; c < fdim; ++c) ft(rI, c) = std::conj(dphase(rI)) * f(rI, c) * dphase(c);
  return ft;
}

Complex magnon_matrix_element(int n, int r, int s, const ComplexMatrix& f,
                              const std::vector<int>& support) {
  if (r < 0 || r > n - 2 || s < 0 || s > n - 2)
    throw std::invalid_argument("magnon_matrix_element: magnetization out of range");
  const int d = static_cast<int>(support.size());
  ComplexMatrix ft = reduce_support_to_prefix(f, support, n);
  std::vector<int> prefix(d);
  for (int k = 0; k < d; ++k) prefix[k] = k;
  auto [ar, xr] = magnon_descendant_tensor(n, r);
  auto [as, xs] = magnon_descendant_tensor(n, s);
  Complex raw = matrix_element_transfer(ar, xr, as, xs, ft, prefix, n);
  return raw / (std::sqrt(magnon_norm_sq_exact(n, r)) * std::sqrt(magnon_norm_sq_exact(n, s)));
}

namespace {

// Fixed-(n, r, s) evaluator for prefix-supported operators: caches the mixed
// transfer operator, its (n - d)-th power, and the boundary so that sweeping
// many operators costs only the d leg contractions each.
class PrefixElement {
 public:
  PrefixElement(int n, int r, int s, int d) : n_(n), d_(d) {
    auto [ar, xr] = magnon_descendant_tensor(n, r);
    auto [as, xs] = magnon_descendant_tensor(n, s);
    ar_ = ar;
    as_ = as;
    tail_ = matrix_power(transfer_matrix(ar, as), n - d) * kron(xr.conjugate(), xs);
    norm_ = std::sqrt(magnon_norm_sq_exact(n, r) * magnon_norm_sq_exact(n, s));
    legs_.resize(2);
    for (int i = 0; i < 2; ++i) {
      legs_[i].resize(2);
      for (int j = 0; j < 2; ++j) legs_[i][j] = kron(ar_.m[i].conjugate(), as_.m[j]);
    }
  }

  Complex operator()(const ComplexMatrix& f) const {
    const long fdim = f.rows();
    Complex acc = 0.0;
    std::vector<int> bra(d_), ket(d_);
    for (long r = 0; r < fdim; ++r) {
      long tmp = r;
      for (int k = d_ - 1; k >= 0; --k) { bra[k] = tmp & 1; tmp >>= 1; }
      for (long c = 0; c < fdim; ++c) {
        if (f(r, c) == Complex(0.0)) continue;
        tmp = c;
        for (int k = d_ - 1; k >= 0; --k) { ket[k] = tmp & 1; tmp >>= 1; }
        ComplexMatrix prod = legs_[bra[0]][ket[0]];
        for (int k = 1; k < d_; ++k) prod = prod * legs_[bra[k]][ket[k]];
        acc += f(r, c) * (prod * tail_).trace();
      }
    }
    return acc / norm_;
  }

 private:
  int n_, d_;
  MpsTensor ar_, as_;
  ComplexMatrix tail_;
  double norm_ = 1.0;
  std::vector<std::vector<ComplexMatrix>> legs_;
};

}  // namespace

ScalingExperiment magnon_scaling_experiment(int r, int s, int d, const std::vector<long>& n_grid,
                                            std::uint64_t seed, int num_random_ops, int s0_diag) {
  if (n_grid.size() < 4) throw std::invalid_argument("scaling experiment: grid too small");
  const long fdim = 1L << d;

  // operator sample drawn once, reused across the grid
  std::vector<ComplexMatrix> ops;
  Rng rng(seed);
  for (int i = 0; i < num_random_ops; ++i) {
    ComplexMatrix g = rng.derive(i).gaussian_matrix(fdim, fdim);
    Eigen::JacobiSVD<ComplexMatrix> svd(g);
    ops.push_back(g / svd.singularValues()(0));
  }
  if (d <= 2) {
    const ComplexMatrix paulis[4] = {ComplexMatrix::Identity(2, 2), pauli('x'), pauli('y'),
                                     pauli('z')};
    if (d == 1) {
      for (int a = 1; a < 4; ++a) ops.push_back(paulis[a]);
    } else {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          if (a == 0 && b == 0) continue;
          ops.push_back(kron(paulis[a], paulis[b]));
        }
    }
  }

  ScalingExperiment out;
  for (long n : n_grid) {
    ScalingRow row;
    row.n = n;
    PrefixElement off(static_cast<int>(n), r, s, d);
    for (const auto& f : ops) row.off_diag = std::max(row.off_diag, std::abs(off(f)));
    if (s0_diag >= 1) {
      std::vector<std::vector<Complex>> diag_vals(s0_diag + 1);
      for (int u = 0; u <= s0_diag; ++u) {
        PrefixElement ctx(static_cast<int>(n), u, u, d);
        for (const auto& f : ops) diag_vals[u].push_back(ctx(f));
      }
      for (size_t k = 0; k < ops.size(); ++k)
        for (int u = 0; u <= s0_diag; ++u)
          for (int v = u + 1; v <= s0_diag; ++v)
            row.diag_diff = std::max(row.diag_diff, std::abs(diag_vals[u][k] - diag_vals[v][k]));
    }
    out.rows.push_back(row);
  }

  std::vector<std::pair<double, double>> off, diag;
  for (const auto& row : out.rows) {
    if (row.off_diag > 1e-13) off.emplace_back(static_cast<double>(row.n), row.off_diag);
    if (row.diag_diff > 1e-13) diag.emplace_back(static_cast<double>(row.n), row.diag_diff);
  }
  if (r != s && off.size() == out.rows.size())
    out.off_diag_fit = fit_exponent(off);
  else if (r != s)
    out.off_diag_degenerate = true;
  if (s0_diag >= 1 && diag.size() == out.rows.size()) out.diag_diff_fit = fit_exponent(diag);
  return out;
}

double reduced_overlap_check(int n, int s, int d, MagnonRep rep) {
  if (d < 0 || d >= n) throw std::invalid_argument("reduced_overlap: bad region size");
  if (d == 0) return 1.0;
  if (rep == MagnonRep::Dense) {
    MagnonState st = magnon_state(n, s, MagnonRep::Dense);
    ComplexMatrix rho = st.dense * st.dense.adjoint();
    std::vector<int> dims(n, 2), keep(d);
    for (int k = 0; k < d; ++k) keep[k] = k;
    ComplexMatrix red = partial_trace(rho, dims, keep);
    return red(red.rows() - 1, red.cols() - 1).real();  // <1|^d rho_d |1>^d
  }
  auto [as, xs] = magnon_descendant_tensor(n, s);
  const ComplexMatrix e = transfer_matrix(as, as);
  const ComplexMatrix b = kron(xs.conjugate(), xs);
  const double shorter = (matrix_power(e, n - d) * b).trace().real();
  const double full = (matrix_power(e, n) * b).trace().real();
  return shorter / full;
}

}  // namespace aqedc
